// Refits the sign + max reconstruction profiles and rewrites
// `data/sign_max_profile.csv`.
//
// ```bash
// cargo run --release -p pvq --example fit_baselines
// ```

use std::fs::File;
use std::path::Path;

use pvq::baselines::write_profile_csv;

const SAMPLES: usize = 1_000_000;
const SEED: u64 = 0x5157_0001;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sign_max_profile.csv");
    let ls: Vec<usize> = (2..=32).collect();
    write_profile_csv(&ls, SAMPLES, SEED, File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
