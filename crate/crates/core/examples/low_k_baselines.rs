// Sign and sign + max quantizers against low-`K` PVQ at `L = 15`.

use pvq::baselines::{compare_baselines, write_baselines_csv};
use pvq::benchmark::Protocol;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rows = compare_baselines(15, &[2, 4, 6, 8], &Protocol::new(20_000, 11))?;
    write_baselines_csv(&rows, std::io::stdout().lock())?;
    let best = rows
        .iter()
        .filter(|r| r.cost_bits < 20.0)
        .min_by(|a, b| a.mse.total_cmp(&b.mse))
        .expect("rows are nonempty");
    println!("\nlowest MSE under 20 bits: {} {} ({:.4})", best.quantizer_name, best.params, best.mse);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
