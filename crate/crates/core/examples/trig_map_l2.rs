// For `L = 2` the map `y ↦ sin(πy/2)` spreads the `S(2, K)` grid evenly in
// angle. Compares its MSE with radial and power-projected PVQ.

use pvq::baselines::{trig_map, trig_mse};
use pvq::benchmark::{mse_on, SampleSet};
use pvq::geometry::{PowerParam, SamplingLaw};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = 6u32;
    println!("angles of the S(2,{k})+ grid:");
    for a in 0..=k {
        let m = trig_map([f64::from(a) / f64::from(k), f64::from(k - a) / f64::from(k)])?;
        println!("  ({a},{})  {:.4} deg", k - a, m[0].atan2(m[1]).to_degrees());
    }

    let samples = SampleSet::draw(2, 20_000, 5, SamplingLaw::Uniform);
    println!("\n  K   radial   p=1.24   trig");
    for k in [3, 5, 10, 15, 20] {
        let radial = mse_on(&samples, k, PowerParam::RADIAL);
        let power = mse_on(&samples, k, PowerParam::new(1.24)?);
        println!("{k:>3}  {radial:.6} {power:.6} {:.6}", trig_mse(&samples, k)?);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
