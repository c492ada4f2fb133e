// Sweeps the power for one `(L, K)` cell and prints the MSE curve.
//
// ```bash
// cargo run --release -p pvq --example power_sweep -- 2 15
// ```

use pvq::benchmark::{sweep_curve, ImprovementReport, PGrid, Protocol};

pub fn run_example_with(l: usize, k: u32, n: usize) -> Result<ImprovementReport, Box<dyn std::error::Error>> {
    let grid = PGrid::new(1.0, 1.5, 0.05)?;
    let cells = sweep_curve(l, k, &grid, &Protocol::new(n, 1))?;
    for c in &cells {
        let bar = "#".repeat((c.mse / cells[0].mse * 40.0) as usize);
        println!("p={:.2}  mse={:.5}  {bar}", c.p, c.mse);
    }
    let r = ImprovementReport::from_cells(&cells)?;
    println!("L={l} K={k}: best p={:.2}, {:.1}% below radial ({:.2} dB)", r.best_p, r.pct, r.db);
    Ok(r)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run_example_with(2, 15, 2_000).map(|_| ())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let l = args.first().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let k = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(15);
    run_example_with(l, k, 10_000).map(|_| ())
}
