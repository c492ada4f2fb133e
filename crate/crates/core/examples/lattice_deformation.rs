// Optimizes where the `L = 3` lattice points sit on the sphere and compares
// the result with plain radial projection.
//
// ```bash
// cargo run --release -p pvq --example lattice_deformation -- 15
// ```

use pvq::lattice::{
    build_lattice, central_edge_length, edge_length_stats, optimize, OptimizerSettings, PointConfiguration,
};

pub fn run_example_with(k: u32) -> Result<(), Box<dyn std::error::Error>> {
    let g = build_lattice(k)?;
    let radial = PointConfiguration::radial(&g);
    let out = optimize(&g, &radial, OptimizerSettings::default())?;
    println!("K={k}: {} vertices, {} edges, {} steps", g.vertices().len(), g.edges().len(), out.steps);
    println!("objective      {:.6e} -> {:.6e}", out.trace[0], out.trace.last().unwrap());
    println!("central edge   {:.5} -> {:.5}", central_edge_length(&radial, &g), central_edge_length(&out.config, &g));
    let ((m0, v0), (m1, v1)) = (edge_length_stats(&radial, &g), edge_length_stats(&out.config, &g));
    println!("edge mean/var  {m0:.5}/{v0:.3e} -> {m1:.5}/{v1:.3e}");

    // how far each vertex moved, along the a = b diagonal
    for (i, v) in g.vertices().iter().enumerate().filter(|(_, v)| v[0] == v[1]) {
        let (p, q) = (radial.points()[i], out.config.points()[i]);
        let d = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
        println!("  {v:?}  moved {d:.4}");
    }
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    run_example_with(6)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(15);
    run_example_with(k)
}
