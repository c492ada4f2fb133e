// Quantizes one vector at a few powers and prints each stage: deformed
// point on the L1 sphere, lattice point, codebook index, reconstruction.
//
// ```bash
// cargo run -p pvq --example quantize_vector
// ```

use pvq::enumerative::{decode_index, encode_index};
use pvq::geometry::{PowerParam, UnitVector};
use pvq::pyramid::{bit_cost, codebook_size, deform, quantize, reconstruct, QuantizerConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let x = UnitVector::normalize(&[0.9, -0.35, 0.2, 0.05, -0.1])?;
    let cfg = QuantizerConfig::new(x.dim(), 8)?;
    println!("codebook: {} points, {:.3} bits", codebook_size(cfg.l(), cfg.k()), bit_cost(cfg.l(), cfg.k()));

    for p in [1.0, 1.25, 1.5] {
        let p = PowerParam::new(p)?;
        let y = quantize(&x, cfg, p)?;
        let idx = encode_index(&y);
        assert_eq!(decode_index(&idx), y);
        let r = reconstruct(&y, p);
        let shown: Vec<String> = deform(x.coords(), p)?.iter().map(|v| format!("{v:.3}")).collect();
        println!("p={:.2}  deformed=({})  point={y}  index={idx}  error={:.5}", p.value(), shown.join(","), x.dist2(&r));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
