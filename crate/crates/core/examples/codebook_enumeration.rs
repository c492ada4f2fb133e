// Walks a small codebook in index order and shows how codebook sizes grow.
//
// Sizes are exact big integers, so indices stay decimal strings even where
// they overflow `u64`.

use num_bigint::BigUint;
use pvq::enumerative::{decode_value, encode_index};
use pvq::pyramid::{bit_cost, codebook_size};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (l, k) = (3, 2);
    println!("S({l},{k}) in index order:");
    let mut i = BigUint::ZERO;
    while i < codebook_size(l, k) {
        let y = decode_value(i.clone(), l, k)?;
        assert_eq!(encode_index(&y).value(), &i);
        println!("  {i:>2}  {y}");
        i += 1u32;
    }

    println!("\n  L    K  size  bits");
    for (l, k) in [(8, 8), (15, 4), (16, 16), (40, 40), (64, 128)] {
        println!("{l:>3} {k:>4}  {}  {:.2}", codebook_size(l, k), bit_cost(l, k));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
