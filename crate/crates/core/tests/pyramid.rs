mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use pvq::geometry::{PowerParam, SamplingLaw, UnitVector};
use pvq::pyramid::{bit_cost, codebook_size, quantize, quantize_abs, reconstruct, PyramidPoint, QuantizerConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{closed_form_size, enumerate_pyramid, mathematica_quant, unit};

fn random_simplex(rng: &mut ChaCha8Rng, l: usize) -> Vec<f64> {
    // mix of sparse and dense inputs, plus exact-half ties from small grids
    let mut v: Vec<f64> = match rng.random_range(0..3) {
        0 => (0..l).map(|_| rng.random::<f64>()).collect(),
        1 => (0..l).map(|_| if rng.random_bool(0.3) { rng.random::<f64>() } else { 0.0 }).collect(),
        _ => (0..l).map(|_| f64::from(rng.random_range(0..4u8))).collect(),
    };
    if v.iter().all(|&x| x == 0.0) {
        v[0] = 1.0;
    }
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    // renormalize until the float sum is within tolerance
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

#[test]
fn quantize_abs_matches_reference_listing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xabcd);
    for _ in 0..100_000 {
        let l = rng.random_range(2..=20);
        let k = rng.random_range(1..=20u32);
        let va = random_simplex(&mut rng, l);
        let before: Vec<f64> = va.iter().map(|v| (f64::from(k) * v).round_ties_even()).collect();
        let got = quantize_abs(&va, k).unwrap();
        assert_eq!(got, mathematica_quant(&va, i64::from(k)), "va={va:?} k={k}");
        assert_eq!(got.iter().sum::<i64>(), i64::from(k));
        assert!(got.iter().all(|&v| v >= 0));
        // a slot that rounded to zero is never decremented
        for (g, b) in got.iter().zip(&before) {
            if *b == 0.0 {
                assert!(*g >= 0);
            }
            assert!((*g as f64 - b).abs() <= 1.0);
        }
    }
}

#[test]
fn reference_listing_hand_traces() {
    assert_eq!(mathematica_quant(&[0.5, 0.3, 0.2], 4), vec![2, 1, 1]);
    assert_eq!(mathematica_quant(&[1.0, 0.0], 3), vec![3, 0]);
    assert_eq!(mathematica_quant(&[0.5, 0.25, 0.25], 2), vec![1, 1, 0]);
}

#[test]
fn power_quantization_hand_trace() {
    // x = (cos 0.3, sin 0.3), p = 1.24, K = 15. Encoder magnitudes
    // |x|^1.24 = (0.944917…, 0.220566…), on S₁: (0.810752…, 0.189248…),
    // times 15: (12.161…, 2.839…) → (12, 3).
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let a = [c.powf(1.24), s.powf(1.24)];
    let y = [a[0] / (a[0] + a[1]), a[1] / (a[0] + a[1])];
    assert!((y[0] - 0.810752).abs() < 1e-5);
    let x = UnitVector::new(vec![c, s]).unwrap();
    let q = quantize(&x, QuantizerConfig::new(2, 15).unwrap(), PowerParam::new(1.24).unwrap()).unwrap();
    assert_eq!(q.ints(), &[12, 3]);
    let r = reconstruct(&q, PowerParam::new(1.24).unwrap());
    let expect = unit(&[12f64.powf(1.0 / 1.24), 3f64.powf(1.0 / 1.24)]);
    assert!((r.coords()[0] - expect[0]).abs() < 1e-15);
}

#[test]
fn codebook_size_matches_enumeration() {
    for l in 1..=6 {
        for k in 0..=6u32 {
            let n = enumerate_pyramid(l, i64::from(k)).len();
            assert_eq!(codebook_size(l, k), BigUint::from(n), "L={l} K={k}");
        }
    }
}

#[test]
fn codebook_size_matches_closed_form() {
    for l in 1..=20 {
        for k in 0..=20u32 {
            assert_eq!(codebook_size(l, k), closed_form_size(l as u64, u64::from(k)), "L={l} K={k}");
        }
    }
}

#[test]
fn fifteen_by_four() {
    assert_eq!(codebook_size(15, 4), BigUint::from(34_050u32));
    let b = bit_cost(15, 4);
    assert!((15.04..=15.07).contains(&b), "{b}");
    assert!((b - 34_050f64.log2()).abs() < 1e-12);
}

#[test]
fn big_codebooks_are_exact() {
    // N(20, 20) takes 48 bits, N(40, 40) overflows u64
    let n = codebook_size(20, 20);
    assert_eq!(n, closed_form_size(20, 20));
    assert_eq!(n.bits(), 48);
    assert_eq!(codebook_size(40, 40).bits(), 98);
}

/// Squared distance between `x` and the nearest reconstruction in `S(L, K)`.
fn brute_force_error(x: &UnitVector, pts: &[Vec<i64>], k: u32, p: PowerParam) -> f64 {
    pts.iter()
        .map(|v| x.dist2(&reconstruct(&PyramidPoint::new(v.clone(), k).unwrap(), p)))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn near_optimality_report() {
    // The repair heuristic is not an exact nearest-point search; measure how
    // often and by how much exhaustive search beats it.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for l in 2..=4 {
        for k in 1..=5u32 {
            let pts = enumerate_pyramid(l, i64::from(k));
            let cfg = QuantizerConfig::new(l, k).unwrap();
            let (mut beaten, mut worst, n) = (0, 0.0f64, 10_000);
            for _ in 0..n {
                let x = SamplingLaw::Uniform.sample(l, &mut rng);
                let e = x.dist2(&reconstruct(&quantize(&x, cfg, PowerParam::RADIAL).unwrap(), PowerParam::RADIAL));
                let best = brute_force_error(&x, &pts, k, PowerParam::RADIAL);
                assert!(best <= e + 1e-12);
                if best < e - 1e-12 {
                    beaten += 1;
                    worst = worst.max(e - best);
                }
            }
            println!("L={l} K={k}: heuristic beaten on {:.2}% of inputs, worst excess {worst:.4}", 100.0 * beaten as f64 / n as f64);
            assert!(beaten < n / 2);
        }
    }
}

#[test]
fn exact_lattice_points_are_fixed() {
    for v in enumerate_pyramid(4, 5) {
        let y = PyramidPoint::new(v.clone(), 5).unwrap();
        for p in [1.0, 1.3] {
            let p = PowerParam::new(p).unwrap();
            let x = reconstruct(&y, p);
            assert_eq!(quantize(&x, QuantizerConfig::new(4, 5).unwrap(), p).unwrap(), y);
        }
    }
}

proptest! {
    #[test]
    fn quantize_is_sign_and_permutation_equivariant(
        raw in prop::collection::vec(0.01f64..1.0, 2..12),
        flips in prop::collection::vec(any::<bool>(), 12),
        k in 1u32..25,
        p in 0.7f64..1.6,
        seed in any::<u64>(),
    ) {
        let l = raw.len();
        // distinct magnitudes: permutation changes which slot wins ties otherwise
        let mut mags = raw.clone();
        for (i, m) in mags.iter_mut().enumerate() {
            *m += i as f64 * 1e-7;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..l).collect();
        for i in (1..l).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let cfg = QuantizerConfig::new(l, k).unwrap();
        let pp = PowerParam::new(p).unwrap();
        let x = UnitVector::normalize(&mags).unwrap();
        let base = quantize(&x, cfg, pp).unwrap();
        let moved: Vec<f64> = (0..l).map(|i| if flips[i] { -mags[perm[i]] } else { mags[perm[i]] }).collect();
        let q = quantize(&UnitVector::normalize(&moved).unwrap(), cfg, pp).unwrap();
        let expect: Vec<i64> = (0..l).map(|i| if flips[i] { -base.ints()[perm[i]] } else { base.ints()[perm[i]] }).collect();
        // exact float ties can resolve differently after permutation; the
        // distinct offsets above make them vanishingly unlikely
        prop_assert_eq!(q.ints(), &expect[..]);
    }

    #[test]
    fn quantize_output_is_valid(raw in prop::collection::vec(-1.0f64..1.0, 2..20), k in 1u32..40, p in 0.5f64..2.0) {
        prop_assume!(raw.iter().any(|v| *v != 0.0));
        let x = UnitVector::normalize(&raw).unwrap();
        let q = quantize(&x, QuantizerConfig::new(raw.len(), k).unwrap(), PowerParam::new(p).unwrap()).unwrap();
        prop_assert_eq!(q.ints().iter().map(|v| v.unsigned_abs()).sum::<u64>(), u64::from(k));
        for (qi, xi) in q.ints().iter().zip(x.coords()) {
            if *qi != 0 && *xi != 0.0 {
                prop_assert_eq!(qi.signum() as f64, xi.signum());
            }
        }
    }
}
