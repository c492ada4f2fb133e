//! Independent reference implementations used as test oracles. Nothing in
//! here calls into the library's quantization or counting code.
#![allow(dead_code)]

use num_bigint::BigUint;

/// Mathematica `Round`: nearest integer, halves to even.
pub fn round_half_even(x: f64) -> f64 {
    let f = x.floor();
    let frac = x - f;
    if frac > 0.5 {
        f + 1.0
    } else if frac < 0.5 {
        f
    } else if f % 2.0 == 0.0 {
        f
    } else {
        f + 1.0
    }
}

/// Mathematica `Ordering`: positions that sort `list`, ties by position.
pub fn ordering(list: &[f64]) -> Vec<usize> {
    // insertion sort keeps equal keys in original order
    let mut ord: Vec<usize> = Vec::with_capacity(list.len());
    for i in 0..list.len() {
        let mut j = ord.len();
        while j > 0 && list[ord[j - 1]] > list[i] {
            j -= 1;
        }
        ord.insert(j, i);
    }
    ord
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Line-by-line transliteration of the reference `quant[va, k]` listing,
/// returning `vr` (before the final division by `k`).
pub fn mathematica_quant(va: &[f64], k: i64) -> Vec<i64> {
    let kf = k as f64;
    let vk: Vec<f64> = va.iter().map(|v| kf * v).collect();
    let mut vr: Vec<f64> = vk.iter().map(|&v| round_half_even(v)).collect();
    let kr: f64 = vr.iter().sum();
    if kr != kf {
        if kf > kr {
            let dif: Vec<f64> = vr.iter().zip(&vk).map(|(r, v)| r - v).collect();
            let ord = ordering(&dif);
            for i in 0..(kf - kr) as usize {
                vr[ord[i]] += 1.0;
            }
        } else {
            let dif: Vec<f64> = vk.iter().zip(&vr).map(|(v, r)| v - r - sign(*r)).collect();
            let ord = ordering(&dif);
            for i in 0..(kr - kf) as usize {
                vr[ord[i]] -= 1.0;
            }
        }
    }
    vr.iter().map(|&v| v as i64).collect()
}

/// Every integer vector of length `l` with `Σ|vᵢ| = k`.
pub fn enumerate_pyramid(l: usize, k: i64) -> Vec<Vec<i64>> {
    fn rec(l: usize, k: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if l == 0 {
            if k == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for v in -k..=k {
            prefix.push(v);
            rec(l - 1, k - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(l, k, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σᵢ 2^i·C(l, i)·C(k−1, i−1)`: choose `i` nonzero slots, their signs and
/// a composition of `k` into `i` positive parts.
pub fn closed_form_size(l: u64, k: u64) -> BigUint {
    if k == 0 {
        return BigUint::from(1u32);
    }
    (1..=l.min(k))
        .map(|i| (BigUint::from(1u32) << i) * binomial(l, i) * binomial(k - 1, i - 1))
        .sum()
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}
