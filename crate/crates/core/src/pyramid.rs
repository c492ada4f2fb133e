//! The pyramid codebook `S(L, K)`: integer points whose magnitudes sum to
//! `K`, quantization onto it, and its cardinality.
//!
//! Quantization runs `x → y → ỹ → x̃`:
//!
//! 1. `y = P₁(|xᵢ|^p·sgn xᵢ)`: deform magnitudes by the power `p` and
//!    project onto the `L¹` sphere,
//! 2. `ỹ`: round `K·|y|` onto the integer pyramid with [`quantize_abs`],
//!    then reattach the input signs,
//! 3. `x̃ = P₂(|ỹᵢ|^{1/p}·sgn ỹᵢ)`: undo the deformation and project back
//!    onto the Euclidean sphere.
//!
//! Without the rounding in step 2 the pipeline is the identity. `p = 1` is
//! classic PVQ. `p > 1` pulls the reconstruction points towards the center
//! of each orthant and spreads them near its boundary.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{contract, Result};
use crate::geometry::{power_project, PowerParam, UnitVector, UNIT_TOLERANCE};
use crate::geometry::{signed_power, Norm};

/// A point of `K·S(L, K)`: integer coordinates with `Σ|yᵢ| = K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PyramidPoint {
    ints: Vec<i64>,
    k: u32,
}

impl PyramidPoint {
    pub fn new(ints: Vec<i64>, k: u32) -> Result<Self> {
        if ints.is_empty() {
            return Err(contract("pyramid point must have at least one coordinate"));
        }
        if k == 0 {
            return Err(contract("pyramid precision K must be at least 1"));
        }
        let sum: u64 = ints.iter().map(|v| v.unsigned_abs()).sum();
        if sum != u64::from(k) {
            return Err(contract(format!("coordinate magnitudes sum to {sum}, expected K={k}")));
        }
        Ok(Self { ints, k })
    }

    pub(crate) fn from_raw(ints: Vec<i64>, k: u32) -> Self {
        debug_assert_eq!(ints.iter().map(|v| v.unsigned_abs()).sum::<u64>(), u64::from(k));
        Self { ints, k }
    }

    pub fn ints(&self) -> &[i64] {
        &self.ints
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.ints.len()
    }

    /// The point as an element of `S(L, K) ⊂ S₁`.
    pub fn to_simplex(&self) -> Vec<f64> {
        let k = f64::from(self.k);
        self.ints.iter().map(|&v| v as f64 / k).collect()
    }
}

impl std::fmt::Display for PyramidPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.ints.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Dimension `L` and precision `K` of a pyramid codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantizerConfig {
    l: usize,
    k: u32,
}

impl QuantizerConfig {
    pub fn new(l: usize, k: u32) -> Result<Self> {
        if l < 2 {
            return Err(contract(format!("dimension L must be at least 2, got {l}")));
        }
        if k < 1 {
            return Err(contract("precision K must be at least 1"));
        }
        Ok(Self { l, k })
    }

    pub fn l(self) -> usize {
        self.l
    }

    pub fn k(self) -> u32 {
        self.k
    }
}

/// Rounds a point of `S₁⁺` onto the nonnegative pyramid `{v ∈ ℕ^L : Σv = k}`.
///
/// `k·va` is rounded half-to-even. If the total misses `k`, the entries
/// with the smallest `vr − vk` are incremented (rounding deficit) or those
/// with the smallest `vk − vr − sign(vr)` decremented (rounding surplus),
/// one unit each. The `sign(vr)` term pushes zero entries to the back of
/// the decrement order so they are never decremented. Ties go to the
/// lowest index.
pub fn quantize_abs(va: &[f64], k: u32) -> Result<Vec<i64>> {
    if k == 0 {
        return Err(contract("precision K must be at least 1"));
    }
    if va.is_empty() {
        return Err(contract("cannot quantize an empty vector"));
    }
    if let Some(x) = va.iter().find(|x| !(**x >= 0.0)) {
        return Err(contract(format!("quantize_abs expects nonnegative coordinates, got {x}")));
    }
    let sum: f64 = va.iter().sum();
    if (sum - 1.0).abs() > UNIT_TOLERANCE {
        return Err(contract(format!("quantize_abs expects coordinates summing to 1, got {sum}")));
    }
    let mut out = vec![0; va.len()];
    let mut scratch = Scratch::default();
    quantize_abs_into(va, k, &mut out, &mut scratch);
    Ok(out)
}

#[derive(Debug, Default)]
pub(crate) struct Scratch {
    vk: Vec<f64>,
    dif: Vec<f64>,
    order: Vec<usize>,
    buf: Vec<f64>,
}

pub(crate) fn quantize_abs_into(va: &[f64], k: u32, out: &mut [i64], s: &mut Scratch) {
    let kf = f64::from(k);
    s.vk.clear();
    s.vk.extend(va.iter().map(|&v| kf * v));
    let mut total: i64 = 0;
    for (o, &v) in out.iter_mut().zip(&s.vk) {
        *o = v.round_ties_even() as i64;
        total += *o;
    }
    let target = i64::from(k);
    if total == target {
        return;
    }
    s.dif.clear();
    if target > total {
        s.dif.extend(out.iter().zip(&s.vk).map(|(&r, &v)| r as f64 - v));
    } else {
        s.dif.extend(
            out.iter()
                .zip(&s.vk)
                .map(|(&r, &v)| v - r as f64 - (r.signum() as f64)),
        );
    }
    s.order.clear();
    s.order.extend(0..out.len());
    let dif = &s.dif;
    // stable: equal keys keep ascending index order
    s.order.sort_by(|&a, &b| dif[a].total_cmp(&dif[b]));
    let step = if target > total { 1 } else { -1 };
    for &i in s.order.iter().take((target - total).unsigned_abs() as usize) {
        out[i] += step;
    }
}

/// Quantizes `x ∈ S₂` onto `S(L, K)` under power `p`.
///
/// Coordinates whose input is exactly zero receive a `+` sign if the repair
/// step gives them a nonzero magnitude.
pub fn quantize(x: &UnitVector, cfg: QuantizerConfig, p: PowerParam) -> Result<PyramidPoint> {
    if x.dim() != cfg.l() {
        return Err(contract(format!(
            "vector has dimension {}, codebook expects L={}",
            x.dim(),
            cfg.l()
        )));
    }
    let mut out = vec![0; cfg.l()];
    quantize_into(x.coords(), cfg.k(), p, &mut out, &mut Scratch::default());
    Ok(PyramidPoint::from_raw(out, cfg.k()))
}

pub(crate) fn quantize_into(x: &[f64], k: u32, p: PowerParam, out: &mut [i64], s: &mut Scratch) {
    let mut buf = std::mem::take(&mut s.buf);
    buf.clear();
    let pv = p.value();
    if pv == 1.0 {
        buf.extend(x.iter().map(|v| v.abs()));
    } else {
        buf.extend(x.iter().map(|v| v.abs().powf(pv)));
    }
    let n: f64 = buf.iter().sum();
    for v in buf.iter_mut() {
        *v /= n;
    }
    quantize_abs_into(&buf, k, out, s);
    for (o, &v) in out.iter_mut().zip(x) {
        if v < 0.0 {
            *o = -*o;
        }
    }
    s.buf = buf;
}

/// Maps a codebook point back onto `S₂` under power `p`. The `1/K` scale
/// cancels in the projection.
pub fn reconstruct(y: &PyramidPoint, p: PowerParam) -> UnitVector {
    let mut out = vec![0.0; y.dim()];
    reconstruct_into(&y.ints, p, &mut out);
    UnitVector::from_raw(out)
}

pub(crate) fn reconstruct_into(y: &[i64], p: PowerParam, out: &mut [f64]) {
    let q = p.value().recip();
    for (o, &i) in out.iter_mut().zip(y) {
        let m = (i.unsigned_abs() as f64).powf(q);
        *o = if i < 0 { -m } else { m };
    }
    let n = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    for o in out.iter_mut() {
        *o /= n;
    }
}

/// The encoder-side deformation `P₁(|xᵢ|^p·sgn xᵢ)` without rounding.
pub fn deform(x: &[f64], p: PowerParam) -> Result<Vec<f64>> {
    power_project(x, p, Norm::L1)
}

/// The decoder-side map `P₂(|yᵢ|^{1/p}·sgn yᵢ)`, inverse of [`deform`].
pub fn undeform(y: &[f64], p: PowerParam) -> Result<Vec<f64>> {
    crate::geometry::radial_project(&signed_power(y, p.recip()), Norm::L2)
}

/// Table of `N(l, k) = |S(l, k)|` for all `l ≤ max_l`, `k ≤ max_k`.
///
/// Built from `N(l, k) = N(l−1, k) + N(l, k−1) + N(l−1, k−1)` with
/// `N(l, 0) = 1` and `N(0, k) = 0` for `k ≥ 1`.
#[derive(Debug, Clone)]
pub struct CodebookTable {
    max_l: usize,
    max_k: u32,
    rows: Vec<Vec<BigUint>>,
}

impl CodebookTable {
    pub fn new(max_l: usize, max_k: u32) -> Self {
        let kk = max_k as usize;
        let mut rows = vec![vec![BigUint::zero(); kk + 1]; max_l + 1];
        rows[0][0] = BigUint::one();
        for l in 1..=max_l {
            rows[l][0] = BigUint::one();
            for k in 1..=kk {
                rows[l][k] = &rows[l - 1][k] + &rows[l][k - 1] + &rows[l - 1][k - 1];
            }
        }
        Self { max_l, max_k, rows }
    }

    /// A process-wide table covering `L ≤ 64`, `K ≤ 256`, built once.
    pub fn shared() -> &'static CodebookTable {
        static TABLE: OnceLock<CodebookTable> = OnceLock::new();
        TABLE.get_or_init(|| CodebookTable::new(64, 256))
    }

    pub fn covers(&self, l: usize, k: u32) -> bool {
        l <= self.max_l && k <= self.max_k
    }

    /// `N(l, k)`. Panics if the table does not cover `(l, k)`.
    pub fn get(&self, l: usize, k: u32) -> &BigUint {
        &self.rows[l][k as usize]
    }
}

/// Number of points in `S(l, k)`, exact.
pub fn codebook_size(l: usize, k: u32) -> BigUint {
    let shared = CodebookTable::shared();
    if shared.covers(l, k) {
        shared.get(l, k).clone()
    } else {
        CodebookTable::new(l, k).get(l, k).clone()
    }
}

/// `log₂ N(l, k)` in (fractional) bits.
pub fn bit_cost(l: usize, k: u32) -> f64 {
    log2_big(&codebook_size(l, k))
}

pub(crate) fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().expect("fits in u64") as f64).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("fits in u64") as f64;
    top.log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_traces() {
        assert_eq!(quantize_abs(&[0.5, 0.3, 0.2], 4).unwrap(), vec![2, 1, 1]);
        assert_eq!(quantize_abs(&[1.0, 0.0], 3).unwrap(), vec![3, 0]);
        assert_eq!(quantize_abs(&[0.5, 0.25, 0.25], 2).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn surplus_never_touches_zero() {
        // vk = (1.5, 1.5, 0) rounds to (2, 2, 0): surplus of one
        let out = quantize_abs(&[0.5, 0.5, 0.0], 3).unwrap();
        assert_eq!(out, vec![1, 2, 0]);
    }

    #[test]
    fn quantize_abs_contract() {
        assert!(quantize_abs(&[0.5, 0.5], 0).is_err());
        assert!(quantize_abs(&[1.5, -0.5], 2).is_err());
        assert!(quantize_abs(&[0.5, 0.4], 2).is_err());
        assert!(quantize_abs(&[f64::NAN, 1.0], 2).is_err());
    }

    #[test]
    fn quantize_examples() {
        let cfg = QuantizerConfig::new(2, 7).unwrap();
        let x = UnitVector::new(vec![0.6, 0.8]).unwrap();
        assert_eq!(quantize(&x, cfg, PowerParam::RADIAL).unwrap().ints(), &[3, 4]);
        let x = UnitVector::new(vec![-0.6, 0.8]).unwrap();
        assert_eq!(quantize(&x, cfg, PowerParam::RADIAL).unwrap().ints(), &[-3, 4]);
        let wrong = QuantizerConfig::new(3, 7).unwrap();
        assert!(quantize(&x, wrong, PowerParam::RADIAL).is_err());
    }

    #[test]
    fn zero_inputs_stay_zero() {
        let x = UnitVector::normalize(&[-1.0, 0.0]).unwrap();
        let q = quantize(&x, QuantizerConfig::new(2, 3).unwrap(), PowerParam::RADIAL).unwrap();
        assert_eq!(q.ints(), &[-3, 0]);
        let x = UnitVector::normalize(&[-1.0, -1.0, 0.0]).unwrap();
        let q = quantize(&x, QuantizerConfig::new(3, 1).unwrap(), PowerParam::RADIAL).unwrap();
        assert_eq!(q.ints(), &[-1, 0, 0]);
    }

    #[test]
    fn reconstruct_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = reconstruct(&PyramidPoint::new(vec![3, 4], 7).unwrap(), PowerParam::RADIAL);
        assert!((r.coords()[0] - 0.6).abs() < 1e-15 && (r.coords()[1] - 0.8).abs() < 1e-15);
        let r = reconstruct(&PyramidPoint::new(vec![1, 1, 0], 2).unwrap(), PowerParam::RADIAL);
        assert!((r.coords()[0] - h).abs() < 1e-15 && r.coords()[2] == 0.0);
        let r = reconstruct(&PyramidPoint::new(vec![1, 1], 2).unwrap(), PowerParam::new(2.0).unwrap());
        assert!((r.coords()[1] - h).abs() < 1e-15);
    }

    #[test]
    fn point_contract() {
        assert!(PyramidPoint::new(vec![1, 2], 4).is_err());
        assert!(PyramidPoint::new(vec![], 0).is_err());
        assert!(PyramidPoint::new(vec![-1, 3], 4).is_ok());
        assert!(QuantizerConfig::new(1, 3).is_err());
        assert!(QuantizerConfig::new(3, 0).is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(codebook_size(2, 1), BigUint::from(4u32));
        for k in 1..10 {
            assert_eq!(codebook_size(1, k), BigUint::from(2u32));
        }
        assert_eq!(codebook_size(15, 4), BigUint::from(34050u32));
        assert_eq!(codebook_size(3, 0), BigUint::one());
        assert_eq!(bit_cost(2, 1), 2.0);
        assert_eq!(bit_cost(1, 5), 1.0);
        assert!((bit_cost(15, 4) - 15.06).abs() < 0.01);
        // outside the shared table
        assert!(codebook_size(80, 300) > BigUint::from(u128::MAX));
    }

    #[test]
    fn log2_of_large_values() {
        let n = BigUint::one() << 300u32;
        assert_eq!(log2_big(&n), 300.0);
        let n = BigUint::from(3u32) << 200u32;
        assert!((log2_big(&n) - (200.0 + 3f64.log2())).abs() < 1e-12);
    }
}
