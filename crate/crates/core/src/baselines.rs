//! Reference quantizers for the low-`K` regime and the two-dimensional
//! trigonometric codebook.
//!
//! * sign quantizer: one bit per coordinate,
//! * sign + max quantizer: sign bits plus the position of the largest
//!   magnitude, `L + log₂ L` bits,
//! * trigonometric map: for `L = 2`, `(y₁, y₂) ↦ (sin(πy₁/2), sin(πy₂/2))`
//!   sends an evenly spaced `S(2, K)` grid to evenly spaced angles.

use std::io::Write;
use std::sync::OnceLock;

use crate::benchmark::{sig6, to_db, mse_on, Protocol, SampleSet};
use crate::error::{contract, Result};
use crate::geometry::{dist2, PowerParam, SamplingLaw, UnitVector};
use crate::pyramid::{bit_cost, quantize_abs, PyramidPoint};

/// Sign bits of a vector. `true` marks a negative coordinate; zero counts
/// as positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignCode {
    negative: Vec<bool>,
}

impl SignCode {
    pub fn signs(&self) -> &[bool] {
        &self.negative
    }

    pub fn dim(&self) -> usize {
        self.negative.len()
    }

    pub fn cost_bits(&self) -> f64 {
        self.negative.len() as f64
    }

    /// `gain · (±1, …, ±1)`.
    pub fn reconstruct(&self, gain: f64) -> Vec<f64> {
        self.negative.iter().map(|&n| if n { -gain } else { gain }).collect()
    }

    /// Reconstruction on `S₂`, gain `1/√L`.
    pub fn reconstruct_unit(&self) -> UnitVector {
        let g = (self.dim() as f64).sqrt().recip();
        UnitVector::from_raw(self.reconstruct(g))
    }
}

pub fn sign_quantize(x: &UnitVector) -> SignCode {
    SignCode { negative: x.coords().iter().map(|&v| v < 0.0).collect() }
}

/// Per-coordinate gain minimizing `E‖x − g·sign(x)‖²`: `E[Σ|xᵢ|] / L`.
pub fn fit_sign_gain(samples: &SampleSet) -> f64 {
    let l = samples.dim() as f64;
    let total: f64 = samples.iter().map(|x| x.iter().map(|v| v.abs()).sum::<f64>()).sum();
    total / samples.len() as f64 / l
}

/// MSE of the sign quantizer with a fixed reconstruction gain.
pub fn sign_mse(samples: &SampleSet, gain: f64) -> f64 {
    let total: f64 = samples
        .iter()
        .map(|x| x.iter().map(|&v| { let r = if v < 0.0 { -gain } else { gain }; (v - r) * (v - r) }).sum::<f64>())
        .sum();
    total / samples.len() as f64
}

/// Sign bits plus the index of the largest magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMaxCode {
    negative: Vec<bool>,
    argmax: usize,
}

impl SignMaxCode {
    pub fn signs(&self) -> &[bool] {
        &self.negative
    }

    pub fn argmax(&self) -> usize {
        self.argmax
    }

    pub fn dim(&self) -> usize {
        self.negative.len()
    }

    pub fn cost_bits(&self) -> f64 {
        sign_max_cost_bits(self.dim())
    }

    pub fn reconstruct(&self, profile: SignMaxProfile) -> UnitVector {
        let out = self
            .negative
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let m = if i == self.argmax { profile.w_max } else { profile.w_rest };
                if n { -m } else { m }
            })
            .collect();
        UnitVector::from_raw(out)
    }
}

pub fn sign_max_cost_bits(l: usize) -> f64 {
    l as f64 + (l as f64).log2()
}

fn argmax_abs(x: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        // strict: ties stay with the lowest index
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    best
}

pub fn sign_max_quantize(x: &UnitVector) -> SignMaxCode {
    SignMaxCode { negative: x.coords().iter().map(|&v| v < 0.0).collect(), argmax: argmax_abs(x.coords()) }
}

/// Two-level magnitude profile of the sign + max reconstruction, scaled so
/// that `w_max² + (L − 1)·w_rest² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignMaxProfile {
    pub w_max: f64,
    pub w_rest: f64,
}

impl SignMaxProfile {
    pub fn new(l: usize, w_max: f64, w_rest: f64) -> Result<Self> {
        if l < 2 || !(w_max > 0.0) || !(w_rest >= 0.0) {
            return Err(contract("sign+max profile needs L ≥ 2 and positive magnitudes"));
        }
        let n = (w_max * w_max + (l - 1) as f64 * w_rest * w_rest).sqrt();
        Ok(Self { w_max: w_max / n, w_rest: w_rest / n })
    }

    /// Profile from the checked-in table (`data/sign_max_profile.csv`),
    /// fitted for `L = 2..=32` under both sampling laws.
    pub fn fitted(l: usize, law: SamplingLaw) -> Option<Self> {
        profile_table().iter().find(|(lw, ll, _)| *lw == law && *ll == l).map(|e| e.2)
    }
}

/// Conditional-mean fit: the unit codeword maximizing `E⟨x, x̂⟩` has
/// magnitudes proportional to `E max|xᵢ|` and the mean of the others.
pub fn fit_sign_max_profile(samples: &SampleSet) -> Result<SignMaxProfile> {
    let l = samples.dim();
    let (mut top, mut rest) = (0.0, 0.0);
    for x in samples.iter() {
        let i = argmax_abs(x);
        let sum: f64 = x.iter().map(|v| v.abs()).sum();
        top += x[i].abs();
        rest += (sum - x[i].abs()) / (l - 1) as f64;
    }
    SignMaxProfile::new(l, top, rest)
}

pub fn sign_max_mse(samples: &SampleSet, profile: SignMaxProfile) -> f64 {
    let total: f64 = samples
        .iter()
        .map(|x| {
            let i = argmax_abs(x);
            x.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let m = if j == i { profile.w_max } else { profile.w_rest };
                    let r = if v < 0.0 { -m } else { m };
                    (v - r) * (v - r)
                })
                .sum::<f64>()
        })
        .sum();
    total / samples.len() as f64
}

const PROFILE_CSV: &str = include_str!("../data/sign_max_profile.csv");

fn profile_table() -> &'static [(SamplingLaw, usize, SignMaxProfile)] {
    static TABLE: OnceLock<Vec<(SamplingLaw, usize, SignMaxProfile)>> = OnceLock::new();
    TABLE.get_or_init(|| parse_profile_csv(PROFILE_CSV).expect("checked-in profile table is valid"))
}

pub fn parse_profile_csv(text: &str) -> Result<Vec<(SamplingLaw, usize, SignMaxProfile)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| contract("short profile row"));
        let law: SamplingLaw = field(0)?.parse()?;
        let l: usize = field(1)?.parse().map_err(|_| contract("bad L in profile table"))?;
        let w_max: f64 = field(2)?.parse().map_err(|_| contract("bad w_max in profile table"))?;
        let w_rest: f64 = field(3)?.parse().map_err(|_| contract("bad w_rest in profile table"))?;
        out.push((law, l, SignMaxProfile::new(l, w_max, w_rest)?));
    }
    Ok(out)
}

/// Fits profiles for `ls` under each law and writes the table read by
/// [`SignMaxProfile::fitted`].
pub fn write_profile_csv<W: Write>(ls: &[usize], n: usize, seed: u64, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["law", "l", "w_max", "w_rest"])?;
    for law in [SamplingLaw::NormalizedCube, SamplingLaw::Uniform] {
        for &l in ls {
            let p = fit_sign_max_profile(&SampleSet::draw(l, n, seed, law))?;
            w.write_record([law.name().to_string(), l.to_string(), format!("{:.9}", p.w_max), format!("{:.9}", p.w_rest)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `(y₁, y₂) ∈ S₁⁺ ↦ (sin(πy₁/2), sin(πy₂/2)) ∈ S₂⁺`.
pub fn trig_map(y: [f64; 2]) -> Result<[f64; 2]> {
    if y.iter().any(|v| !(*v >= -1e-9)) || (y[0] + y[1] - 1.0).abs() > 1e-9 {
        return Err(contract(format!("trig_map expects a point of S1+, got {y:?}")));
    }
    let h = std::f64::consts::FRAC_PI_2;
    Ok([(h * y[0].max(0.0)).sin(), (h * y[1].max(0.0)).sin()])
}

/// Inverse of [`trig_map`]: `(2/π)·asin` per coordinate.
pub fn trig_inverse(x: [f64; 2]) -> Result<[f64; 2]> {
    if x.iter().any(|v| !(*v >= -1e-9)) || (x[0] * x[0] + x[1] * x[1] - 1.0).abs() > 1e-9 {
        return Err(contract(format!("trig_inverse expects a point of S2+, got {x:?}")));
    }
    let s = std::f64::consts::FRAC_2_PI;
    let y = [s * x[0].clamp(0.0, 1.0).asin(), s * x[1].clamp(0.0, 1.0).asin()];
    if (y[0] + y[1] - 1.0).abs() > 1e-9 {
        return Err(contract("trig_inverse image is off S1+"));
    }
    Ok(y)
}

/// Quantizes `x ∈ S₂` (L = 2) through the trigonometric map onto `S(2, K)`.
pub fn trig_quantize(x: &UnitVector, k: u32) -> Result<PyramidPoint> {
    let c = x.coords();
    if c.len() != 2 {
        return Err(contract("the trigonometric codebook is two-dimensional"));
    }
    let mut y = trig_inverse([c[0].abs(), c[1].abs()])?;
    // asin rounding leaves |Σ − 1| around 1e-16; quantize_abs wants 1e-12
    let s = y[0] + y[1];
    y = [y[0] / s, y[1] / s];
    let mut q = quantize_abs(&y, k)?;
    for (qi, &v) in q.iter_mut().zip(c) {
        if v < 0.0 {
            *qi = -*qi;
        }
    }
    PyramidPoint::new(q, k)
}

pub fn trig_reconstruct(y: &PyramidPoint) -> Result<UnitVector> {
    if y.dim() != 2 {
        return Err(contract("the trigonometric codebook is two-dimensional"));
    }
    let k = f64::from(y.k());
    let a = [y.ints()[0].unsigned_abs() as f64 / k, y.ints()[1].unsigned_abs() as f64 / k];
    let m = trig_map(a)?;
    let out = vec![m[0].copysign(y.ints()[0] as f64), m[1].copysign(y.ints()[1] as f64)];
    UnitVector::new(out)
}

pub fn trig_mse(samples: &SampleSet, k: u32) -> Result<f64> {
    let mut total = 0.0;
    for x in samples.iter() {
        let u = UnitVector::from_raw(x.to_vec());
        let r = trig_reconstruct(&trig_quantize(&u, k)?)?;
        total += dist2(x, r.coords());
    }
    Ok(total / samples.len() as f64)
}

/// One row of the low-`K` comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub quantizer_name: String,
    pub l: usize,
    pub params: String,
    pub cost_bits: f64,
    pub mse: f64,
    /// `10·log₁₀(mse_sign / mse)`; negative means worse than the sign
    /// quantizer.
    pub db_vs_sign: f64,
}

/// Compares the sign, sign + max and PVQ (radial, each `K` in `pvq_ks`)
/// quantizers on one shared sample set.
///
/// The reference for `db_vs_sign` is the sign quantizer with unit-norm
/// codewords (gain `1/√L`). The MSE-fitted gain is reported as its own row.
pub fn compare_baselines(l: usize, pvq_ks: &[u32], proto: &Protocol) -> Result<Vec<BaselineRow>> {
    if l < 2 {
        return Err(contract("baseline comparison needs L ≥ 2"));
    }
    let samples = proto.samples(l);
    // fit on an independent draw so the evaluation set is not the training set
    let fit_set = SampleSet::draw(l, proto.n_samples, proto.seed ^ 0xf17_5eed, proto.law);
    let gain = fit_sign_gain(&fit_set);
    let profile = match SignMaxProfile::fitted(l, proto.law) {
        Some(p) => p,
        None => fit_sign_max_profile(&fit_set)?,
    };
    let unit = (l as f64).sqrt().recip();
    let reference = sign_mse(&samples, unit);
    let mut rows = Vec::new();
    let mut push = |name: &str, params: String, cost_bits: f64, mse: f64| -> Result<()> {
        rows.push(BaselineRow {
            quantizer_name: name.to_string(),
            l,
            params,
            cost_bits,
            mse,
            db_vs_sign: to_db(reference, mse)?,
        });
        Ok(())
    };
    push("sign", format!("gain={}", sig6(unit)), l as f64, reference)?;
    push("sign_fitted_gain", format!("gain={}", sig6(gain)), l as f64, sign_mse(&samples, gain))?;
    push(
        "sign_max",
        format!("w_max={};w_rest={}", sig6(profile.w_max), sig6(profile.w_rest)),
        sign_max_cost_bits(l),
        sign_max_mse(&samples, profile),
    )?;
    for &k in pvq_ks {
        crate::pyramid::QuantizerConfig::new(l, k)?;
        push("pvq", format!("k={k};p=1"), bit_cost(l, k), mse_on(&samples, k, PowerParam::RADIAL))?;
    }
    Ok(rows)
}

pub const BASELINE_HEADER: [&str; 6] = ["quantizer_name", "l", "params", "cost_bits", "mse", "db_vs_sign"];

pub fn write_baselines_csv<W: Write>(rows: &[BaselineRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BASELINE_HEADER)?;
    for r in rows {
        w.write_record([
            r.quantizer_name.clone(),
            r.l.to_string(),
            r.params.clone(),
            sig6(r.cost_bits),
            sig6(r.mse),
            sig6(r.db_vs_sign),
        ])?;
    }
    w.flush()?;
    Ok(())
}
