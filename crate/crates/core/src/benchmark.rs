//! Monte Carlo MSE estimation and the power sweep.
//!
//! A cell `(L, K)` draws one sample set and reuses it for every `p` in the
//! grid (common random numbers). The radial MSE is therefore measured on
//! exactly the same inputs as every deformed one, and the reported
//! improvement can never be negative.
//!
//! Seeds for individual cells are derived from the master seed with
//! [`cell_seed`], so tables are reproducible whatever the evaluation order.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{contract, Result};
use crate::geometry::{PowerParam, SamplingLaw};
use crate::pyramid::{quantize_into, Scratch};

/// Sample count used by the published protocol.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Default master seed for all randomized commands.
pub const DEFAULT_SEED: u64 = 20_170_628;

/// Grid of powers `min, min + step, …, max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PGrid(Vec<f64>);

impl PGrid {
    /// `1.00, 1.01, …, 1.50`.
    pub fn standard() -> Self {
        Self::new(1.0, 1.5, 0.01).expect("valid grid")
    }

    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min > 0.0 && max >= min && min.is_finite() && max.is_finite()) {
            return Err(contract(format!("invalid power range [{min}, {max}]")));
        }
        if min == max {
            return Ok(Self(vec![min]));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(contract(format!("power step must be positive, got {step}")));
        }
        let n = ((max - min) / step + 1e-9).floor() as usize;
        let values = (0..=n)
            .map(|i| {
                // snap to 1e-9 so 1.0 + 30·0.01 prints and compares as 1.3
                let v = min + i as f64 * step;
                (v * 1e9).round() / 1e9
            })
            .collect();
        Ok(Self(values))
    }

    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(contract("power grid needs at least one finite positive value"));
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn contains_radial(&self) -> bool {
        self.0.contains(&1.0)
    }
}

/// Fixed set of inputs on `S₂`, stored row-major.
#[derive(Debug, Clone)]
pub struct SampleSet {
    l: usize,
    coords: Vec<f64>,
}

impl SampleSet {
    pub fn draw(l: usize, n: usize, seed: u64, law: SamplingLaw) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coords = Vec::with_capacity(l * n);
        for _ in 0..n {
            coords.extend_from_slice(law.sample(l, &mut rng).coords());
        }
        Self { l, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.l
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.l
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.l)
    }
}

/// Mean squared error of the quantize → reconstruct pipeline over `samples`.
pub fn mse_on(samples: &SampleSet, k: u32, p: PowerParam) -> f64 {
    let l = samples.dim();
    let inv = p.value().recip();
    let roots: Vec<f64> = (0..=k).map(|m| f64::from(m).powf(inv)).collect();
    let mut scratch = Scratch::default();
    let mut q = vec![0i64; l];
    let mut r = vec![0.0; l];
    let mut total = 0.0;
    for x in samples.iter() {
        quantize_into(x, k, p, &mut q, &mut scratch);
        let mut n2 = 0.0;
        for (ri, &qi) in r.iter_mut().zip(&q) {
            let m = roots[qi.unsigned_abs() as usize];
            *ri = if qi < 0 { -m } else { m };
            n2 += m * m;
        }
        let n = n2.sqrt();
        total += x.iter().zip(&r).map(|(a, b)| (a - b / n) * (a - b / n)).sum::<f64>();
    }
    total / samples.len() as f64
}

/// One `(L, K, p)` Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub l: usize,
    pub k: u32,
    pub p: f64,
    pub mse: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Sampling protocol shared by every estimate in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    pub n_samples: usize,
    pub seed: u64,
    pub law: SamplingLaw,
}

impl Default for Protocol {
    fn default() -> Self {
        Self { n_samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, law: SamplingLaw::default() }
    }
}

impl Protocol {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self { n_samples, seed, ..Self::default() }
    }

    pub fn with_law(mut self, law: SamplingLaw) -> Self {
        self.law = law;
        self
    }

    fn check(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(contract("need at least one sample"));
        }
        Ok(())
    }

    pub fn samples(&self, l: usize) -> SampleSet {
        SampleSet::draw(l, self.n_samples, self.seed, self.law)
    }
}

/// MSE of `(l, k)` at power `p` over `n_samples` inputs drawn from `seed`.
pub fn estimate_mse(l: usize, k: u32, p: PowerParam, n_samples: usize, seed: u64) -> Result<SweepCell> {
    estimate_mse_with(l, k, p, &Protocol::new(n_samples, seed))
}

pub fn estimate_mse_with(l: usize, k: u32, p: PowerParam, proto: &Protocol) -> Result<SweepCell> {
    proto.check()?;
    crate::pyramid::QuantizerConfig::new(l, k)?;
    let samples = proto.samples(l);
    Ok(SweepCell { l, k, p: p.value(), mse: mse_on(&samples, k, p), n_samples: proto.n_samples, seed: proto.seed })
}

/// Best power found for one cell and its gain over radial projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovementReport {
    pub l: usize,
    pub k: u32,
    pub best_p: f64,
    pub mse_radial: f64,
    pub mse_best: f64,
    /// `100·(1 − mse_best/mse_radial)`.
    pub pct: f64,
    /// `10·log₁₀(mse_radial/mse_best)`.
    pub db: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl ImprovementReport {
    /// Picks the lowest MSE (smaller `p` on ties) from a sweep that
    /// includes `p = 1`.
    pub fn from_cells(cells: &[SweepCell]) -> Result<Self> {
        let radial = cells
            .iter()
            .find(|c| c.p == 1.0)
            .ok_or_else(|| contract("power grid must contain p = 1"))?;
        let mut best = radial;
        for c in cells {
            if c.mse < best.mse || (c.mse == best.mse && c.p < best.p) {
                best = c;
            }
        }
        let (pct, db) = if radial.mse > 0.0 && best.mse > 0.0 {
            (percent_reduction(radial.mse, best.mse), to_db(radial.mse, best.mse)?)
        } else {
            (0.0, 0.0)
        };
        Ok(Self {
            l: radial.l,
            k: radial.k,
            best_p: best.p,
            mse_radial: radial.mse,
            mse_best: best.mse,
            pct,
            db,
            n_samples: radial.n_samples,
            seed: radial.seed,
        })
    }
}

/// `100·(1 − mse/mse_ref)`.
pub fn percent_reduction(mse_ref: f64, mse: f64) -> f64 {
    100.0 * (1.0 - mse / mse_ref)
}

/// Gain in decibels, `10·log₁₀(mse_ref/mse)`.
pub fn to_db(mse_ref: f64, mse: f64) -> Result<f64> {
    if !(mse_ref > 0.0 && mse > 0.0) {
        return Err(contract(format!("dB conversion needs positive MSEs, got {mse_ref} and {mse}")));
    }
    Ok(10.0 * (mse_ref / mse).log10())
}

/// MSE for every power in `grid`, all on the same sample set.
pub fn sweep_curve(l: usize, k: u32, grid: &PGrid, proto: &Protocol) -> Result<Vec<SweepCell>> {
    proto.check()?;
    crate::pyramid::QuantizerConfig::new(l, k)?;
    let samples = proto.samples(l);
    grid.values()
        .iter()
        .map(|&p| {
            let pp = PowerParam::new(p)?;
            Ok(SweepCell { l, k, p, mse: mse_on(&samples, k, pp), n_samples: proto.n_samples, seed: proto.seed })
        })
        .collect()
}

/// Sweeps `grid` (which must contain `1.0`) and reports the best power.
pub fn sweep_p(l: usize, k: u32, grid: &PGrid, n_samples: usize, seed: u64) -> Result<ImprovementReport> {
    sweep_p_with(l, k, grid, &Protocol::new(n_samples, seed))
}

pub fn sweep_p_with(l: usize, k: u32, grid: &PGrid, proto: &Protocol) -> Result<ImprovementReport> {
    if !grid.contains_radial() {
        return Err(contract("power grid must contain p = 1"));
    }
    ImprovementReport::from_cells(&sweep_curve(l, k, grid, proto)?)
}

/// Seed for cell `(l, k)`: SplitMix64 finalizer applied to the master seed
/// xor-ed with a SplitMix64 hash of `(l << 32) | k`.
pub fn cell_seed(master: u64, l: usize, k: u32) -> u64 {
    splitmix64(master ^ splitmix64(((l as u64) << 32) | u64::from(k)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    #[default]
    Parallel,
}

/// Sweeps every `(l, k)` cell, ordered by `l` then `k`.
pub fn improvement_table(
    ls: &[usize],
    ks: &[u32],
    grid: &PGrid,
    proto: &Protocol,
    parallelism: Parallelism,
) -> Result<Vec<ImprovementReport>> {
    if ls.is_empty() || ks.is_empty() {
        return Err(contract("dimension and precision ranges must be nonempty"));
    }
    let mut cells: Vec<(usize, u32)> = ls.iter().flat_map(|&l| ks.iter().map(move |&k| (l, k))).collect();
    cells.sort_unstable();
    cells.dedup();
    let run = |&(l, k): &(usize, u32)| {
        let cell_proto = Protocol { seed: cell_seed(proto.seed, l, k), ..*proto };
        sweep_p_with(l, k, grid, &cell_proto)
    };
    match parallelism {
        Parallelism::Serial => cells.iter().map(run).collect(),
        Parallelism::Parallel => cells.par_iter().map(run).collect(),
    }
}

/// Header of the improvement-table CSV.
pub const TABLE_HEADER: [&str; 9] = ["l", "k", "best_p", "mse_radial", "mse_best", "pct", "db", "n_samples", "seed"];

/// Writes reports as CSV, one row per cell.
pub fn write_table_csv<W: Write>(reports: &[ImprovementReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for r in reports {
        w.write_record([
            r.l.to_string(),
            r.k.to_string(),
            sig6(r.best_p),
            sig6(r.mse_radial),
            sig6(r.mse_best),
            sig6(r.pct),
            sig6(r.db),
            r.n_samples.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Decimal rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    // round in scientific form first so 9.9999996 becomes 10.0000, not 10.00000
    let rounded: f64 = format!("{x:.5e}").parse().expect("float formatting round-trips");
    let exp = rounded.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}
