//! Norms, unit spheres and the projections between them.
//!
//! Everything here works on plain `f64` slices. [`UnitVector`] and
//! [`SimplexVector`] are thin newtypes that pin the normalization
//! invariant so downstream code does not need to re-check it.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{contract, Error, Result};

/// Tolerance used when validating that a vector lies on a unit sphere.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Selects which `s`-norm to use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    L1,
    L2,
    /// Maximum magnitude.
    Inf,
    /// General `(Σ|vᵢ|^s)^{1/s}` for `s ≥ 1`.
    Lp(f64),
}

impl Norm {
    pub fn eval(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Inf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Norm::Lp(s) if s == 1.0 => Norm::L1.eval(v),
            Norm::Lp(s) if s == 2.0 => Norm::L2.eval(v),
            Norm::Lp(s) if s.is_infinite() => Norm::Inf.eval(v),
            Norm::Lp(s) => v.iter().map(|x| x.abs().powf(s)).sum::<f64>().powf(s.recip()),
        }
    }
}

/// `‖v‖_s`.
pub fn norm(v: &[f64], s: Norm) -> f64 {
    s.eval(v)
}

/// `P_s(v) = v / ‖v‖_s`.
pub fn radial_project(v: &[f64], s: Norm) -> Result<Vec<f64>> {
    let n = s.eval(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Degenerate("cannot project a zero or non-finite vector"));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

/// Coordinate-wise signed power `|vᵢ|^p·sgn(vᵢ)`. Zeros stay zero.
pub fn signed_power(v: &[f64], p: PowerParam) -> Vec<f64> {
    let p = p.value();
    if p == 1.0 {
        return v.to_vec();
    }
    v.iter()
        .map(|&x| if x == 0.0 { 0.0 } else { x.signum() * x.abs().powf(p) })
        .collect()
}

/// Power projection `P_s^p(v) = P_s(|vᵢ|^p·sgn(vᵢ))`.
///
/// With `p = 1` this takes the same path as [`radial_project`] and the
/// results are bitwise identical.
pub fn power_project(v: &[f64], p: PowerParam, s: Norm) -> Result<Vec<f64>> {
    radial_project(&signed_power(v, p), s)
}

/// Exponent of the coordinate-wise power deformation. Must be finite and
/// strictly positive; `1.0` is the plain radial projection.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerParam(f64);

impl PowerParam {
    pub const RADIAL: PowerParam = PowerParam(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Self(p))
        } else {
            Err(contract(format!("power parameter must be finite and > 0, got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn recip(self) -> Self {
        Self(self.0.recip())
    }
}

impl Default for PowerParam {
    fn default() -> Self {
        Self::RADIAL
    }
}

/// A point of the Euclidean unit sphere `S₂` in `L ≥ 2` dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Wraps `coords`, which must already have unit Euclidean norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        let n = Norm::L2.eval(&coords);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(contract(format!("vector has Euclidean norm {n}, expected 1")));
        }
        Ok(Self(coords))
    }

    /// Radially projects `v` onto `S₂`.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        check_dim(v.len())?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(contract("vector has non-finite entries"));
        }
        radial_project(v, Norm::L2).map(Self)
    }

    /// Wraps without checking. Callers must guarantee the invariant.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist2(&self, other: &UnitVector) -> f64 {
        dist2(&self.0, &other.0)
    }
}

fn check_dim(l: usize) -> Result<()> {
    if l < 2 {
        return Err(contract(format!("dimension must be at least 2, got {l}")));
    }
    Ok(())
}

/// A point of the `L¹` unit sphere `S₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = Norm::L1.eval(&coords);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(contract(format!("vector has L1 norm {n}, expected 1")));
        }
        Ok(Self(coords))
    }

    pub fn normalize(v: &[f64]) -> Result<Self> {
        radial_project(v, Norm::L1).map(Self)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// How benchmark inputs on `S₂` are drawn.
///
/// The benchmark default is [`SamplingLaw::NormalizedCube`]: it is the law
/// under which the published PVQ operating points (e.g. MSE ≈ 0.47 at
/// `L = 15, K = 4`) are reproduced. [`SamplingLaw::Uniform`] gives the
/// textbook uniform measure on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SamplingLaw {
    /// Uniform on the sphere: i.i.d. standard normals, normalized.
    Uniform,
    /// I.i.d. uniform coordinates in `[-1, 1]`, normalized. Not uniform on
    /// the sphere; mass concentrates towards the cube diagonals.
    #[default]
    NormalizedCube,
}

impl SamplingLaw {
    pub fn sample<R: Rng + ?Sized>(self, l: usize, rng: &mut R) -> UnitVector {
        assert!(l >= 2, "dimension must be at least 2");
        let mut v = vec![0.0; l];
        loop {
            match self {
                SamplingLaw::Uniform => {
                    for x in v.iter_mut() {
                        *x = StandardNormal.sample(rng);
                    }
                }
                SamplingLaw::NormalizedCube => {
                    let u = Uniform::new_inclusive(-1.0, 1.0).expect("valid range");
                    for x in v.iter_mut() {
                        *x = u.sample(rng);
                    }
                }
            }
            // an all-zero draw is redrawn
            if let Ok(u) = UnitVector::normalize(&v) {
                return u;
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SamplingLaw::Uniform => "uniform",
            SamplingLaw::NormalizedCube => "cube",
        }
    }
}

impl std::str::FromStr for SamplingLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "gaussian" => Ok(SamplingLaw::Uniform),
            "cube" => Ok(SamplingLaw::NormalizedCube),
            other => Err(contract(format!("unknown sampling law `{other}`"))),
        }
    }
}

/// Draws a point uniformly distributed on `S₂` in `l` dimensions.
pub fn sample_unit_vector<R: Rng + ?Sized>(l: usize, rng: &mut R) -> UnitVector {
    SamplingLaw::Uniform.sample(l, rng)
}
