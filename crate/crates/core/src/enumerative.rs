//! Enumerative coding of pyramid points: a bijection between `S(L, K)` and
//! the integers `[0, N(L, K))`.
//!
//! Points are ordered by their first coordinate `y₁`: all points with
//! `y₁ = 0` come first, then for each magnitude `m = 1..=K` the block with
//! `y₁ = +m` followed by the block with `y₁ = −m`. Within a block the order
//! recurses on the remaining `L − 1` coordinates with budget `K − |y₁|`.
//! Block sizes come from the codebook-size table, so both directions take
//! `O(L·K)` big-integer additions. No floating point is involved.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{contract, Error, Result};
use crate::pyramid::{codebook_size, CodebookTable, PyramidPoint};

/// Rank of a point in the enumeration of `S(l, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodebookIndex {
    value: BigUint,
    l: usize,
    k: u32,
}

impl CodebookIndex {
    pub fn new(value: BigUint, l: usize, k: u32) -> Result<Self> {
        if value >= codebook_size(l, k) {
            return Err(Error::IndexOutOfRange { index: value.to_string(), l, k });
        }
        Ok(Self { value, l, k })
    }

    /// Parses a decimal index string for the codebook `(l, k)`.
    pub fn parse(s: &str, l: usize, k: u32) -> Result<Self> {
        let value = BigUint::from_str(s.trim())
            .map_err(|_| contract(format!("`{s}` is not a decimal codebook index")))?;
        Self::new(value, l, k)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl fmt::Display for CodebookIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn table(l: usize, k: u32) -> Cow<'static, CodebookTable> {
    let shared = CodebookTable::shared();
    if shared.covers(l, k) {
        Cow::Borrowed(shared)
    } else {
        Cow::Owned(CodebookTable::new(l, k))
    }
}

/// Rank of `y` in the canonical enumeration of `S(y.dim(), y.k())`.
pub fn encode_index(y: &PyramidPoint) -> CodebookIndex {
    let (l, k) = (y.dim(), y.k());
    let n = table(l, k);
    let mut rank = BigUint::zero();
    let mut budget = k;
    for (j, &v) in y.ints().iter().enumerate() {
        if budget == 0 {
            break;
        }
        let rest = l - j - 1;
        let m = v.unsigned_abs() as u32;
        if m == 0 {
            continue;
        }
        rank += n.get(rest, budget);
        for mm in 1..m {
            rank += n.get(rest, budget - mm) * 2u32;
        }
        if v < 0 {
            rank += n.get(rest, budget - m);
        }
        budget -= m;
    }
    CodebookIndex { value: rank, l, k }
}

/// Inverse of [`encode_index`].
pub fn decode_index(index: &CodebookIndex) -> PyramidPoint {
    let (l, k) = (index.l, index.k);
    let n = table(l, k);
    let mut i = index.value.clone();
    let mut ints = vec![0i64; l];
    let mut budget = k;
    for (j, slot) in ints.iter_mut().enumerate() {
        if budget == 0 {
            break;
        }
        let rest = l - j - 1;
        let zero_block = n.get(rest, budget);
        if i < *zero_block {
            continue;
        }
        i -= zero_block;
        for m in 1..=budget {
            let block = n.get(rest, budget - m);
            if i < *block {
                *slot = i64::from(m);
            } else if i < block * 2u32 {
                i -= block;
                *slot = -i64::from(m);
            } else {
                i -= block * 2u32;
                continue;
            }
            budget -= m;
            break;
        }
    }
    PyramidPoint::from_raw(ints, k)
}

/// Decodes a raw integer for the codebook `(l, k)`, rejecting values
/// outside `[0, N(l, k))`.
pub fn decode_value(value: BigUint, l: usize, k: u32) -> Result<PyramidPoint> {
    if l == 0 || k == 0 {
        return Err(contract("codebook needs L ≥ 1 and K ≥ 1"));
    }
    CodebookIndex::new(value, l, k).map(|i| decode_index(&i))
}
