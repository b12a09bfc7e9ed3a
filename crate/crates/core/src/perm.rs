//! Permutations of GF(2^m) fixing 0: monomial maps x^t, explicit tables, and
//! invertible linear maps.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::{gcd, FieldCtx};

/// Which map builds the image system.
///
/// `Direct` uses F itself, so image triples are `F(F^-1(x) + F^-1(y))`.
/// `Inverse` uses F^-1, giving `F^-1(F(x) + F(y))`; this is the default and
/// reproduces the published rotation-line listings verbatim. The two are
/// isomorphic self-embeddings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Direct,
    #[default]
    Inverse,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Direct => "direct",
            Convention::Inverse => "inverse",
        })
    }
}

impl FromStr for Convention {
    type Err = AtlasError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Convention::Direct),
            "inverse" => Ok(Convention::Inverse),
            other => Err(AtlasError::Parse(format!("unknown convention `{other}`"))),
        }
    }
}

/// F(x) = x^t with gcd(t, n) = 1. Both exponents are stored reduced mod n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialPerm {
    t: u64,
    t_inv: u64,
}

impl MonomialPerm {
    pub fn new(ctx: &FieldCtx, t: u64) -> Result<Self> {
        let n = ctx.n() as u64;
        if gcd(t % n, n) != 1 {
            return Err(AtlasError::NotCoprime { t, n });
        }
        let t_inv = ctx.inv_exponent(t)?;
        Ok(MonomialPerm { t: t % n, t_inv })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn t_inv(&self) -> u64 {
        self.t_inv
    }

    pub fn inverse(&self) -> Self {
        MonomialPerm { t: self.t_inv, t_inv: self.t }
    }
}

/// Explicit permutation of `[0, 2^m)` with `fwd[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TablePerm {
    fwd: Vec<u32>,
    inv: Vec<u32>,
}

impl TablePerm {
    pub fn new(ctx: &FieldCtx, fwd: Vec<u32>) -> Result<Self> {
        if fwd.len() != ctx.size() {
            return Err(AtlasError::InvalidPermutation(format!(
                "expected {} entries, got {}",
                ctx.size(),
                fwd.len()
            )));
        }
        if fwd[0] != 0 {
            return Err(AtlasError::InvalidPermutation("F(0) must be 0".into()));
        }
        let mut inv = vec![u32::MAX; fwd.len()];
        for (x, &y) in fwd.iter().enumerate() {
            let slot = inv.get_mut(y as usize).ok_or_else(|| {
                AtlasError::InvalidPermutation(format!("value {y} outside the field"))
            })?;
            if *slot != u32::MAX {
                return Err(AtlasError::InvalidPermutation(format!("value {y} repeated")));
            }
            *slot = x as u32;
        }
        Ok(TablePerm { fwd, inv })
    }

    pub fn forward(&self) -> &[u32] {
        &self.fwd
    }

    pub fn backward(&self) -> &[u32] {
        &self.inv
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Permutation {
    Monomial(MonomialPerm),
    Table(TablePerm),
}

impl Permutation {
    pub fn monomial(ctx: &FieldCtx, t: u64) -> Result<Self> {
        MonomialPerm::new(ctx, t).map(Permutation::Monomial)
    }

    pub fn from_table(ctx: &FieldCtx, fwd: Vec<u32>) -> Result<Self> {
        TablePerm::new(ctx, fwd).map(Permutation::Table)
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Permutation::monomial(ctx, 1).expect("1 is a unit")
    }

    pub fn as_monomial(&self) -> Option<MonomialPerm> {
        match self {
            Permutation::Monomial(p) => Some(*p),
            Permutation::Table(_) => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self, Permutation::Monomial(_))
    }

    #[inline]
    pub fn apply(&self, ctx: &FieldCtx, x: u32) -> u32 {
        match self {
            Permutation::Monomial(p) => ctx.pow(x, p.t),
            Permutation::Table(p) => p.fwd[x as usize],
        }
    }

    #[inline]
    pub fn apply_inv(&self, ctx: &FieldCtx, x: u32) -> u32 {
        match self {
            Permutation::Monomial(p) => ctx.pow(x, p.t_inv),
            Permutation::Table(p) => p.inv[x as usize],
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Permutation::Monomial(p) => Permutation::Monomial(p.inverse()),
            Permutation::Table(p) => Permutation::Table(TablePerm {
                fwd: p.inv.clone(),
                inv: p.fwd.clone(),
            }),
        }
    }

    /// The map whose image system a convention uses: F or F^-1.
    pub fn effective(&self, convention: Convention) -> Self {
        match convention {
            Convention::Direct => self.clone(),
            Convention::Inverse => self.inverse(),
        }
    }

    pub fn to_table(&self, ctx: &FieldCtx) -> TablePerm {
        match self {
            Permutation::Table(p) => p.clone(),
            Permutation::Monomial(_) => {
                let fwd = (0..ctx.size() as u32).map(|x| self.apply(ctx, x)).collect();
                TablePerm::new(ctx, fwd).expect("monomial permutation is a bijection")
            }
        }
    }

    /// `outer ∘ inner` as an explicit table.
    pub fn compose(ctx: &FieldCtx, outer: &Permutation, inner: &Permutation) -> Permutation {
        let fwd = (0..ctx.size() as u32)
            .map(|x| outer.apply(ctx, inner.apply(ctx, x)))
            .collect();
        Permutation::from_table(ctx, fwd).expect("composition of bijections")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Permutation::Monomial(p) => write!(f, "x^{}", p.t),
            Permutation::Table(_) => f.write_str("table"),
        }
    }
}

/// GF(2)-linear map on F^m given by the images of the basis vectors 1 << j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearMap {
    cols: Vec<u32>,
}

impl LinearMap {
    pub fn new(cols: Vec<u32>) -> Self {
        LinearMap { cols }
    }

    pub fn identity(m: u32) -> Self {
        LinearMap { cols: (0..m).map(|j| 1 << j).collect() }
    }

    pub fn columns(&self) -> &[u32] {
        &self.cols
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut bits = x;
        while bits != 0 {
            let j = bits.trailing_zeros();
            acc ^= self.cols[j as usize];
            bits &= bits - 1;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        crate::codes::gf2_rank_u32(&self.cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.cols.len()
    }

    pub fn to_permutation(&self, ctx: &FieldCtx) -> Result<Permutation> {
        if self.cols.len() != ctx.m() as usize || !self.is_invertible() {
            return Err(AtlasError::InvalidPermutation("linear map is not invertible".into()));
        }
        let fwd = (0..ctx.size() as u32).map(|x| self.apply(x)).collect();
        Permutation::from_table(ctx, fwd)
    }
}
