//! Point labels, the cyclic Hamming Steiner triple system S, and the image
//! system G(S) under a permutation.
//!
//! Point `i` in `1..=n` is the field element `alpha^(i-1)`. Internally most
//! loops work with the zero-based index `i - 1`, i.e. the discrete log.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::perm::{Convention, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointLabel(pub u32);

impl PointLabel {
    pub fn new(ctx: &FieldCtx, i: u32) -> Result<Self> {
        if i == 0 || i > ctx.n() {
            return Err(AtlasError::OutOfRange {
                what: "point label",
                value: i as u64,
                lo: 1,
                hi: ctx.n() as u64,
            });
        }
        Ok(PointLabel(i))
    }

    #[inline]
    pub fn from_index(idx: u32) -> Self {
        PointLabel(idx + 1)
    }

    /// Zero-based index, equal to the discrete log of the element.
    #[inline]
    pub fn index(self) -> u32 {
        self.0 - 1
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A block of S, points sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple(pub [PointLabel; 3]);

impl Triple {
    pub fn new(p: PointLabel, q: PointLabel, r: PointLabel) -> Self {
        let mut pts = [p, q, r];
        pts.sort();
        Triple(pts)
    }
}

pub fn label_to_elem(ctx: &FieldCtx, i: u32) -> Result<u32> {
    let label = PointLabel::new(ctx, i)?;
    Ok(ctx.exp_table()[label.index() as usize])
}

pub fn elem_to_label(ctx: &FieldCtx, x: u32) -> Result<PointLabel> {
    ctx.dlog(x).map(PointLabel::from_index).ok_or(AtlasError::OutOfRange {
        what: "field element",
        value: x as u64,
        lo: 1,
        hi: ctx.n() as u64,
    })
}

/// Index of alpha^i + alpha^j for i != j.
#[inline(always)]
pub fn sum_index(ctx: &FieldCtx, i: u32, j: u32) -> u32 {
    let n = ctx.n();
    let d = if j >= i { j - i } else { j + n - i };
    ctx.reduce(i as u64 + ctx.zech_table()[d as usize] as u64)
}

fn check_pair(ctx: &FieldCtx, p: u32, q: u32) -> Result<(PointLabel, PointLabel)> {
    let (p, q) = (PointLabel::new(ctx, p)?, PointLabel::new(ctx, q)?);
    if p == q {
        return Err(AtlasError::SamePoint(p.0));
    }
    Ok((p, q))
}

/// The point r completing the block of S through p and q.
pub fn third_point(ctx: &FieldCtx, p: u32, q: u32) -> Result<PointLabel> {
    let (p, q) = check_pair(ctx, p, q)?;
    Ok(PointLabel::from_index(sum_index(ctx, p.index(), q.index())))
}

/// Blocks of the image system G(S), where G is F or F^-1 depending on the
/// convention. Monomial maps are evaluated in the log domain.
#[derive(Clone, Copy)]
pub struct ImageSystem<'a> {
    ctx: &'a FieldCtx,
    kind: Kind<'a>,
}

#[derive(Clone, Copy)]
enum Kind<'a> {
    Monomial { g: u64, h: u64 },
    Table { fwd: &'a [u32], inv: &'a [u32] },
}

impl<'a> ImageSystem<'a> {
    pub fn new(ctx: &'a FieldCtx, f: &'a Permutation, convention: Convention) -> Self {
        let kind = match (f, convention) {
            (Permutation::Monomial(p), Convention::Direct) => Kind::Monomial { g: p.t(), h: p.t_inv() },
            (Permutation::Monomial(p), Convention::Inverse) => Kind::Monomial { g: p.t_inv(), h: p.t() },
            (Permutation::Table(p), Convention::Direct) => Kind::Table { fwd: p.forward(), inv: p.backward() },
            (Permutation::Table(p), Convention::Inverse) => Kind::Table { fwd: p.backward(), inv: p.forward() },
        };
        ImageSystem { ctx, kind }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.kind, Kind::Monomial { .. })
    }

    /// Exponent of the effective monomial map G, if any.
    pub fn monomial_exponent(&self) -> Option<u64> {
        match self.kind {
            Kind::Monomial { g, .. } => Some(g),
            Kind::Table { .. } => None,
        }
    }

    /// Index of G(G^-1(alpha^i) + G^-1(alpha^j)); requires i != j.
    #[inline(always)]
    pub fn third_index(&self, i: u32, j: u32) -> u32 {
        let ctx = self.ctx;
        match self.kind {
            Kind::Monomial { g, h } => {
                let n = ctx.n();
                let d = if j >= i { j - i } else { j + n - i };
                let z = ctx.zech_table()[ctx.reduce(d as u64 * h) as usize];
                let s = ctx.reduce(i as u64 * h + z as u64);
                ctx.reduce(s as u64 * g)
            }
            Kind::Table { fwd, inv } => {
                let exp = ctx.exp_table();
                let x = inv[exp[i as usize] as usize] ^ inv[exp[j as usize] as usize];
                ctx.log_table()[fwd[x as usize] as usize]
            }
        }
    }

    /// Element-domain version of [`third_index`](Self::third_index).
    #[inline]
    pub fn third_elem(&self, x: u32, y: u32) -> u32 {
        match self.kind {
            Kind::Monomial { g, h } => {
                let ctx = self.ctx;
                ctx.pow(ctx.pow(x, h) ^ ctx.pow(y, h), g)
            }
            Kind::Table { fwd, inv } => fwd[(inv[x as usize] ^ inv[y as usize]) as usize],
        }
    }

    /// Next rotation-line entry at base `a` after `x` (indices, x != a).
    #[inline(always)]
    pub fn successor_index(&self, a: u32, x: u32) -> u32 {
        self.third_index(a, sum_index(self.ctx, a, x))
    }
}

/// Third point of the image-system block through p and q.
pub fn image_third(
    ctx: &FieldCtx,
    f: &Permutation,
    p: u32,
    q: u32,
    convention: Convention,
) -> Result<PointLabel> {
    let (p, q) = check_pair(ctx, p, q)?;
    let sys = ImageSystem::new(ctx, f, convention);
    Ok(PointLabel::from_index(sys.third_index(p.index(), q.index())))
}

/// Every block of S, each once, in lexicographic order of sorted labels.
pub fn all_triples(ctx: &FieldCtx) -> impl Iterator<Item = Triple> + '_ {
    let n = ctx.n();
    (0..n).flat_map(move |i| {
        (i + 1..n).filter_map(move |j| {
            let k = sum_index(ctx, i, j);
            (k > j).then(|| {
                Triple([PointLabel::from_index(i), PointLabel::from_index(j), PointLabel::from_index(k)])
            })
        })
    })
}

/// The 2^(m-1) - 1 pairs {q, r} with {p, q, r} a block of S, as (q, r) with q < r.
pub fn triples_at(ctx: &FieldCtx, p: u32) -> Result<Vec<(PointLabel, PointLabel)>> {
    let p = PointLabel::new(ctx, p)?;
    let a = p.index();
    Ok((0..ctx.n())
        .filter(|&q| q != a)
        .filter_map(|q| {
            let r = sum_index(ctx, a, q);
            (q < r).then(|| (PointLabel::from_index(q), PointLabel::from_index(r)))
        })
        .collect())
}
