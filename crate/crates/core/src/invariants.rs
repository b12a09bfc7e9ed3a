//! The multiset of third points Ṽ_F(a), its multiplicity histogram V*_F(a),
//! the count v_F(a), and APN tests.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::labels::{sum_index, ImageSystem, PointLabel};
use crate::perm::{Convention, Permutation};
use crate::rotation::{walk_lines, SpectrumSummary};

/// Multiplicity histogram: `(multiplicity, number of distinct values)`,
/// ascending by multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VStar(pub Vec<(u32, u64)>);

impl VStar {
    pub fn from_counts<I: IntoIterator<Item = u32>>(counts: I) -> Self {
        let mut h = BTreeMap::new();
        for c in counts.into_iter().filter(|&c| c > 0) {
            *h.entry(c).or_insert(0u64) += 1;
        }
        VStar(h.into_iter().collect())
    }

    /// Σ multiplicity · count, i.e. the size of the underlying multiset.
    pub fn mass(&self) -> u64 {
        self.0.iter().map(|&(k, c)| k as u64 * c).sum()
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> u64 {
        self.0.iter().map(|&(_, c)| c).sum()
    }
}

impl fmt::Display for VStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, c)| format!("{k}^{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromStr for VStar {
    type Err = AtlasError;

    /// Parses `{1^42, 3^7}`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || AtlasError::Parse(format!("malformed V* `{s}`"));
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')).ok_or_else(bad)?;
        let mut h = BTreeMap::new();
        for part in body.split(',').filter(|p| !p.is_empty()) {
            let (k, c) = part.split_once('^').ok_or_else(bad)?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            let c: u64 = c.parse().map_err(|_| bad())?;
            *h.entry(k).or_insert(0) += c;
        }
        Ok(VStar(h.into_iter().collect()))
    }
}

/// Per-class invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub m: u32,
    pub t: Option<u64>,
    pub v: u64,
    pub vstar: VStar,
    pub apn: bool,
    pub closed_surface: bool,
    pub spectrum: SpectrumSummary,
}

fn point(ctx: &FieldCtx, a: u32) -> Result<PointLabel> {
    PointLabel::new(ctx, a)
}

/// The third points z_i of the image-system blocks through each pair
/// {a_i, a + a_i}, listed in rotation-line order.
pub fn v_tilde(ctx: &FieldCtx, f: &Permutation, a: u32, convention: Convention) -> Result<Vec<PointLabel>> {
    let a = point(ctx, a)?.index();
    let sys = ImageSystem::new(ctx, f, convention);
    let mut out = Vec::with_capacity(ctx.n() as usize / 2);
    walk_lines(&sys, a, |_, x| {
        out.push(PointLabel::from_index(sys.third_index(x, sum_index(ctx, a, x))))
    });
    Ok(out)
}

/// Counts of each z over the pairs at base index `a`, plus whether z = a occurs.
pub(crate) fn z_counts(sys: &ImageSystem<'_>, a: u32) -> (Vec<u32>, bool) {
    let ctx = sys.ctx();
    let mut counts = vec![0u32; ctx.n() as usize];
    for x in 0..ctx.n() {
        if x == a {
            continue;
        }
        let y = sum_index(ctx, a, x);
        if x < y {
            counts[sys.third_index(x, y) as usize] += 1;
        }
    }
    let degenerate = counts[a as usize] > 0;
    (counts, degenerate)
}

pub fn v_star(ctx: &FieldCtx, f: &Permutation, a: u32, convention: Convention) -> Result<VStar> {
    let a = point(ctx, a)?.index();
    let (counts, _) = z_counts(&ImageSystem::new(ctx, f, convention), a);
    Ok(VStar::from_counts(counts))
}

/// v = 1 + number of distinct third points. Fails when some z equals a.
pub fn v_value(ctx: &FieldCtx, f: &Permutation, a: u32, convention: Convention) -> Result<u64> {
    let label = point(ctx, a)?;
    let (counts, degenerate) = z_counts(&ImageSystem::new(ctx, f, convention), label.index());
    if degenerate {
        return Err(AtlasError::DegenerateEmbedding { point: label.0 });
    }
    Ok(1 + counts.iter().filter(|&&c| c > 0).count() as u64)
}

/// |{x + F^-1(a + F(x)) : x in F^m}| evaluated literally over all x.
pub fn v_direct(ctx: &FieldCtx, f: &Permutation, a: u32) -> Result<u64> {
    let a = point(ctx, a)?;
    let ae = ctx.exp_table()[a.index() as usize];
    let mut seen = vec![false; ctx.size()];
    let mut distinct = 0u64;
    for x in 0..ctx.size() as u32 {
        let y = x ^ f.apply_inv(ctx, ae ^ f.apply(ctx, x));
        if !std::mem::replace(&mut seen[y as usize], true) {
            distinct += 1;
        }
    }
    Ok(distinct)
}

/// APN via v: v_F(a) = 2^(m-1) at every a (at a = 1 for monomial maps).
pub fn apn_by_v(ctx: &FieldCtx, f: &Permutation) -> bool {
    let target = 1u64 << (ctx.m() - 1);
    let points: Vec<u32> = if f.is_monomial() { vec![1] } else { (1..=ctx.n()).collect() };
    points.into_iter().all(|a| v_direct(ctx, f, a).map(|v| v == target).unwrap_or(false))
}

/// APN by counting solutions of F(x) + F(x + b) = c for every b != 0.
pub fn apn_oracle(ctx: &FieldCtx, f: &Permutation) -> bool {
    let size = ctx.size();
    let table: Vec<u32> = (0..size as u32).map(|x| f.apply(ctx, x)).collect();
    let mut counts = vec![0u8; size];
    for b in 1..size {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in 0..size {
            let d = (table[x] ^ table[x ^ b]) as usize;
            counts[d] += 1;
            if counts[d] > 2 {
                return false;
            }
        }
    }
    true
}

/// Invariants of the monomial class x^t at point 1.
pub fn monomial_record(ctx: &FieldCtx, t: u64, convention: Convention) -> Result<InvariantRecord> {
    let f = Permutation::monomial(ctx, t)?;
    let sys = ImageSystem::new(ctx, &f, convention);
    let (counts, degenerate) = z_counts(&sys, 0);
    if degenerate {
        return Err(AtlasError::DegenerateEmbedding { point: 1 });
    }
    let vstar = VStar::from_counts(counts);
    let v = 1 + vstar.distinct();
    let spectrum = crate::rotation::sizes_at(&sys, 0);
    Ok(InvariantRecord {
        m: ctx.m(),
        t: Some(t),
        v,
        apn: v == 1u64 << (ctx.m() - 1),
        closed_surface: spectrum.lines() == 1,
        vstar,
        spectrum: spectrum.summary(),
    })
}
