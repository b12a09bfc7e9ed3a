//! Rotation lines at a point, rotation-line spectra, pinch points and the
//! closed-surface test.
//!
//! At base point `a`, a line is `[a1,b1; a2,b2; ...]` with `b_i = a + a_i`
//! (block of S) and `a_{i+1}` the image-system third point of `{a, b_i}`.
//! New lines start at the smallest uncovered label and follow successor order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::labels::{sum_index, ImageSystem, PointLabel};
use crate::perm::{Convention, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationLine {
    pub base: PointLabel,
    pub entries: Vec<(PointLabel, PointLabel)>,
}

impl RotationLine {
    /// Number of points on the line (two per entry).
    pub fn size(&self) -> u64 {
        2 * self.entries.len() as u64
    }
}

impl fmt::Display for RotationLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (a, b)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{a},{b}")?;
        }
        f.write_str("]")
    }
}

/// Line sizes (in points) at one base point, in line order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub sizes: Vec<u64>,
}

impl Spectrum {
    pub fn lines(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Distinct sizes, ascending.
    pub fn reduced(&self) -> Vec<u64> {
        let mut r = self.sizes.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    /// (size, count) pairs, ascending by size.
    pub fn histogram(&self) -> Vec<(u64, u64)> {
        let mut h = BTreeMap::new();
        for &s in &self.sizes {
            *h.entry(s).or_insert(0u64) += 1;
        }
        h.into_iter().collect()
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary { lines: self.lines(), sizes: self.histogram() }
    }

    /// `(s; n1, n2, ...)` over distinct sizes.
    pub fn reduced_string(&self) -> String {
        format_spectrum(self.lines(), &self.reduced(), ", ", "; ")
    }

    /// `(s;n1,n2,...)`, the table-cell form.
    pub fn compact_string(&self) -> String {
        format_spectrum(self.lines(), &self.reduced(), ",", ";")
    }

    /// `(s; n1, n2, ...)` listing every line, sizes ascending.
    pub fn full_string(&self) -> String {
        let mut all = self.sizes.clone();
        all.sort_unstable();
        format_spectrum(self.lines(), &all, ", ", "; ")
    }
}

fn format_spectrum(lines: usize, sizes: &[u64], sep: &str, head: &str) -> String {
    let body: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    format!("({lines}{head}{})", body.join(sep))
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reduced_string())
    }
}

/// Serialized spectrum: number of lines plus a size histogram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub lines: usize,
    pub sizes: Vec<(u64, u64)>,
}

impl SpectrumSummary {
    pub fn reduced(&self) -> Vec<u64> {
        self.sizes.iter().map(|&(s, _)| s).collect()
    }

    pub fn compact_string(&self) -> String {
        format_spectrum(self.lines, &self.reduced(), ",", ";")
    }
}

/// Bit set over point indices.
pub(crate) struct Marks {
    words: Vec<u64>,
}

impl Marks {
    pub(crate) fn new(len: usize) -> Self {
        Marks { words: vec![0; len.div_ceil(64)] }
    }

    #[inline(always)]
    pub(crate) fn set(&mut self, i: u32) {
        self.words[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline(always)]
    pub(crate) fn get(&self, i: u32) -> bool {
        self.words[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }
}

/// Walks every line at base index `a`, calling `visit(line, x)` for each
/// a-entry index `x` of line number `line`.
pub(crate) fn walk_lines(sys: &ImageSystem<'_>, a: u32, mut visit: impl FnMut(usize, u32)) {
    let ctx = sys.ctx();
    let n = ctx.n();
    let mut covered = Marks::new(n as usize);
    covered.set(a);
    let mut line = 0;
    for start in 0..n {
        if covered.get(start) {
            continue;
        }
        let mut x = start;
        loop {
            covered.set(x);
            covered.set(sum_index(ctx, a, x));
            visit(line, x);
            x = sys.successor_index(a, x);
            if x == start {
                break;
            }
        }
        line += 1;
    }
}

pub(crate) fn sizes_at(sys: &ImageSystem<'_>, a: u32) -> Spectrum {
    let mut sizes: Vec<u64> = Vec::new();
    walk_lines(sys, a, |line, _| {
        if line == sizes.len() {
            sizes.push(0);
        }
        sizes[line] += 2;
    });
    Spectrum { sizes }
}

/// True iff the single line from the first uncovered point covers all n - 1
/// points. Stops as soon as the walk returns to its start.
pub(crate) fn closed_at(sys: &ImageSystem<'_>, a: u32) -> bool {
    let n = sys.ctx().n();
    let target = (n as u64 - 1) / 2;
    let start = if a == 0 { 1 } else { 0 };
    let mut x = start;
    let mut steps = 0u64;
    loop {
        steps += 1;
        x = sys.successor_index(a, x);
        if x == start {
            break;
        }
        if steps > target {
            return false;
        }
    }
    steps == target
}

fn base(ctx: &FieldCtx, a: u32) -> Result<PointLabel> {
    PointLabel::new(ctx, a)
}

/// The a-entry following `x` in the rotation line at `a`.
pub fn successor(ctx: &FieldCtx, f: &Permutation, a: u32, x: u32, convention: Convention) -> Result<PointLabel> {
    let a = base(ctx, a)?;
    let x = base(ctx, x)?;
    if a == x {
        return Err(AtlasError::SamePoint(a.0));
    }
    let sys = ImageSystem::new(ctx, f, convention);
    Ok(PointLabel::from_index(sys.successor_index(a.index(), x.index())))
}

pub fn rotation_lines(ctx: &FieldCtx, f: &Permutation, a: u32, convention: Convention) -> Result<Vec<RotationLine>> {
    let a = base(ctx, a)?;
    let sys = ImageSystem::new(ctx, f, convention);
    let mut lines: Vec<RotationLine> = Vec::new();
    walk_lines(&sys, a.index(), |line, x| {
        if line == lines.len() {
            lines.push(RotationLine { base: a, entries: Vec::new() });
        }
        let b = sum_index(ctx, a.index(), x);
        lines[line].entries.push((PointLabel::from_index(x), PointLabel::from_index(b)));
    });
    Ok(lines)
}

pub fn spectrum(ctx: &FieldCtx, f: &Permutation, a: u32, convention: Convention) -> Result<Spectrum> {
    let a = base(ctx, a)?;
    Ok(sizes_at(&ImageSystem::new(ctx, f, convention), a.index()))
}

/// Closed-surface test. Monomial maps are checked at point 1 only, since
/// multiplication by a field element carries the rotation at 1 onto the
/// rotation at any other point; other maps are checked at every point.
pub fn is_closed_surface(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> bool {
    let sys = ImageSystem::new(ctx, f, convention);
    if sys.is_monomial() {
        closed_at(&sys, 0)
    } else {
        (0..ctx.n()).all(|a| closed_at(&sys, a))
    }
}

/// Number of points carrying more than one rotation line.
pub fn pinch_count(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> usize {
    let sys = ImageSystem::new(ctx, f, convention);
    if sys.is_monomial() {
        if closed_at(&sys, 0) {
            0
        } else {
            ctx.n() as usize
        }
    } else {
        (0..ctx.n()).filter(|&a| !closed_at(&sys, a)).count()
    }
}
