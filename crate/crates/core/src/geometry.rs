//! Euler characteristic, genus or crosscap number, and orientability of the
//! closed surface carrying S (black faces) and the image system (white faces).
//!
//! Orientability is decided from the rotation at each vertex. Around a vertex
//! u the neighbours alternate between entries followed by a black face
//! ("a-entries", type 0) and entries followed by a white face (type 1). Choosing
//! a direction bit s_u per vertex, the surface is orientable iff
//! `s_u + s_v = 1 + type_u(v) + type_v(u)` is solvable over GF(2) on every edge.

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::labels::{sum_index, ImageSystem};
use crate::perm::{Convention, Permutation};
use crate::rotation::{closed_at, is_closed_surface};

/// Largest degree for the all-vertex orientability check.
pub const GENERAL_ORIENT_MAX_M: u32 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub chi: i64,
    pub orientable: bool,
    /// Genus if orientable, crosscap number otherwise.
    pub genus_or_crosscaps: u64,
}

/// Type of every neighbour of base index `a` (0 for a-entries, 1 for b-entries),
/// assuming a single rotation line.
fn neighbour_types(sys: &ImageSystem<'_>, a: u32, types: &mut [u8]) {
    let ctx = sys.ctx();
    let start = if a == 0 { 1 } else { 0 };
    let mut x = start;
    loop {
        types[x as usize] = 0;
        types[sum_index(ctx, a, x) as usize] = 1;
        x = sys.successor_index(a, x);
        if x == start {
            break;
        }
    }
}

/// Orientability for a monomial map from the types at point 1 alone. The
/// constraints are invariant under the cyclic shift, so with n odd they are
/// solvable iff every right-hand side vanishes: `T[k] != T[n - k]` for all k.
fn orientable_monomial(sys: &ImageSystem<'_>) -> bool {
    let n = sys.ctx().n() as usize;
    let mut t = vec![0u8; n];
    neighbour_types(sys, 0, &mut t);
    (1..n).all(|k| t[k] != t[n - k])
}

struct ParityUnionFind {
    parent: Vec<u32>,
    parity: Vec<u8>,
    size: Vec<u32>,
    path: Vec<u32>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n as u32).collect(),
            parity: vec![0; n],
            size: vec![1; n],
            path: Vec::new(),
        }
    }

    /// Root of x and the parity of x relative to it.
    fn find(&mut self, x: u32) -> (u32, u8) {
        let mut root = x;
        self.path.clear();
        while self.parent[root as usize] != root {
            self.path.push(root);
            root = self.parent[root as usize];
        }
        let mut acc = 0;
        for &node in self.path.iter().rev() {
            acc ^= self.parity[node as usize];
            self.parity[node as usize] = acc;
            self.parent[node as usize] = root;
        }
        let p = if x == root { 0 } else { self.parity[x as usize] };
        (root, p)
    }

    /// Records s_x + s_y = rel; returns false on contradiction.
    fn union(&mut self, x: u32, y: u32, rel: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        let (small, big) = if self.size[rx as usize] < self.size[ry as usize] { (rx, ry) } else { (ry, rx) };
        self.parent[small as usize] = big;
        self.parity[small as usize] = px ^ py ^ rel;
        self.size[big as usize] += self.size[small as usize];
        true
    }
}

/// Orientability from the rotations at every vertex.
pub fn orientable_all_vertices(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> Result<bool> {
    let m = ctx.m();
    if m > GENERAL_ORIENT_MAX_M {
        return Err(AtlasError::TooLarge { what: "all-vertex orientability", m, max: GENERAL_ORIENT_MAX_M });
    }
    let sys = ImageSystem::new(ctx, f, convention);
    let n = ctx.n() as usize;
    if !(0..n as u32).all(|a| closed_at(&sys, a)) {
        return Err(AtlasError::NotClosedSurface);
    }
    let mut types = vec![0u8; n * n];
    for a in 0..n {
        neighbour_types(&sys, a as u32, &mut types[a * n..(a + 1) * n]);
    }
    let mut uf = ParityUnionFind::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let rel = 1 ^ types[u * n + v] ^ types[v * n + u];
            if !uf.union(u as u32, v as u32, rel) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn orientable(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> Result<bool> {
    if !is_closed_surface(ctx, f, convention) {
        return Err(AtlasError::NotClosedSurface);
    }
    let sys = ImageSystem::new(ctx, f, convention);
    if sys.is_monomial() {
        Ok(orientable_monomial(&sys))
    } else {
        orientable_all_vertices(ctx, f, convention)
    }
}

/// chi from V - E + F for the triangulation of K_n, checked against the
/// closed form 2 - (n - 4)(n - 3)/6.
pub fn euler_characteristic(n: u64) -> Result<i64> {
    let n = n as i64;
    let (v, e, f) = (n, n * (n - 1) / 2, n * (n - 1) / 3);
    let chi = v - e + f;
    let formula = 2 - (n - 4) * (n - 3) / 6;
    if chi != formula {
        return Err(AtlasError::Consistency(format!("chi {chi} differs from closed form {formula}")));
    }
    Ok(chi)
}

pub fn surface_report(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> Result<SurfaceReport> {
    let orientable = orientable(ctx, f, convention)?;
    let chi = euler_characteristic(ctx.n() as u64)?;
    let genus_or_crosscaps = if orientable { (2 - chi) as u64 / 2 } else { (2 - chi) as u64 };
    Ok(SurfaceReport { chi, orientable, genus_or_crosscaps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> FieldCtx {
        FieldCtx::new(m, None).unwrap()
    }

    #[test]
    fn chi_values() {
        assert_eq!(euler_characteristic(7).unwrap(), 0);
        assert_eq!(euler_characteristic(31).unwrap(), -124);
        assert_eq!(euler_characteristic(127).unwrap(), -2540);
    }

    #[test]
    fn torus_and_nonorientable_examples() {
        let f3 = gf(3);
        let r = surface_report(&f3, &Permutation::monomial(&f3, 3).unwrap(), Convention::Inverse).unwrap();
        assert_eq!(r, SurfaceReport { chi: 0, orientable: true, genus_or_crosscaps: 1 });
        let f5 = gf(5);
        let r = surface_report(&f5, &Permutation::monomial(&f5, 5).unwrap(), Convention::Inverse).unwrap();
        assert_eq!(r, SurfaceReport { chi: -124, orientable: false, genus_or_crosscaps: 126 });
        let f7 = gf(7);
        assert!(!orientable(&f7, &Permutation::monomial(&f7, 9).unwrap(), Convention::Inverse).unwrap());
    }

    #[test]
    fn pinched_surfaces_are_rejected() {
        let f5 = gf(5);
        let p = Permutation::monomial(&f5, 3).unwrap();
        assert!(matches!(orientable(&f5, &p, Convention::Inverse), Err(AtlasError::NotClosedSurface)));
        assert!(matches!(orientable_all_vertices(&f5, &p, Convention::Inverse), Err(AtlasError::NotClosedSurface)));
    }

    #[test]
    fn fast_path_matches_all_vertices() {
        for (m, ts) in [(3u32, vec![3u64, 5]), (5, vec![5, 15, 25]), (7, vec![7, 9, 19, 21])] {
            let f = gf(m);
            for t in ts {
                let p = Permutation::monomial(&f, t).unwrap();
                for conv in [Convention::Direct, Convention::Inverse] {
                    if !is_closed_surface(&f, &p, conv) {
                        continue;
                    }
                    let fast = orientable(&f, &p, conv).unwrap();
                    assert_eq!(fast, orientable_all_vertices(&f, &p, conv).unwrap(), "m={m} t={t}");
                    let tbl = Permutation::Table(p.to_table(&f));
                    assert_eq!(fast, orientable(&f, &tbl, conv).unwrap());
                }
            }
        }
    }
}
