//! Isomorphism search between two self-embeddings S ∪ G1(S) and S ∪ G2(S).
//!
//! Any isomorphism fixing S setwise is a collineation of PG(m-1, 2), hence an
//! invertible linear map L. The search assigns images of basis vectors and
//! propagates two rules through a partial map: linearity
//! `L(x + w) = L(x) + L(w)` and block preservation
//! `L(t1(x, w)) = t2(L(x), L(w))`, where t1, t2 are the image-system thirds.
//! A color-reversing isomorphism is a color-preserving one onto the system of
//! G2^-1.

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::perm::{Convention, LinearMap, Permutation};

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    Isomorphic { witness: LinearMap, reversing: bool },
    NotIsomorphic,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

const NONE: u32 = u32::MAX;

/// Element-domain third point of an image system, via tables of G and G^-1.
struct Thirds {
    fwd: Vec<u32>,
    inv: Vec<u32>,
}

impl Thirds {
    fn new(ctx: &FieldCtx, f: &Permutation, convention: Convention) -> Self {
        let g = f.effective(convention);
        let size = ctx.size() as u32;
        Thirds {
            fwd: (0..size).map(|x| g.apply(ctx, x)).collect(),
            inv: (0..size).map(|x| g.apply_inv(ctx, x)).collect(),
        }
    }

    #[inline(always)]
    fn third(&self, x: u32, y: u32) -> u32 {
        self.fwd[(self.inv[x as usize] ^ self.inv[y as usize]) as usize]
    }
}

struct Search<'a> {
    m: u32,
    t1: &'a Thirds,
    t2: &'a Thirds,
    img: Vec<u32>,
    pre: Vec<u32>,
    known: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(m: u32, t1: &'a Thirds, t2: &'a Thirds, budget: u64) -> Self {
        let size = 1usize << m;
        let mut s = Search {
            m,
            t1,
            t2,
            img: vec![NONE; size],
            pre: vec![NONE; size],
            known: Vec::new(),
            nodes: 0,
            budget,
        };
        s.img[0] = 0;
        s.pre[0] = 0;
        s
    }

    #[inline]
    fn assign(&mut self, x: u32, y: u32) -> bool {
        match self.img[x as usize] {
            NONE => {
                if self.pre[y as usize] != NONE {
                    return false;
                }
                self.img[x as usize] = y;
                self.pre[y as usize] = x;
                self.known.push(x);
                true
            }
            old => old == y,
        }
    }

    /// Closes the partial map under both rules, starting with entry `from`.
    fn propagate(&mut self, from: usize) -> bool {
        let mut i = from;
        while i < self.known.len() {
            let x = self.known[i];
            let y = self.img[x as usize];
            for j in 0..i {
                let w = self.known[j];
                let v = self.img[w as usize];
                if !self.assign(x ^ w, y ^ v) {
                    return false;
                }
                let (a, b) = (self.t1.third(x, w), self.t2.third(y, v));
                if !self.assign(a, b) {
                    return false;
                }
            }
            i += 1;
        }
        true
    }

    fn undo(&mut self, len: usize) {
        for x in self.known.drain(len..) {
            let y = self.img[x as usize];
            self.img[x as usize] = NONE;
            self.pre[y as usize] = NONE;
        }
    }

    fn run(&mut self) -> Result<bool> {
        let Some(j) = (0..self.m).find(|&j| self.img[1usize << j] == NONE) else {
            return Ok(true);
        };
        let x = 1u32 << j;
        let len = self.known.len();
        for y in 1..(1u32 << self.m) {
            if self.pre[y as usize] != NONE {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(AtlasError::Timeout(self.budget));
            }
            self.assign(x, y);
            if self.propagate(len) && self.run()? {
                return Ok(true);
            }
            self.undo(len);
        }
        Ok(false)
    }

    fn witness(&self) -> LinearMap {
        LinearMap::new((0..self.m).map(|j| self.img[1usize << j]).collect())
    }
}

/// Color-preserving search for L with L(G1(S)) = G2(S).
fn preserving(
    ctx: &FieldCtx,
    t1: &Thirds,
    t2: &Thirds,
    fix_one: bool,
    budget: u64,
    used: &mut u64,
) -> Result<Option<LinearMap>> {
    let mut s = Search::new(ctx.m(), t1, t2, budget.saturating_sub(*used));
    if fix_one {
        s.assign(1, 1);
        if !s.propagate(0) {
            *used += s.nodes;
            return Ok(None);
        }
    }
    let found = s.run();
    *used += s.nodes;
    Ok(found?.then(|| s.witness()))
}

/// Decides whether S ∪ F1(S) and S ∪ F2(S) are isomorphic, within `budget`
/// search nodes.
pub fn iso_search(
    ctx: &FieldCtx,
    f1: &Permutation,
    f2: &Permutation,
    convention: Convention,
    budget: u64,
) -> Result<IsoVerdict> {
    let t1 = Thirds::new(ctx, f1, convention);
    let mut used = 0u64;
    for (reversing, target) in [(false, f2.clone()), (true, f2.inverse())] {
        let t2 = Thirds::new(ctx, &target, convention);
        if let Some(witness) = preserving(ctx, &t1, &t2, target.is_monomial(), budget, &mut used)? {
            return Ok(IsoVerdict::Isomorphic { witness, reversing });
        }
    }
    Ok(IsoVerdict::NotIsomorphic)
}

/// Checks that `l` carries every block of the F1 system onto a block of the
/// system of F2 (or of F2^-1 when `reversing`).
pub fn verify_witness(
    ctx: &FieldCtx,
    f1: &Permutation,
    f2: &Permutation,
    convention: Convention,
    l: &LinearMap,
    reversing: bool,
) -> bool {
    if l.columns().len() != ctx.m() as usize || !l.is_invertible() {
        return false;
    }
    let target = if reversing { f2.inverse() } else { f2.clone() };
    let t1 = Thirds::new(ctx, f1, convention);
    let t2 = Thirds::new(ctx, &target, convention);
    let size = ctx.size() as u32;
    (1..size).all(|x| (x + 1..size).all(|w| l.apply(t1.third(x, w)) == t2.third(l.apply(x), l.apply(w))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(m: u32) -> FieldCtx {
        FieldCtx::new(m, None).unwrap()
    }

    fn mono(f: &FieldCtx, t: u64) -> Permutation {
        Permutation::monomial(f, t).unwrap()
    }

    fn check(m: u32, a: u64, b: u64) -> IsoVerdict {
        let f = gf(m);
        let (p, q) = (mono(&f, a), mono(&f, b));
        let v = iso_search(&f, &p, &q, Convention::Inverse, DEFAULT_NODE_BUDGET).unwrap();
        if let IsoVerdict::Isomorphic { witness, reversing } = &v {
            assert!(verify_witness(&f, &p, &q, Convention::Inverse, witness, *reversing));
        }
        v
    }

    #[test]
    fn m7_seven_and_twentyone_differ() {
        assert_eq!(check(7, 7, 21), IsoVerdict::NotIsomorphic);
        assert_eq!(check(7, 21, 7), IsoVerdict::NotIsomorphic);
    }

    #[test]
    fn same_coset_pairs_are_isomorphic() {
        assert!(check(5, 5, 25).is_isomorphic());
        assert!(check(7, 9, 18).is_isomorphic());
        assert!(check(7, 7, 14).is_isomorphic());
    }

    #[test]
    fn self_isomorphism() {
        for (m, t) in [(5u32, 5u64), (7, 19), (7, 9)] {
            assert!(check(m, t, t).is_isomorphic());
        }
        let f = gf(5);
        let p = mono(&f, 5);
        assert!(verify_witness(&f, &p, &p, Convention::Inverse, &LinearMap::identity(5), false));
    }

    #[test]
    fn table_inputs_agree_with_monomials() {
        let f = gf(5);
        let p = mono(&f, 5);
        let q = Permutation::Table(mono(&f, 25).to_table(&f));
        let v = iso_search(&f, &p, &q, Convention::Inverse, DEFAULT_NODE_BUDGET).unwrap();
        assert!(v.is_isomorphic());
    }

    #[test]
    fn budget_exhaustion_times_out() {
        let f = gf(7);
        let r = iso_search(&f, &mono(&f, 7), &mono(&f, 21), Convention::Inverse, 3);
        assert!(matches!(r, Err(AtlasError::Timeout(3))));
    }
}
