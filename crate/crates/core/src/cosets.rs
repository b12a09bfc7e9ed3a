//! Binary cyclotomic cosets modulo n = 2^m - 1 and their inverse-closed unions.

use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::{gcd, inverse_mod};

/// Members of C*_t = C_t ∪ C_{t^-1}, with `rep` the smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetClass {
    pub rep: u64,
    pub members: Vec<u64>,
    pub selfpaired: bool,
}

impl CosetClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, t: u64) -> bool {
        self.members.binary_search(&t).is_ok()
    }
}

/// C_i = {i, 2i, 4i, ...} mod n, sorted.
pub fn coset(n: u64, i: u64) -> Vec<u64> {
    let start = i % n;
    let mut out = vec![start];
    let mut x = (2 * start) % n;
    while x != start {
        out.push(x);
        x = (2 * x) % n;
    }
    out.sort_unstable();
    out
}

pub fn coset_star(n: u64, t: u64) -> Result<CosetClass> {
    if gcd(t % n, n) != 1 {
        return Err(AtlasError::NotCoprime { t, n });
    }
    let c = coset(n, t);
    let inv = inverse_mod(t, n)?;
    let selfpaired = c.binary_search(&inv).is_ok();
    let mut members = c;
    if !selfpaired {
        members.extend(coset(n, inv));
        members.sort_unstable();
    }
    Ok(CosetClass { rep: members[0], members, selfpaired })
}

/// The classes C*_t partitioning the exponents coprime to n, excluding the
/// linear class C*_1. Returns `(linear class, other classes ascending by rep)`.
pub fn class_reps(n: u64) -> (CosetClass, Vec<CosetClass>) {
    let linear = coset_star(n, 1).expect("1 is coprime");
    let mut seen = vec![false; n as usize];
    for &t in &linear.members {
        seen[t as usize] = true;
    }
    let mut classes = Vec::new();
    for t in 1..n {
        if seen[t as usize] || gcd(t, n) != 1 {
            continue;
        }
        let c = coset_star(n, t).expect("coprime");
        for &u in &c.members {
            seen[u as usize] = true;
        }
        classes.push(c);
    }
    (linear, classes)
}
