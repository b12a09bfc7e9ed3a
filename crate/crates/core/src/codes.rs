//! The binary code C_F with parity-check matrix H_F = [x; F(x)] over the
//! nonzero x, its minimum distance up to 5, its weight distribution (from the
//! dual by Gray-code enumeration and the MacWilliams identity), and the
//! weight-4 count of the extended code C*_F.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AtlasError, Result};
use crate::gf2m::FieldCtx;
use crate::perm::Permutation;

/// Largest degree for which the dual code is enumerated.
pub const WEIGHT_MAX_M: u32 = 13;

/// Rank over GF(2) of a set of bit vectors.
pub fn gf2_rank_u64(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

pub fn gf2_rank_u32(vectors: &[u32]) -> usize {
    let v: Vec<u64> = vectors.iter().map(|&x| x as u64).collect();
    gf2_rank_u64(&v)
}

/// H_F as 2m rows of n bits; column j is (x, F(x)) with x = alpha^j.
#[derive(Clone, Debug)]
pub struct ParityCheck {
    m: u32,
    n: usize,
    cols: Vec<u64>,
    rows: Vec<Vec<u64>>,
}

impl ParityCheck {
    pub fn build(ctx: &FieldCtx, f: &Permutation) -> Self {
        let m = ctx.m();
        let n = ctx.n() as usize;
        let words = n.div_ceil(64);
        let cols: Vec<u64> = ctx
            .exp_table()
            .iter()
            .map(|&x| x as u64 | (f.apply(ctx, x) as u64) << m)
            .collect();
        let mut rows = vec![vec![0u64; words]; 2 * m as usize];
        for (j, &c) in cols.iter().enumerate() {
            for (r, row) in rows.iter_mut().enumerate() {
                if c >> r & 1 == 1 {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        ParityCheck { m, n, cols, rows }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        gf2_rank_u64(&self.cols)
    }

    /// Row `r` as a 0/1 string.
    pub fn row_string(&self, r: usize) -> String {
        (0..self.n)
            .map(|j| if self.rows[r][j / 64] >> (j % 64) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MinDistance {
    Three,
    Four,
    AtLeastFive,
}

impl std::fmt::Display for MinDistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MinDistance::Three => "3",
            MinDistance::Four => "4",
            MinDistance::AtLeastFive => ">=5",
        })
    }
}

/// Resolves the minimum distance of C_F to 3, 4 or at least 5 by looking for
/// dependent column triples (a block shared by S and F(S)) and column pairs
/// with equal syndrome differences.
pub fn min_distance_upto5(ctx: &FieldCtx, f: &Permutation) -> MinDistance {
    let size = ctx.size() as u32;
    let table: Vec<u32> = (0..size).map(|x| f.apply(ctx, x)).collect();
    let diffs: Vec<u32> = if f.is_monomial() { vec![1] } else { (1..size).collect() };

    let shares_block = diffs.iter().any(|&d| {
        (1..size).any(|x| {
            let y = x ^ d;
            y != 0 && x != d && table[x as usize] ^ table[y as usize] == table[d as usize]
        })
    });
    if shares_block {
        return MinDistance::Three;
    }

    let mut stamp = vec![0u32; size as usize];
    for (round, &d) in diffs.iter().enumerate() {
        let tag = round as u32 + 1;
        for x in 1..size {
            let y = x ^ d;
            if y == 0 || x > y {
                continue;
            }
            let s = (table[x as usize] ^ table[y as usize]) as usize;
            if stamp[s] == tag {
                return MinDistance::Four;
            }
            stamp[s] = tag;
        }
    }
    MinDistance::AtLeastFive
}

/// Weight distributions of C_F (length n) and its dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    /// A_0..A_n of C_F.
    pub counts: Vec<BigUint>,
    /// B_0..B_n of the dual (the row space of H_F).
    pub dual: Vec<u64>,
    pub dual_dim: usize,
}

impl WeightDistribution {
    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// A*_0..A*_{n+1} of the even-weight extension C*_F.
    pub fn extended(&self) -> Vec<BigUint> {
        let n = self.length();
        (0..=n + 1)
            .map(|w| {
                if w % 2 == 1 {
                    BigUint::zero()
                } else {
                    let mut a = self.counts.get(w).cloned().unwrap_or_default();
                    if w > 0 {
                        a += &self.counts[w - 1];
                    }
                    a
                }
            })
            .collect()
    }

    /// Nonzero `(w, A_w)` entries.
    pub fn nonzero(&self, extended: bool) -> Vec<(usize, BigUint)> {
        let v = if extended { self.extended() } else { self.counts.clone() };
        v.into_iter().enumerate().filter(|(_, a)| !a.is_zero()).collect()
    }
}

/// Histogram of weights over the row space of H_F, by Gray-code walks in
/// independent prefix blocks.
pub fn dual_weights(pc: &ParityCheck, parallel: bool) -> Vec<u64> {
    let k = pc.rows.len();
    let n = pc.n;
    let words = n.div_ceil(64);
    let high = k.min(6);
    let low = k - high;
    let block = |prefix: u64| -> Vec<u64> {
        let mut hist = vec![0u64; n + 1];
        let mut c = vec![0u64; words];
        for r in 0..high {
            if prefix >> r & 1 == 1 {
                xor_into(&mut c, &pc.rows[low + r]);
            }
        }
        hist[weight(&c)] += 1;
        for i in 1u64..1 << low {
            xor_into(&mut c, &pc.rows[i.trailing_zeros() as usize]);
            hist[weight(&c)] += 1;
        }
        hist
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    let prefixes = 0..1u64 << high;
    if parallel {
        prefixes.into_par_iter().map(block).reduce(|| vec![0; n + 1], merge)
    } else {
        prefixes.map(block).fold(vec![0; n + 1], merge)
    }
}

#[inline]
fn xor_into(c: &mut [u64], r: &[u64]) {
    c.iter_mut().zip(r).for_each(|(a, b)| *a ^= b);
}

#[inline]
fn weight(c: &[u64]) -> usize {
    c.iter().map(|w| w.count_ones() as usize).sum()
}

/// MacWilliams transform: given the distribution `b` of a length-n code with
/// 2^dim words, returns the distribution of its dual.
pub fn macwilliams(b: &[BigUint], dim: usize) -> Result<Vec<BigUint>> {
    let n = b.len() - 1;
    let nn = BigInt::from(n);
    let mut acc = vec![BigInt::zero(); n + 1];
    for (j, bj) in b.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        let bj = BigInt::from(bj.clone());
        let c = BigInt::from(n as i64 - 2 * j as i64);
        let mut prev = BigInt::one();
        let mut cur = c.clone();
        acc[0] += &bj;
        if n >= 1 {
            acc[1] += &bj * &cur;
        }
        for w in 1..n {
            let next = (&c * &cur - (&nn - w + 1u32) * &prev) / (w + 1);
            acc[w + 1] += &bj * &next;
            prev = std::mem::replace(&mut cur, next);
        }
    }
    let size = BigInt::one() << dim;
    acc.into_iter()
        .enumerate()
        .map(|(w, a)| {
            if a.is_negative() || !(&a % &size).is_zero() {
                return Err(AtlasError::Consistency(format!("MacWilliams transform not integral at weight {w}")));
            }
            Ok((a / &size).to_biguint().expect("non-negative"))
        })
        .collect()
}

pub fn weight_distribution(ctx: &FieldCtx, f: &Permutation, parallel: bool) -> Result<WeightDistribution> {
    let m = ctx.m();
    if m > WEIGHT_MAX_M {
        return Err(AtlasError::TooLarge { what: "weight distribution", m, max: WEIGHT_MAX_M });
    }
    let pc = ParityCheck::build(ctx, f);
    let rank = pc.rank();
    if rank != 2 * m as usize {
        return Err(AtlasError::RankDeficient { rank, expected: 2 * m as usize });
    }
    let dual = dual_weights(&pc, parallel);
    let b: Vec<BigUint> = dual.iter().map(|&x| BigUint::from(x)).collect();
    let counts = macwilliams(&b, rank)?;
    Ok(WeightDistribution { counts, dual, dual_dim: rank })
}

/// Weight-4 count of C*_F: the direct count and the solution-count formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleCheck {
    pub lhs: u64,
    pub rhs: u64,
}

impl QuadrupleCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// Requires a monomial map; the direct count runs over all pairs.
pub fn quadruple_check(ctx: &FieldCtx, f: &Permutation) -> Result<QuadrupleCheck> {
    if !f.is_monomial() {
        return Err(AtlasError::InvalidPermutation("the quadruple formula needs a monomial map".into()));
    }
    let m = ctx.m();
    if m > WEIGHT_MAX_M {
        return Err(AtlasError::TooLarge { what: "quadruple check", m, max: WEIGHT_MAX_M });
    }
    let size = ctx.size() as u32;
    let table: Vec<u32> = (0..size).map(|x| f.apply(ctx, x)).collect();
    let bucket = |d: u32| -> Vec<u64> {
        let mut counts = vec![0u64; size as usize];
        for x in 0..size {
            counts[(table[x as usize] ^ table[(x ^ d) as usize]) as usize] += 1;
        }
        counts
    };

    let mut total = 0u64;
    for d in 1..size {
        total += bucket(d).iter().map(|&c| choose2(c / 2)).sum::<u64>();
    }
    if !total.is_multiple_of(3) {
        return Err(AtlasError::Consistency("weight-4 pairings not divisible by 3".into()));
    }
    let lhs = total / 3;

    let per_b: u64 = bucket(1).iter().map(|&nb| choose2(nb / 2)).sum();
    let scaled = ctx.n() as u64 * per_b;
    if !scaled.is_multiple_of(3) {
        return Err(AtlasError::Consistency("quadruple formula not integral".into()));
    }
    Ok(QuadrupleCheck { lhs, rhs: scaled / 3 })
}

/// Weight-distribution entries as `w,count` lines.
pub fn weights_csv(dist: &[BigUint]) -> String {
    let mut out = String::from("w,count\n");
    for (w, a) in dist.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        out.push_str(&format!("{w},{a}\n"));
    }
    out
}

/// Compact fingerprint used to compare distributions quickly.
pub fn dual_signature(dual: &[u64]) -> Vec<(usize, u64)> {
    dual.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn gf(m: u32) -> FieldCtx {
        FieldCtx::new(m, None).unwrap()
    }

    fn mono(f: &FieldCtx, t: u64) -> Permutation {
        Permutation::monomial(f, t).unwrap()
    }

    /// Dual weights through the Walsh transform: the word for (a, b) has
    /// weight (2^m - W_F(a, b)) / 2.
    fn walsh_dual(ctx: &FieldCtx, f: &Permutation) -> Vec<u64> {
        let size = ctx.size();
        let mut hist = vec![0u64; ctx.n() as usize + 1];
        for b in 0..size as u32 {
            let mut w: Vec<i64> = (0..size as u32)
                .map(|x| if (b & f.apply(ctx, x)).count_ones().is_multiple_of(2) { 1 } else { -1 })
                .collect();
            let mut h = 1;
            while h < size {
                for i in (0..size).step_by(2 * h) {
                    for j in i..i + h {
                        let (x, y) = (w[j], w[j + h]);
                        w[j] = x + y;
                        w[j + h] = x - y;
                    }
                }
                h *= 2;
            }
            for wa in w {
                hist[((size as i64 - wa) / 2) as usize] += 1;
            }
        }
        hist
    }

    #[test]
    fn rank_examples() {
        let f = gf(5);
        assert_eq!(ParityCheck::build(&f, &mono(&f, 5)).rank(), 10);
        assert_eq!(ParityCheck::build(&f, &Permutation::identity(&f)).rank(), 5);
        assert_eq!(ParityCheck::build(&f, &mono(&f, 2)).rank(), 5);
        assert_eq!(gf2_rank_u32(&[1, 2, 3]), 2);
        assert_eq!(gf2_rank_u32(&[]), 0);
    }

    #[test]
    fn parity_top_rows_are_hamming() {
        let f = gf(3);
        let pc = ParityCheck::build(&f, &mono(&f, 3));
        for j in 0..7 {
            let col: u32 = (0..3).map(|r| ((pc.rows()[r][0] >> j & 1) as u32) << r).sum();
            assert_eq!(col, f.exp_table()[j]);
        }
        assert_eq!(pc.row_string(0).len(), 7);
    }

    #[test]
    fn min_distance_examples() {
        let f = gf(5);
        assert_eq!(min_distance_upto5(&f, &mono(&f, 5)), MinDistance::AtLeastFive);
        assert_eq!(min_distance_upto5(&f, &Permutation::identity(&f)), MinDistance::Three);
        let f7 = gf(7);
        assert_ne!(min_distance_upto5(&f7, &mono(&f7, 19)), MinDistance::AtLeastFive);
    }

    #[test]
    fn min_distance_table_route_agrees() {
        let f = gf(6);
        for t in [1u64, 2, 5, 11, 13, 23, 31] {
            let p = mono(&f, t);
            let tbl = Permutation::Table(p.to_table(&f));
            assert_eq!(min_distance_upto5(&f, &p), min_distance_upto5(&f, &tbl), "t={t}");
        }
    }

    #[test]
    fn gray_code_matches_walsh() {
        for (m, t) in [(3u32, 3u64), (5, 3), (5, 5), (5, 7), (6, 5), (7, 19)] {
            let f = gf(m);
            let p = mono(&f, t);
            let pc = ParityCheck::build(&f, &p);
            let gray = dual_weights(&pc, false);
            assert_eq!(gray, walsh_dual(&f, &p), "m={m} t={t}");
            assert_eq!(dual_weights(&pc, true), gray);
        }
    }

    #[test]
    fn weight_distribution_sums() {
        let f = gf(5);
        let d = weight_distribution(&f, &mono(&f, 5), false).unwrap();
        assert_eq!(d.counts[0], BigUint::one());
        assert_eq!(d.total(), BigUint::one() << (31 - 10));
        assert!(d.counts[1..5].iter().all(|a| a.is_zero()));
        let ext = d.extended();
        assert_eq!(ext.len(), 33);
        assert_eq!(ext.iter().sum::<BigUint>(), d.total());
        assert!(matches!(
            weight_distribution(&f, &Permutation::identity(&f), false),
            Err(AtlasError::RankDeficient { rank: 5, expected: 10 })
        ));
        let f15 = FieldCtx::new(14, None).unwrap();
        assert!(matches!(
            weight_distribution(&f15, &mono(&f15, 1), false),
            Err(AtlasError::TooLarge { .. })
        ));
    }

    #[test]
    fn coset_members_share_distributions() {
        let f = gf(5);
        assert_eq!(
            weight_distribution(&f, &mono(&f, 5), false).unwrap(),
            weight_distribution(&f, &mono(&f, 25), false).unwrap()
        );
    }

    #[test]
    fn macwilliams_twice_is_identity() {
        let f = gf(5);
        let d = weight_distribution(&f, &mono(&f, 3), false).unwrap();
        let back = macwilliams(&d.counts, 31 - 10).unwrap();
        let dual: Vec<BigUint> = d.dual.iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(back, dual);
    }

    #[test]
    fn macwilliams_of_repetition_code() {
        let rep = vec![BigUint::one(), BigUint::zero(), BigUint::zero(), BigUint::one()];
        let even = macwilliams(&rep, 1).unwrap();
        assert_eq!(even, vec![1u32, 0, 3, 0].into_iter().map(BigUint::from).collect::<Vec<_>>());
    }

    #[test]
    fn quadruple_examples() {
        let f5 = gf(5);
        assert_eq!(quadruple_check(&f5, &mono(&f5, 5)).unwrap(), QuadrupleCheck { lhs: 0, rhs: 0 });
        for (m, t) in [(5u32, 7u64), (7, 19), (7, 7), (6, 5)] {
            let f = gf(m);
            let p = mono(&f, t);
            let q = quadruple_check(&f, &p).unwrap();
            assert!(q.holds(), "m={m} t={t} {q:?}");
            let a4 = &weight_distribution(&f, &p, false).unwrap().extended()[4];
            assert_eq!(a4.to_u64(), Some(q.lhs));
        }
    }
}
