//! Table-driven arithmetic in GF(2^m), 2 <= m <= 22.
//!
//! Elements are "vector integers" in `[0, 2^m)`: bit `j` is the coefficient of
//! `alpha^j`, so addition is XOR. Multiplication, powers and the Zech logarithm
//! (`log(1 + alpha^e)`) are single table lookups after construction.

use sha2::{Digest, Sha256};

use crate::error::{AtlasError, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 22;

/// Marker stored in `log[0]` and `zech[0]`.
pub const NO_LOG: u32 = u32::MAX;

/// Smallest primitive polynomial (as a bitmask) for each degree. The entries
/// for m = 5 and m = 7 are x^5+x^2+1 and x^7+x+1.
const DEFAULT_POLYS: [u64; 21] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x402b, 0x8003,
    0x1002d, 0x20009, 0x40027, 0x80027, 0x100009, 0x200005, 0x400003,
];

pub fn default_poly(m: u32) -> Option<u64> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&m) {
        Some(DEFAULT_POLYS[(m - MIN_DEGREE) as usize])
    } else {
        None
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Inverse of `t` modulo `n` by the extended Euclidean algorithm.
pub fn inverse_mod(t: u64, n: u64) -> Result<u64> {
    let t = t % n;
    let (mut r0, mut r1) = (n as i128, t as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return Err(AtlasError::NotCoprime { t, n });
    }
    Ok(s0.rem_euclid(n as i128) as u64)
}

#[derive(Clone)]
pub struct FieldCtx {
    m: u32,
    poly: u64,
    n: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("m", &self.m)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl FieldCtx {
    /// Builds GF(2^m) over `poly`, or over the pinned default when `poly` is `None`.
    pub fn new(m: u32, poly: Option<u64>) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(AtlasError::DegreeOutOfRange(m));
        }
        let poly = match poly {
            Some(p) => p,
            None => default_poly(m).expect("degree checked above"),
        };
        let found = 63 - poly.leading_zeros().min(63);
        if poly == 0 || found != m {
            return Err(AtlasError::DegreeMismatch {
                poly,
                expected: m,
                found: if poly == 0 { 0 } else { found },
            });
        }

        let size = 1usize << m;
        let n = (size - 1) as u32;
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![NO_LOG; size];
        let mut x: u64 = 1;
        for e in 0..n {
            if x == 0 || log[x as usize] != NO_LOG {
                return Err(AtlasError::NonPrimitivePoly { poly, order: e as u64 });
            }
            exp[e as usize] = x as u32;
            log[x as usize] = e;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(AtlasError::NonPrimitivePoly { poly, order: n as u64 + 1 });
        }

        let zech = (0..n as usize)
            .map(|e| log[(exp[e] ^ 1) as usize])
            .collect();

        Ok(FieldCtx { m, poly, n, exp, log, zech })
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Order of the multiplicative group, 2^m - 1.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of field elements, 2^m.
    #[inline]
    pub fn size(&self) -> usize {
        1usize << self.m
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    /// `zech[e] = log(1 + alpha^e)`, with `zech[0] = NO_LOG`.
    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    /// Reduces `x` modulo n = 2^m - 1 by folding.
    #[inline(always)]
    pub fn reduce(&self, x: u64) -> u32 {
        let n = self.n as u64;
        let mut r = x;
        while r > n {
            r = (r & n) + (r >> self.m);
        }
        if r == n {
            0
        } else {
            r as u32
        }
    }

    /// alpha^e for any e.
    #[inline]
    pub fn exp(&self, e: u64) -> u32 {
        self.exp[self.reduce(e) as usize]
    }

    /// Discrete log base alpha; `None` for 0.
    #[inline]
    pub fn dlog(&self, x: u32) -> Option<u32> {
        match self.log.get(x as usize) {
            Some(&l) if l != NO_LOG => Some(l),
            _ => None,
        }
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        x ^ y
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let e = self.log[x as usize] as u64 + self.log[y as usize] as u64;
        self.exp[self.reduce(e) as usize]
    }

    /// x^t with the convention 0^t = 0 for every t, including t = 0.
    #[inline]
    pub fn pow(&self, x: u32, t: u64) -> u32 {
        if x == 0 {
            return 0;
        }
        let t = t % self.n as u64;
        self.exp[self.reduce(self.log[x as usize] as u64 * t) as usize]
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        self.dlog(x).map(|l| self.exp[((self.n - l) % self.n) as usize])
    }

    /// u with t*u = 1 (mod n).
    pub fn inv_exponent(&self, t: u64) -> Result<u64> {
        inverse_mod(t, self.n as u64)
    }

    /// Hex digest prefix of the exponent table, identifying the field labelling.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.m.to_le_bytes());
        h.update(self.poly.to_le_bytes());
        for &x in &self.exp {
            h.update(x.to_le_bytes());
        }
        let digest = h.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf32() -> FieldCtx {
        FieldCtx::new(5, Some(0x25)).unwrap()
    }

    /// Multiply by alpha repeatedly using only the reduction rule.
    fn power_by_reduction(m: u32, poly: u64, e: u32) -> u32 {
        let mut x: u64 = 1;
        for _ in 0..e {
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        x as u32
    }

    #[test]
    fn alpha5_is_alpha2_plus_one() {
        let f = gf32();
        assert_eq!(power_by_reduction(5, 0x25, 5), 0b00101);
        assert_eq!(f.exp(5), 5);
    }

    #[test]
    fn alpha18_is_one_plus_alpha() {
        let f = gf32();
        assert_eq!(power_by_reduction(5, 0x25, 18), 3);
        assert_eq!(f.exp(18), 3);
    }

    #[test]
    fn tables_are_inverse_bijections() {
        for m in 2..=12 {
            let f = FieldCtx::new(m, None).unwrap();
            assert_eq!(f.exp_table()[0], 1);
            let mut seen = vec![false; f.size()];
            for (e, &x) in f.exp_table().iter().enumerate() {
                assert!(!seen[x as usize]);
                seen[x as usize] = true;
                assert_eq!(f.dlog(x), Some(e as u32));
            }
            assert!(!seen[0]);
        }
    }

    #[test]
    fn non_primitive_polynomial_rejected() {
        // x^5+x^4+x^3+x^2+1: check by exhaustive order of x.
        let poly = 0b111101;
        let mut order = 0;
        let mut x: u64 = 1;
        loop {
            x <<= 1;
            if x >> 5 != 0 {
                x ^= poly;
            }
            order += 1;
            if x == 1 || order > 40 {
                break;
            }
        }
        match FieldCtx::new(5, Some(poly)) {
            Err(AtlasError::NonPrimitivePoly { .. }) => assert!(order < 31),
            Ok(_) => assert_eq!(order, 31),
            Err(e) => panic!("unexpected error {e}"),
        }
        // x^4+x^3+x^2+x+1 has order 5 and is certainly not primitive.
        assert!(matches!(
            FieldCtx::new(4, Some(0b11111)),
            Err(AtlasError::NonPrimitivePoly { order: 5, .. })
        ));
        // x^5 + x^4: divisible by x.
        assert!(matches!(
            FieldCtx::new(5, Some(0b110000)),
            Err(AtlasError::NonPrimitivePoly { .. })
        ));
    }

    #[test]
    fn degree_checks() {
        assert!(matches!(FieldCtx::new(1, None), Err(AtlasError::DegreeOutOfRange(1))));
        assert!(matches!(FieldCtx::new(23, None), Err(AtlasError::DegreeOutOfRange(23))));
        assert!(matches!(
            FieldCtx::new(5, Some(0x83)),
            Err(AtlasError::DegreeMismatch { found: 7, .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let f = gf32();
        assert_eq!(f.exp(8), 13);
        assert_eq!(f.exp(9), 26);
        assert_eq!(f.mul(2, 13), 26);
        for x in 0..32 {
            assert_eq!(f.mul(x, 1), x);
            assert_eq!(f.mul(0, x), 0);
        }
    }

    #[test]
    fn inverse_exponents() {
        assert_eq!(gf32().inv_exponent(5).unwrap(), 25);
        let f7 = FieldCtx::new(7, None).unwrap();
        assert_eq!(f7.inv_exponent(7).unwrap(), 109);
        assert!(matches!(
            FieldCtx::new(4, None).unwrap().inv_exponent(3),
            Err(AtlasError::NotCoprime { t: 3, n: 15 })
        ));
    }

    #[test]
    fn pow_examples() {
        let f = gf32();
        assert_eq!(f.pow(f.exp(9), 5), f.exp(14));
        for x in 0..32 {
            assert_eq!(f.pow(x, 1), x);
        }
        assert_eq!(f.pow(0, 0), 0);
        assert_eq!(f.pow(7, 0), 1);
    }

    #[test]
    fn default_table_is_smallest_primitive() {
        for m in MIN_DEGREE..=16 {
            let want = default_poly(m).unwrap();
            let mut p = (1u64 << m) | 1;
            while FieldCtx::new(m, Some(p)).is_err() {
                p += 2;
            }
            assert_eq!(p, want, "m = {m}");
        }
    }

    #[test]
    fn zech_matches_definition() {
        let f = FieldCtx::new(7, None).unwrap();
        assert_eq!(f.zech_table()[0], NO_LOG);
        for e in 1..f.n() {
            let z = f.zech_table()[e as usize];
            assert_eq!(f.exp(z as u64), f.exp(e as u64) ^ 1);
        }
    }

    #[test]
    fn reduce_agrees_with_modulo() {
        for m in [2u32, 3, 5, 13, 22] {
            let f = FieldCtx::new(m, None).unwrap();
            let n = f.n() as u64;
            for x in [0, 1, n - 1, n, n + 1, 2 * n, n * n - 1, (n - 1) * (n - 1), 12345678] {
                assert_eq!(f.reduce(x) as u64, x % n, "m={m} x={x}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn log_of_product(m in 2u32..=12, a in any::<u32>(), b in any::<u32>()) {
                let f = FieldCtx::new(m, None).unwrap();
                let x = a % f.n() + 1;
                let y = b % f.n() + 1;
                let lhs = f.dlog(f.mul(x, y)).unwrap() as u64;
                let rhs = (f.dlog(x).unwrap() as u64 + f.dlog(y).unwrap() as u64) % f.n() as u64;
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn pow_inverse_roundtrip(m in 2u32..=12, a in any::<u32>(), t in 1u64..100_000) {
                let f = FieldCtx::new(m, None).unwrap();
                let x = a & (f.size() as u32 - 1);
                if let Ok(u) = f.inv_exponent(t) {
                    prop_assert_eq!(f.pow(f.pow(x, t), u), x);
                }
            }

            #[test]
            fn frobenius_is_additive(m in 2u32..=12, a in any::<u32>(), b in any::<u32>()) {
                let f = FieldCtx::new(m, None).unwrap();
                let mask = f.size() as u32 - 1;
                let (x, y) = (a & mask, b & mask);
                prop_assert_eq!(f.pow(x ^ y, 2), f.pow(x, 2) ^ f.pow(y, 2));
            }
        }
    }
}
