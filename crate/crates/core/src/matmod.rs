//! 2x2 invertible matrices over `Z/N`, with CRT splitting between a modulus
//! `pq` and its coprime factors.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 1 << 16;

/// An element of `GL2(Z/N)`.
///
/// Entries are stored as least non-negative residues, so structural equality
/// and ordering coincide with equality and lexicographic order of the
/// residues. The determinant is checked to be a unit once, at construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    modulus: u32,
    entries: [u32; 4],
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn reduce(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

fn check_modulus(n: u32) -> Result<()> {
    if (2..=MAX_MODULUS).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadModulus(n))
    }
}

/// Inverse of `a` modulo `n`, if `a` is a unit.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i64 % n as i64, n as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(n as i64) as u64)
}

impl Mat2 {
    /// Builds `[[a, b], [c, d]]` mod `modulus`, reducing the entries.
    pub fn new(a: i64, b: i64, c: i64, d: i64, modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        let entries = [
            reduce(a, modulus),
            reduce(b, modulus),
            reduce(c, modulus),
            reduce(d, modulus),
        ];
        let m = Mat2 { modulus, entries };
        if gcd(m.det() as u64, modulus as u64) != 1 {
            return Err(Error::NotInvertible {
                a,
                b,
                c,
                d,
                modulus,
            });
        }
        Ok(m)
    }

    /// Parses the `[[a,b],[c,d]]` literal shape.
    pub fn from_rows(rows: [[i64; 2]; 2], modulus: u32) -> Result<Self> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1], modulus)
    }

    pub fn identity(modulus: u32) -> Result<Self> {
        Self::new(1, 0, 0, 1, modulus)
    }

    /// Skips the unit-determinant check; callers guarantee it.
    pub(crate) fn from_reduced(entries: [u32; 4], modulus: u32) -> Self {
        debug_assert!(entries.iter().all(|&e| e < modulus));
        Mat2 { modulus, entries }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn rows(&self) -> [[u32; 2]; 2] {
        let [a, b, c, d] = self.entries;
        [[a, b], [c, d]]
    }

    pub fn det(&self) -> u32 {
        let n = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        ((a * d % n + n - b * c % n) % n) as u32
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1 % self.modulus, 0, 0, 1 % self.modulus]
    }

    pub fn mul(&self, other: &Mat2) -> Result<Mat2> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Mat2) -> Mat2 {
        let n = self.modulus as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        let [e, f, g, h] = other.entries.map(u64::from);
        let entries = [
            ((a * e + b * g) % n) as u32,
            ((a * f + b * h) % n) as u32,
            ((c * e + d * g) % n) as u32,
            ((c * f + d * h) % n) as u32,
        ];
        Mat2 {
            modulus: self.modulus,
            entries,
        }
    }

    pub fn inv(&self) -> Mat2 {
        let n = self.modulus;
        let det_inv = inv_mod(self.det() as u64, n as u64).expect("determinant is a unit") as u64;
        let [a, b, c, d] = self.entries.map(u64::from);
        let n64 = n as u64;
        let neg = |x: u64| (n64 - x % n64) % n64;
        let entries = [
            (d * det_inv % n64) as u32,
            (neg(b) * det_inv % n64) as u32,
            (neg(c) * det_inv % n64) as u32,
            (a * det_inv % n64) as u32,
        ];
        Mat2 {
            modulus: n,
            entries,
        }
    }

    pub fn pow(&self, mut k: u64) -> Mat2 {
        let mut acc = Mat2::from_reduced([1 % self.modulus, 0, 0, 1 % self.modulus], self.modulus);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = I`.
    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = *self;
        while !x.is_identity() {
            x = x.mul_unchecked(self);
            k += 1;
        }
        k
    }

    /// Reduces to a divisor of the modulus.
    pub fn reduce_to(&self, m: u32) -> Result<Mat2> {
        if m < 2 || self.modulus % m != 0 {
            return Err(Error::Precondition(format!(
                "{m} does not divide modulus {}",
                self.modulus
            )));
        }
        Ok(Mat2 {
            modulus: m,
            entries: self.entries.map(|e| e % m),
        })
    }

    /// Componentwise reduction `GL2(Z/pq) -> GL2(Z/p) x GL2(Z/q)`.
    pub fn crt_split(&self, p: u32, q: u32) -> Result<(Mat2, Mat2)> {
        check_split(self.modulus, p, q)?;
        Ok((self.reduce_to(p)?, self.reduce_to(q)?))
    }

    /// Inverse of [`Mat2::crt_split`].
    pub fn crt_join(xp: &Mat2, xq: &Mat2) -> Result<Mat2> {
        let (p, q) = (xp.modulus, xq.modulus);
        let n = p
            .checked_mul(q)
            .filter(|&n| n <= MAX_MODULUS)
            .ok_or(Error::BadModulus(u32::MAX))?;
        check_split(n, p, q)?;
        // e_p = 1 mod p, 0 mod q; e_q = 0 mod p, 1 mod q
        let (p64, q64, n64) = (p as u64, q as u64, n as u64);
        let e_p = q64 * inv_mod(q64, p64).expect("coprime") % n64;
        let e_q = p64 * inv_mod(p64, q64).expect("coprime") % n64;
        let mut entries = [0u32; 4];
        for (i, slot) in entries.iter_mut().enumerate() {
            *slot = ((xp.entries[i] as u64 * e_p + xq.entries[i] as u64 * e_q) % n64) as u32;
        }
        Ok(Mat2 {
            modulus: n,
            entries,
        })
    }
}

fn check_split(modulus: u32, p: u32, q: u32) -> Result<()> {
    let ok = p >= 2
        && q >= 2
        && gcd(p as u64, q as u64) == 1
        && (p as u64) * (q as u64) == modulus as u64;
    if ok {
        Ok(())
    } else {
        Err(Error::BadSplit { modulus, p, q })
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self, self.modulus)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Order of `GL2(Z/N)`: `N^4 * prod_{p | N} (1 - 1/p)(1 - 1/p^2)`.
pub fn gl2_order(n: u32) -> u64 {
    let mut order = (n as u64).pow(4);
    for p in prime_factors(n) {
        let p = p as u64;
        order = order / p * (p - 1);
        order = order / (p * p) * (p * p - 1);
    }
    order
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: i64, b: i64, c: i64, d: i64, n: u32) -> Mat2 {
        Mat2::new(a, b, c, d, n).unwrap()
    }

    #[test]
    fn identity_products() {
        let i = Mat2::identity(6).unwrap();
        assert_eq!(i.mul(&i).unwrap(), i);
        assert_eq!(i.inv(), i);
        assert_eq!(Mat2::identity(15).unwrap().order(), 1);
    }

    #[test]
    fn upper_triangular_involutions() {
        // [[1,1],[0,-1]] and [[-1,1],[0,1]] are both involutions, but their
        // product is -1 times a unipotent shear, so it has order 2q.
        for q in [3u32, 5, 7, 11] {
            let s = m(1, 1, 0, -1, q);
            let t = m(-1, 1, 0, 1, q);
            assert!(s.mul(&s).unwrap().is_identity());
            assert!(t.mul(&t).unwrap().is_identity());
            assert_eq!(s.order(), 2);
            assert_eq!(s.mul(&t).unwrap().order(), 2 * q as u64);
        }
    }

    #[test]
    fn s3_pair_product_has_order_three() {
        for q in [3u32, 5, 7, 11, 13] {
            let s = m(1, 1, 0, -1, q);
            let t = m(-1, 0, 1, 1, q);
            assert_eq!(t.order(), 2);
            let st = s.mul(&t).unwrap();
            assert_eq!(st.order(), 3);
            assert!(st.pow(3).is_identity());
        }
    }

    #[test]
    fn inverse_examples() {
        let swap = m(0, 1, 1, 0, 3);
        assert_eq!(swap.inv(), swap);
        assert_eq!(m(1, 1, 0, 1, 5).inv(), m(1, 4, 0, 1, 5));
    }

    #[test]
    fn rejects_singular_and_mismatch() {
        assert!(matches!(
            Mat2::new(2, 0, 0, 1, 6),
            Err(Error::NotInvertible { .. })
        ));
        assert!(Mat2::new(1, 0, 0, 1, 1).is_err());
        let a = Mat2::identity(5).unwrap();
        let b = Mat2::identity(7).unwrap();
        assert_eq!(a.mul(&b), Err(Error::ModulusMismatch(5, 7)));
    }

    #[test]
    fn crt_examples() {
        let i = Mat2::identity(15).unwrap();
        let (a, b) = i.crt_split(3, 5).unwrap();
        assert!(a.is_identity() && b.is_identity());
        let x = m(7, 0, 0, 7, 15);
        let (a, b) = x.crt_split(3, 5).unwrap();
        assert_eq!(a, m(1, 0, 0, 1, 3));
        assert_eq!(b, m(2, 0, 0, 2, 5));
        assert!(x.crt_split(5, 5).is_err());
        assert!(x.crt_split(3, 7).is_err());
    }

    #[test]
    fn crt_round_trip_and_homomorphism_mod_6() {
        let all: Vec<Mat2> = (0..6i64.pow(4))
            .filter_map(|k| Mat2::new(k % 6, k / 6 % 6, k / 36 % 6, k / 216, 6).ok())
            .collect();
        assert_eq!(all.len() as u64, gl2_order(6));
        for x in &all {
            let (a, b) = x.crt_split(2, 3).unwrap();
            assert_eq!(Mat2::crt_join(&a, &b).unwrap(), *x);
        }
        for x in &all {
            for y in all.iter().step_by(7) {
                let xy = x.mul(y).unwrap();
                let (xa, xb) = x.crt_split(2, 3).unwrap();
                let (ya, yb) = y.crt_split(2, 3).unwrap();
                assert_eq!(xy.crt_split(2, 3).unwrap(), (xa.mul(&ya).unwrap(), xb.mul(&yb).unwrap()));
            }
        }
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl2_order(2), 6);
        assert_eq!(gl2_order(3), 48);
        assert_eq!(gl2_order(5), 480);
        assert_eq!(gl2_order(6), 288);
        assert_eq!(gl2_order(7), 2016);
    }
}
