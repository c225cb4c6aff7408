//! Arithmetic in F_p and F_{p^2}, Legendre symbols, square roots and orders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime accepted; keeps p + 1 and all products inside u64.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FpElem(u32);

impl FpElem {
    pub const ZERO: FpElem = FpElem(0);
    pub const ONE: FpElem = FpElem(1);

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FpElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `a + b·√ω` with ω the least quadratic nonresidue of the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp2Elem {
    pub a: FpElem,
    pub b: FpElem,
}

impl Fp2Elem {
    pub fn from_base(a: FpElem) -> Self {
        Fp2Elem { a, b: FpElem::ZERO }
    }

    pub fn is_base(self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Factors {
    primes: [u64; 12],
    len: usize,
}

impl Factors {
    fn of(mut n: u64) -> Self {
        let mut primes = [0u64; 12];
        let mut len = 0;
        let mut d = 2u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                primes[len] = d;
                len += 1;
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes[len] = n;
            len += 1;
        }
        Factors { primes, len }
    }

    fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes[..self.len].iter().copied()
    }
}

/// An odd prime p >= 5 together with the data fixed per prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldPrime {
    p: u32,
    omega: u32,
    half: u32,
    minus_factors: Factors,
    plus_factors: Factors,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::PrimeTooSmall(p));
        }
        let mut f = FieldPrime {
            p: p as u32,
            omega: 0,
            half: p.div_ceil(2) as u32,
            minus_factors: Factors::of(p - 1),
            plus_factors: Factors::of(p + 1),
        };
        f.omega = (2..p as u32)
            .find(|&w| f.legendre(FpElem(w)) == -1)
            .expect("every odd prime has a nonresidue");
        Ok(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn omega(&self) -> FpElem {
        FpElem(self.omega)
    }

    pub fn elem(&self, v: i64) -> FpElem {
        FpElem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_u64(&self, v: u64) -> FpElem {
        FpElem((v % self.p as u64) as u32)
    }

    pub fn from_bigint(&self, v: &BigInt) -> FpElem {
        let r = v.mod_floor(&BigInt::from(self.p));
        FpElem(r.to_u32().expect("residue fits in u32"))
    }

    /// Residue as a signed representative in (-p/2, p/2].
    pub fn signed(&self, a: FpElem) -> i64 {
        let v = a.0 as i64;
        if v > self.p as i64 / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    pub fn add(&self, a: FpElem, b: FpElem) -> FpElem {
        let s = a.0 as u64 + b.0 as u64;
        FpElem((s % self.p as u64) as u32)
    }

    pub fn sub(&self, a: FpElem, b: FpElem) -> FpElem {
        let s = a.0 as u64 + self.p as u64 - b.0 as u64;
        FpElem((s % self.p as u64) as u32)
    }

    pub fn neg(&self, a: FpElem) -> FpElem {
        if a.0 == 0 {
            a
        } else {
            FpElem(self.p - a.0)
        }
    }

    pub fn mul(&self, a: FpElem, b: FpElem) -> FpElem {
        FpElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn square(&self, a: FpElem) -> FpElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FpElem, mut e: u64) -> FpElem {
        let mut base = a;
        let mut acc = FpElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: FpElem) -> FpElem {
        assert!(!a.is_zero(), "inverse of zero");
        self.pow(a, self.p as u64 - 2)
    }

    pub fn div(&self, a: FpElem, b: FpElem) -> FpElem {
        self.mul(a, self.inv(b))
    }

    pub fn half(&self, a: FpElem) -> FpElem {
        self.mul(a, FpElem(self.half))
    }

    /// Legendre symbol by Euler's criterion.
    pub fn legendre(&self, a: FpElem) -> i8 {
        if a.is_zero() {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == FpElem::ONE {
            1
        } else {
            -1
        }
    }

    /// Legendre symbol by quadratic reciprocity (Jacobi symbol algorithm).
    pub fn legendre_reciprocity(&self, a: FpElem) -> i8 {
        let mut a = a.0 as u64;
        let mut n = self.p as u64;
        if a == 0 {
            return 0;
        }
        let mut t = 1i8;
        while a != 0 {
            while a.is_multiple_of(2) {
                a /= 2;
                if n % 8 == 3 || n % 8 == 5 {
                    t = -t;
                }
            }
            std::mem::swap(&mut a, &mut n);
            if a % 4 == 3 && n % 4 == 3 {
                t = -t;
            }
            a %= n;
        }
        if n == 1 {
            t
        } else {
            0
        }
    }

    /// Square root in [0, (p-1)/2], or `None` for a nonresidue (Tonelli-Shanks).
    pub fn sqrt(&self, a: FpElem) -> Option<FpElem> {
        if a.is_zero() {
            return Some(a);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p as u64;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut m = s;
        let mut c = self.pow(self.omega(), q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != FpElem::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != FpElem::ONE {
                t2 = self.square(t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(if r.0 > self.p / 2 { self.neg(r) } else { r })
    }

    /// Roots of w² − s·w + q in ascending order (one entry for a double root).
    pub fn roots_sum_product(&self, s: FpElem, q: FpElem) -> Vec<FpElem> {
        let disc = self.sub(self.square(s), self.mul(self.elem(4), q));
        match self.sqrt(disc) {
            None => Vec::new(),
            Some(r) if r.is_zero() => vec![self.half(s)],
            Some(r) => {
                let a = self.half(self.add(s, r));
                let b = self.half(self.sub(s, r));
                if a < b {
                    vec![a, b]
                } else {
                    vec![b, a]
                }
            }
        }
    }

    /// Multiplicative order of a nonzero element of F_p.
    pub fn order(&self, u: FpElem) -> Result<u64> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        let mut n = self.p as u64 - 1;
        for q in self.minus_factors.iter() {
            while n.is_multiple_of(q) && self.pow(u, n / q) == FpElem::ONE {
                n /= q;
            }
        }
        Ok(n)
    }

    // F_{p^2} arithmetic.

    pub fn add2(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.add(x.a, y.a),
            b: self.add(x.b, y.b),
        }
    }

    pub fn sub2(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.sub(x.a, y.a),
            b: self.sub(x.b, y.b),
        }
    }

    pub fn mul2(&self, x: Fp2Elem, y: Fp2Elem) -> Fp2Elem {
        let w = self.omega();
        Fp2Elem {
            a: self.add(self.mul(x.a, y.a), self.mul(w, self.mul(x.b, y.b))),
            b: self.add(self.mul(x.a, y.b), self.mul(x.b, y.a)),
        }
    }

    pub fn scale2(&self, c: FpElem, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: self.mul(c, x.a),
            b: self.mul(c, x.b),
        }
    }

    pub fn conj(&self, x: Fp2Elem) -> Fp2Elem {
        Fp2Elem {
            a: x.a,
            b: self.neg(x.b),
        }
    }

    pub fn norm(&self, x: Fp2Elem) -> FpElem {
        self.sub(self.square(x.a), self.mul(self.omega(), self.square(x.b)))
    }

    pub fn trace(&self, x: Fp2Elem) -> FpElem {
        self.add(x.a, x.a)
    }

    pub fn inv2(&self, x: Fp2Elem) -> Fp2Elem {
        let n = self.norm(x);
        assert!(!n.is_zero(), "inverse of zero");
        self.scale2(self.inv(n), self.conj(x))
    }

    pub fn pow2(&self, x: Fp2Elem, mut e: u64) -> Fp2Elem {
        let mut base = x;
        let mut acc = Fp2Elem::from_base(FpElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul2(acc, base);
            }
            base = self.mul2(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of a norm-one element of F_{p^2}; it divides p + 1.
    pub fn order2(&self, u: Fp2Elem) -> Result<u64> {
        if u.is_zero() {
            return Err(Error::ZeroElement);
        }
        debug_assert_eq!(self.norm(u), FpElem::ONE);
        let one = Fp2Elem::from_base(FpElem::ONE);
        let mut n = self.p as u64 + 1;
        for q in self.plus_factors.iter() {
            while n.is_multiple_of(q) && self.pow2(u, n / q) == one {
                n /= q;
            }
        }
        Ok(n)
    }

    /// Root χ of λ² − xλ + 1 and its order.
    pub fn char_root(&self, x: FpElem) -> RootInfo {
        let two = self.elem(2);
        if x == two || x == self.neg(two) {
            let sign = if x == two { 1 } else { -1 };
            return RootInfo {
                kind: RootKind::Parabolic(sign),
                order: self.p as u64,
            };
        }
        let disc = self.sub(self.square(x), self.elem(4));
        match self.sqrt(disc) {
            Some(r) => {
                let chi = self.half(self.add(x, r));
                RootInfo {
                    kind: RootKind::Hyperbolic(chi),
                    order: self.order(chi).expect("root is nonzero"),
                }
            }
            None => {
                // disc / ω is a square, so √disc = s·√ω.
                let s = self
                    .sqrt(self.div(disc, self.omega()))
                    .expect("quotient of nonresidues is a residue");
                let chi = Fp2Elem {
                    a: self.half(x),
                    b: self.half(s),
                };
                RootInfo {
                    kind: RootKind::Elliptic(chi),
                    order: self.order2(chi).expect("root is nonzero"),
                }
            }
        }
    }

    /// Order of a coordinate: the order of its characteristic root, p at ±2.
    pub fn coordinate_order(&self, x: FpElem) -> u64 {
        self.char_root(x).order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    Hyperbolic(FpElem),
    Elliptic(Fp2Elem),
    Parabolic(i8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInfo {
    pub kind: RootKind,
    pub order: u64,
}

impl RootInfo {
    /// Whether the root has the largest order its kind allows (p−1 or p+1).
    pub fn is_maximal(&self, field: &FieldPrime) -> bool {
        let p = field.p() as u64;
        match self.kind {
            RootKind::Hyperbolic(_) => self.order == p - 1,
            RootKind::Elliptic(_) => self.order == p + 1,
            RootKind::Parabolic(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(FieldPrime::new(3), Err(Error::PrimeTooSmall(3)));
        assert_eq!(FieldPrime::new(2), Err(Error::PrimeTooSmall(2)));
        assert_eq!(FieldPrime::new(9), Err(Error::NotPrime(9)));
        assert_eq!(FieldPrime::new(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(f(7).legendre(FpElem(2)), 1);
        assert_eq!(f(13).legendre(FpElem(0)), 0);
        assert_eq!(f(7).legendre(FpElem(3)), -1);
    }

    #[test]
    fn legendre_methods_agree() {
        for p in [5u64, 7, 11, 13, 101, 211, 1009] {
            let k = f(p);
            for a in 0..p as u32 {
                assert_eq!(k.legendre(FpElem(a)), k.legendre_reciprocity(FpElem(a)));
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(f(7).sqrt(FpElem(4)), Some(FpElem(2)));
        assert_eq!(f(11).sqrt(FpElem(0)), Some(FpElem(0)));
        assert_eq!(f(7).sqrt(FpElem(3)), None);
    }

    #[test]
    fn sqrt_exhaustive() {
        // 17 and 97 exercise the Tonelli-Shanks loop (p ≡ 1 mod 8).
        for p in [5u64, 13, 17, 41, 97, 193] {
            let k = f(p);
            for a in 0..p as u32 {
                let a = FpElem(a);
                match k.sqrt(a) {
                    Some(r) => {
                        assert_eq!(k.square(r), a);
                        assert!(r.0 <= k.p() / 2);
                    }
                    None => assert_eq!(k.legendre(a), -1),
                }
            }
        }
    }

    #[test]
    fn char_root_examples() {
        let k = f(5);
        let r = k.char_root(FpElem(0));
        match r.kind {
            RootKind::Hyperbolic(chi) => assert!(chi == FpElem(2) || chi == FpElem(3)),
            _ => panic!("expected hyperbolic"),
        }
        assert_eq!(r.order, 4);
        let k = f(101);
        assert_eq!(
            k.char_root(FpElem(2)),
            RootInfo {
                kind: RootKind::Parabolic(1),
                order: 101
            }
        );
        assert_eq!(k.char_root(FpElem(99)).kind, RootKind::Parabolic(-1));
    }

    #[test]
    fn char_root_x1_p7_against_scan() {
        let k = f(7);
        let r = k.char_root(FpElem(1));
        let RootKind::Hyperbolic(chi) = r.kind else {
            panic!("expected hyperbolic")
        };
        let roots: Vec<u32> = (1..7).filter(|&l| (l * l + 7 - l + 1) % 7 == 0).collect();
        assert!(roots.contains(&chi.0));
        let mut n = 1;
        let mut acc = chi.0;
        while acc != 1 {
            acc = acc * chi.0 % 7;
            n += 1;
        }
        assert_eq!(r.order, n);
        assert_eq!(6 % r.order, 0);
    }

    #[test]
    fn order_examples() {
        let k = f(11);
        assert_eq!(k.order(FpElem(1)), Ok(1));
        assert_eq!(k.order(FpElem(10)), Ok(2));
        assert_eq!(k.order(FpElem(2)), Ok(10));
        assert_eq!(k.order(FpElem(0)), Err(Error::ZeroElement));
    }

    #[test]
    fn order_matches_repeated_multiplication() {
        for p in [5u64, 7, 11, 13, 31, 61] {
            let k = f(p);
            for u in 1..p as u32 {
                let mut n = 1;
                let mut acc = FpElem(u);
                while acc != FpElem::ONE {
                    acc = k.mul(acc, FpElem(u));
                    n += 1;
                }
                assert_eq!(k.order(FpElem(u)), Ok(n));
            }
        }
    }

    #[test]
    fn root_kind_counts() {
        for p in (5..=200u64).filter(|&p| is_prime(p)) {
            let k = f(p);
            let mut hyp = 0;
            let mut ell = 0;
            for x in 0..p as u32 {
                let info = k.char_root(FpElem(x));
                let one = Fp2Elem::from_base(FpElem::ONE);
                match info.kind {
                    RootKind::Hyperbolic(chi) => {
                        hyp += 1;
                        assert_eq!(k.add(chi, k.inv(chi)), FpElem(x));
                        assert_eq!((p - 1) % info.order, 0);
                        assert_eq!(k.pow(chi, info.order), FpElem::ONE);
                    }
                    RootKind::Elliptic(chi) => {
                        ell += 1;
                        assert!(!chi.is_base());
                        assert_eq!(k.norm(chi), FpElem::ONE);
                        let s = k.add2(chi, k.inv2(chi));
                        assert_eq!(s, Fp2Elem::from_base(FpElem(x)));
                        assert_eq!((p + 1) % info.order, 0);
                        assert_eq!(k.pow2(chi, info.order), one);
                        for d in 1..info.order {
                            if info.order.is_multiple_of(d) {
                                assert_ne!(k.pow2(chi, d), one);
                            }
                        }
                    }
                    RootKind::Parabolic(_) => assert_eq!(info.order, p),
                }
            }
            assert_eq!(hyp, (p - 3) / 2);
            assert_eq!(ell, (p - 1) / 2);
        }
    }

    #[test]
    fn omega_is_least_nonresidue() {
        assert_eq!(f(7).omega(), FpElem(3));
        assert_eq!(f(5).omega(), FpElem(2));
        assert_eq!(f(17).omega(), FpElem(3));
    }
}
