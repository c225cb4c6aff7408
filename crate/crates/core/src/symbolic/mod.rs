//! Sparse multivariate polynomials over the integers.

mod parse;
mod suite;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldPrime, FpElem};

pub use parse::parse;
pub use suite::{
    delta_polynomial, identity_suite, identity_suite_with_golden, quartic, IdentityCheck,
    IdentityReport,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic in {0}")]
    NotMonic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type SymResult<T> = std::result::Result<T, SymbolicError>;

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c.into());
        p
    }

    fn constant_like(&self, c: impl Into<BigInt>) -> Self {
        let mut p = self.empty_like();
        p.add_term(vec![0; self.vars.len()], c.into());
        p
    }

    pub fn var(vars: &[&str], name: &str) -> SymResult<Self> {
        let i = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| SymbolicError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, BigInt::one());
        Ok(p)
    }

    /// Builds a polynomial from (exponents, coefficient) pairs.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len());
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let m = Monomial(e);
        let v = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn coefficient(&self, e: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different rings");
    }

    pub fn index_of(&self, name: &str) -> SymResult<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymbolicError::UnknownVariable(name.to_string()))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.0.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return self.empty_like();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Monomial(e), c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = self.constant_like(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Substitutes `images[i]` for the i-th variable; all images share one ring.
    pub fn compose(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let target = images[0].empty_like();
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|im| vec![target.constant_like(1), im.clone()])
            .collect();
        let mut out = target.clone();
        for (m, c) in &self.terms {
            let mut t = target.constant_like(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Replaces one variable by a polynomial over the same ring.
    pub fn subst(&self, name: &str, image: &MultiPoly) -> SymResult<Self> {
        self.check_vars(image);
        let k = self.index_of(name)?;
        let images: Vec<MultiPoly> = (0..self.vars.len())
            .map(|i| {
                if i == k {
                    image.clone()
                } else {
                    MultiPoly::var(&self.vars(), &self.vars[i]).unwrap()
                }
            })
            .collect();
        Ok(self.compose(&images))
    }

    /// Re-expresses the polynomial over another variable list.
    pub fn with_vars(&self, vars: &[&str]) -> SymResult<Self> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e[j] = x,
                    None => return Err(SymbolicError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        assert_eq!(values.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(values).fold(c.clone(), |acc, (&e, v)| {
                    acc * num_traits::pow(v.clone(), e as usize)
                })
            })
            .sum()
    }

    pub fn eval_named(&self, values: &[(&str, BigInt)]) -> SymResult<BigInt> {
        let mut vals = vec![None; self.vars.len()];
        for (name, v) in values {
            vals[self.index_of(name)?] = Some(v.clone());
        }
        let vals: Vec<BigInt> = vals
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| SymbolicError::UnknownVariable(self.vars[i].clone())))
            .collect::<SymResult<_>>()?;
        Ok(self.eval(&vals))
    }

    pub fn eval_mod(&self, values: &[FpElem], field: &FieldPrime) -> FpElem {
        let k = field;
        let mut acc = k.elem(0);
        for (m, c) in &self.terms {
            let mut t = k.from_bigint(c);
            for (&e, &v) in m.0.iter().zip(values) {
                t = k.mul(t, k.pow(v, e as u64));
            }
            acc = k.add(acc, t);
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient of var^k, as a polynomial over the same ring.
    pub fn coeff_in(&self, var: usize, k: u32) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if m.0[var] == k {
                let mut e = m.0.clone();
                e[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    fn shift(&self, var: usize, k: u32) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] += k;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if m.0[var] > 0 {
                let mut e = m.0.clone();
                e[var] -= 1;
                out.add_term(e, c * BigInt::from(m.0[var]));
            }
        }
        out
    }

    /// Quotient when `divisor` divides `self` exactly over the integers.
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        self.check_vars(divisor);
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = self.empty_like();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let (q, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let e: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let mut t = self.empty_like();
            t.add_term(e, q);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Remainder of division by `g`, which must be monic in `var`.
    pub fn reduce_mod_monic(&self, g: &MultiPoly, var: &str) -> SymResult<MultiPoly> {
        self.check_vars(g);
        let v = self.index_of(var)?;
        let d = g.degree_in(v).ok_or(SymbolicError::ZeroPolynomial)?;
        if g.coeff_in(v, d) != self.constant_like(1) {
            return Err(SymbolicError::NotMonic(var.to_string()));
        }
        let mut r = self.clone();
        while let Some(n) = r.degree_in(v).filter(|&n| n >= d && !r.is_zero()) {
            let lead = r.coeff_in(v, n);
            r = r.sub(&lead.mul(g).shift(v, n - d));
        }
        Ok(r)
    }

    /// lc(g)^(deg f − deg g + 1)·f reduced by `g` in `var`.
    pub fn pseudo_remainder(&self, g: &MultiPoly, var: &str) -> SymResult<MultiPoly> {
        self.check_vars(g);
        let v = self.index_of(var)?;
        let d = g.degree_in(v).ok_or(SymbolicError::ZeroPolynomial)?;
        let lc = g.coeff_in(v, d);
        let Some(n0) = self.degree_in(v) else {
            return Ok(self.clone());
        };
        if n0 < d {
            return Ok(self.clone());
        }
        let mut steps = n0 - d + 1;
        let mut r = self.clone();
        while let Some(n) = r.degree_in(v).filter(|&n| n >= d && !r.is_zero()) {
            let lead = r.coeff_in(v, n);
            r = lc.mul(&r).sub(&lead.mul(g).shift(v, n - d));
            steps -= 1;
        }
        Ok(r.mul(&lc.pow(steps)))
    }

    /// Sylvester resultant in `var`, by fraction-free elimination.
    pub fn resultant(&self, other: &MultiPoly, var: &str) -> SymResult<MultiPoly> {
        self.check_vars(other);
        let v = self.index_of(var)?;
        let n = self.degree_in(v).ok_or(SymbolicError::ZeroPolynomial)? as usize;
        let m = other.degree_in(v).ok_or(SymbolicError::ZeroPolynomial)? as usize;
        let size = n + m;
        let zero = self.empty_like();
        let mut rows = vec![vec![zero.clone(); size]; size];
        for i in 0..m {
            for k in 0..=n {
                rows[i][i + k] = self.coeff_in(v, (n - k) as u32);
            }
        }
        for i in 0..n {
            for k in 0..=m {
                rows[m + i][i + k] = other.coeff_in(v, (m - k) as u32);
            }
        }
        Ok(bareiss_det(rows, &zero))
    }

    /// (−1)^(n(n−1)/2)·res(f, f′)/lc(f).
    pub fn discriminant(&self, var: &str) -> SymResult<MultiPoly> {
        let v = self.index_of(var)?;
        let n = self.degree_in(v).ok_or(SymbolicError::ZeroPolynomial)?;
        if n == 0 {
            return Err(SymbolicError::ZeroPolynomial);
        }
        let res = self.resultant(&self.derivative(v), var)?;
        let lc = self.coeff_in(v, n);
        let q = res
            .divide_exact(&lc)
            .expect("leading coefficient divides the resultant");
        Ok(if (n * (n - 1) / 2) % 2 == 1 {
            q.neg()
        } else {
            q
        })
    }
}

fn bareiss_det(mut m: Vec<Vec<MultiPoly>>, zero: &MultiPoly) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return zero.constant_like(1);
    }
    let mut sign = false;
    let mut prev = zero.constant_like(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return zero.clone(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .divide_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, v)| {
                    if x == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{x}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
