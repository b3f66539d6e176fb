//! Exact arithmetic in `Q(zeta_8, zeta_{p^k})`.
//!
//! Elements are sparse combinations of `zeta_8^i zeta_{p^K}^j` with rational
//! coefficients over the basis `0 <= i < 4`, `j` with top base-`p` digit
//! below `p - 1`. The level `K` grows as needed; lifting to a higher level
//! keeps the representation canonical, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::padic::{legendre, pow_p, CharacterValue};

#[derive(Clone)]
pub struct Cyclo {
    p: u32,
    level: u32,
    terms: BTreeMap<(u8, u64), BigRational>,
}

/// One term `rational * zeta_{p^level}^zeta_pk * zeta_8^mu8` of a serialized value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloTerm {
    pub rational: String,
    pub zeta_pk: u64,
    pub mu8: u8,
}

/// Serialized form: the terms, the level and a complex rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycloJson {
    pub level: u32,
    pub terms: Vec<CycloTerm>,
    pub complex: [f64; 2],
}

impl Cyclo {
    pub fn zero(p: u32) -> Self {
        Cyclo { p, level: 0, terms: BTreeMap::new() }
    }

    pub fn one(p: u32) -> Self {
        Self::rational(p, BigRational::one())
    }

    pub fn rational(p: u32, q: BigRational) -> Self {
        let mut c = Self::zero(p);
        c.add_monomial(0, 0, q);
        c
    }

    pub fn int(p: u32, k: i64) -> Self {
        Self::rational(p, BigRational::from_integer(BigInt::from(k)))
    }

    pub fn ratio(p: u32, a: i64, b: i64) -> Self {
        Self::rational(p, BigRational::new(BigInt::from(a), BigInt::from(b)))
    }

    /// `p^e` for any integer `e`.
    pub fn p_pow(p: u32, e: i64) -> Self {
        let base = BigInt::from(p);
        let q = if e >= 0 { BigRational::from_integer(base.pow(e as u32)) } else { BigRational::new(BigInt::one(), base.pow((-e) as u32)) };
        Self::rational(p, q)
    }

    /// `zeta_8^i`.
    pub fn mu8(p: u32, i: u8) -> Self {
        let mut c = Self::zero(p);
        c.add_monomial(i % 8, 0, BigRational::one());
        c
    }

    /// `zeta_{p^k}^j`.
    pub fn zeta(p: u32, j: u64, k: u32) -> Self {
        let mut c = Self { p, level: k, terms: BTreeMap::new() };
        c.add_monomial(0, j % pow_p(p, k), BigRational::one());
        c
    }

    pub fn from_character(v: &CharacterValue) -> Self {
        Self::zeta(v.p(), v.num(), v.level())
    }

    /// `sqrt(p)` through the quadratic Gauss sum.
    pub fn sqrt_p(p: u32) -> Self {
        let mut g = Self { p, level: 1, terms: BTreeMap::new() };
        for a in 1..p as u64 {
            let s = legendre(a as i64, p) as i64;
            g.add_monomial(0, a, BigRational::from_integer(BigInt::from(s)));
        }
        if p % 4 == 1 {
            g
        } else {
            g * Self::mu8(p, 6)
        }
    }

    /// `p^{e/2}`.
    pub fn p_half_pow(p: u32, e: i64) -> Self {
        let whole = Self::p_pow(p, e.div_euclid(2));
        if e.rem_euclid(2) == 1 {
            whole * Self::sqrt_p(p)
        } else {
            whole
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_monomial(&mut self, i: u8, j: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let (i, c) = if i % 8 >= 4 { (i % 8 - 4, -c) } else { (i % 8, c) };
        if self.level == 0 {
            self.bump((i, 0), c);
            return;
        }
        let block = pow_p(self.p, self.level - 1);
        let top = j / block;
        if top == self.p as u64 - 1 {
            let low = j % block;
            for b in 0..self.p as u64 - 1 {
                self.bump((i, low + b * block), -c.clone());
            }
        } else {
            self.bump((i, j), c);
        }
    }

    fn bump(&mut self, key: (u8, u64), c: BigRational) {
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn lifted(&self, level: u32) -> Self {
        if level == self.level {
            return self.clone();
        }
        assert!(level > self.level);
        let f = pow_p(self.p, level - self.level);
        let terms = self.terms.iter().map(|(&(i, j), c)| ((i, j * f), c.clone())).collect();
        Cyclo { p: self.p, level, terms }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let p = if a.level == 0 && a.terms.keys().all(|k| k.1 == 0) { b.p } else { a.p };
        let mut a = a.clone();
        let mut b = b.clone();
        if a.level == 0 {
            a.p = p;
        }
        if b.level == 0 {
            b.p = p;
        }
        assert_eq!(a.p, b.p, "mixing primes");
        let level = a.level.max(b.level);
        (a.lifted(level), b.lifted(level))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.p);
        }
        let terms = self.terms.iter().map(|(k, c)| (*k, c * q)).collect();
        Cyclo { p: self.p, level: self.level, terms }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        let mut out = Cyclo { p: self.p, level: self.level, terms: BTreeMap::new() };
        let m = pow_p(self.p, self.level);
        for (&(i, j), c) in &self.terms {
            out.add_monomial((8 - i) % 8, (m - j) % m, c.clone());
        }
        out
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let m = pow_p(self.p, self.level) as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (&(i, j), c) in &self.terms {
            let t = i as f64 / 8.0 + j as f64 / m;
            let a = 2.0 * std::f64::consts::PI * t;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn to_json(&self) -> CycloJson {
        let (re, im) = self.to_complex();
        CycloJson {
            level: self.level,
            terms: self.terms.iter().map(|(&(i, j), c)| CycloTerm { rational: c.to_string(), zeta_pk: j, mu8: i }).collect(),
            complex: [re, im],
        }
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (a, b) = Self::common(self, other);
        a.terms == b.terms
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(i, j), c)| format!("({c})z8^{i}z{}^{j}", self.level)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (mut a, b) = Cyclo::common(self, rhs);
        for (k, c) in b.terms {
            a.bump(k, c);
        }
        a
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Self {
        let terms = self.terms.into_iter().map(|(k, c)| (k, -c)).collect();
        Cyclo { p: self.p, level: self.level, terms }
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.is_zero() || rhs.is_zero() {
            let p = if self.level > 0 { self.p } else { rhs.p };
            return Cyclo::zero(p);
        }
        let (a, b) = Cyclo::common(self, rhs);
        let m = pow_p(a.p, a.level);
        let mut out = Cyclo { p: a.p, level: a.level, terms: BTreeMap::new() };
        for (&(i1, j1), c1) in &a.terms {
            for (&(i2, j2), c2) in &b.terms {
                out.add_monomial(i1 + i2, (j1 + j2) % m.max(1), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_roots_vanishes() {
        for p in [3u32, 5, 7] {
            for k in 1..3 {
                let mut s = Cyclo::zero(p);
                for j in 0..pow_p(p, k) {
                    s = s + Cyclo::zeta(p, j, k);
                }
                assert!(s.is_zero(), "p={p} k={k}: {s:?}");
            }
        }
    }

    #[test]
    fn sqrt_p_squares_to_p() {
        for p in [3u32, 5, 7, 11, 13] {
            let r = Cyclo::sqrt_p(p);
            assert_eq!(r.clone() * r, Cyclo::int(p, p as i64));
        }
    }

    #[test]
    fn lifting_preserves_equality() {
        let p = 5;
        let a = Cyclo::zeta(p, 2, 1);
        let b = Cyclo::zeta(p, 50, 3);
        assert_eq!(a, b);
        let c = Cyclo::zeta(p, 4, 1) * Cyclo::zeta(p, 1, 1);
        assert_eq!(c, Cyclo::one(p));
    }

    #[test]
    fn mu8_relations() {
        let p = 3;
        assert_eq!(Cyclo::mu8(p, 4), Cyclo::int(p, -1));
        let i = Cyclo::mu8(p, 2);
        assert_eq!(i.clone() * i, Cyclo::int(p, -1));
        let z = Cyclo::mu8(p, 3) * Cyclo::zeta(p, 5, 2);
        let (re, im) = (z.clone() * z.conj()).to_complex();
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
    }
}
