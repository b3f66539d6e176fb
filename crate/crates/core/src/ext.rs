//! The quadratic extension `E = F(delta)`, `delta^2 = Delta`, and its norm character.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::padic::{hilbert_symbol, least_nonresidue, pow_p, DeltaClass, FieldConfig, PadicNumber};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadExtension {
    p: u32,
    prec: u32,
    class: DeltaClass,
}

impl FieldConfig {
    pub fn ext(&self) -> QuadExtension {
        QuadExtension { p: self.p(), prec: self.precision(), class: self.delta_class() }
    }
}

impl QuadExtension {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn class(&self) -> DeltaClass {
        self.class
    }

    pub fn is_ramified(&self) -> bool {
        self.class.is_ramified()
    }

    /// Ramification index `e(E/F)`.
    pub fn e(&self) -> i64 {
        if self.is_ramified() {
            2
        } else {
            1
        }
    }

    /// `v_E(delta)` with `v_E` normalized on `E`.
    pub fn v_delta(&self) -> i64 {
        if self.is_ramified() {
            1
        } else {
            0
        }
    }

    /// Residue field size of `E`.
    pub fn q_e(&self) -> u64 {
        if self.is_ramified() {
            self.p as u64
        } else {
            (self.p as u64).pow(2)
        }
    }

    pub fn delta_sq(&self) -> PadicNumber {
        let u0 = least_nonresidue(self.p) as i64;
        let d = match self.class {
            DeltaClass::U0 => u0,
            DeltaClass::P => self.p as i64,
            DeltaClass::U0p => u0 * self.p as i64,
        };
        PadicNumber::from_i64(self.p, self.prec, d)
    }

    pub fn elem(&self, a: PadicNumber, b: PadicNumber) -> ExtElement {
        ExtElement { a, b, ext: *self }
    }

    pub fn from_f(&self, a: PadicNumber) -> ExtElement {
        self.elem(a, PadicNumber::zero(self.p))
    }

    pub fn int(&self, a: i64, b: i64) -> ExtElement {
        self.elem(PadicNumber::from_i64(self.p, self.prec, a), PadicNumber::from_i64(self.p, self.prec, b))
    }

    pub fn delta(&self) -> ExtElement {
        self.int(0, 1)
    }

    /// A uniformizer of `E`: `p` if unramified, `delta` otherwise.
    pub fn uniformizer(&self) -> ExtElement {
        if self.is_ramified() {
            self.delta()
        } else {
            self.int(self.p as i64, 0)
        }
    }

    /// `uniformizer^k`.
    pub fn uniformizer_pow(&self, k: i64) -> Result<ExtElement> {
        let w = self.uniformizer();
        let base = if k < 0 { w.inv()? } else { w };
        let mut acc = self.int(1, 0);
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    /// `eta(a) = (a, Delta)`, the character of `F^x / N(E^x)`.
    pub fn eta(&self, a: &PadicNumber) -> Result<i8> {
        hilbert_symbol(a, &self.delta_sq())
    }

    /// Decides `a in N(E^x)` by searching for `b` with `N(b) = a` modulo
    /// `p^{v+2}`, after removing the even part of `v(a)` with `N(p^j) = p^{2j}`.
    pub fn is_norm_by_search(&self, a: &PadicNumber) -> Result<bool> {
        let v = a.val()?;
        let j = v.div_euclid(2);
        let a1 = a.shift(-2 * j);
        let v1 = a1.val()?;
        let depth = (v1 + 2) as u32;
        let target = a1.mod_pk(depth)?;
        let m = pow_p(self.p, depth);
        let delta = self.delta_sq().mod_pk(depth)?;
        let range = pow_p(self.p, depth);
        for x in 0..range {
            for y in 0..range {
                let n = ((x as u128 * x as u128) % m as u128 + m as u128 - (delta as u128 * ((y as u128 * y as u128) % m as u128)) % m as u128)
                    % m as u128;
                if n as u64 == target {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

/// `a + b delta` in `E`.
#[derive(Clone, Copy)]
pub struct ExtElement {
    pub a: PadicNumber,
    pub b: PadicNumber,
    ext: QuadExtension,
}

impl ExtElement {
    pub fn ext(&self) -> QuadExtension {
        self.ext
    }

    pub fn zero_like(&self) -> Self {
        self.ext.from_f(PadicNumber::zero(self.ext.p))
    }

    pub fn one_like(&self) -> Self {
        self.ext.from_f(self.a.one_like())
    }

    pub fn conj(&self) -> Self {
        ExtElement { a: self.a, b: -self.b, ext: self.ext }
    }

    pub fn norm(&self) -> PadicNumber {
        self.a * self.a - self.ext.delta_sq() * self.b * self.b
    }

    pub fn trace(&self) -> PadicNumber {
        self.a + self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `v_E`, or a lower bound for a zero.
    pub fn val_e(&self) -> i64 {
        let e = self.ext.e();
        (e * self.a.ord()).min(e * self.b.ord() + self.ext.v_delta())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precision("inverse of a zero at precision".into()));
        }
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(ExtElement { a: c.a * n, b: c.b * n, ext: self.ext })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inv()?)
    }

    pub fn scale(&self, t: &PadicNumber) -> Self {
        ExtElement { a: self.a * *t, b: self.b * *t, ext: self.ext }
    }

    /// Canonical representative modulo `uniformizer^k O_E`.
    pub fn truncate(&self, k: i64) -> Self {
        if self.ext.is_ramified() {
            // a + b delta lies in delta^k O_E iff v(a) >= ceil(k/2), v(b) >= floor(k/2)
            let ka = (k + 1).div_euclid(2);
            let kb = k.div_euclid(2);
            ExtElement { a: self.a.truncate(ka), b: self.b.truncate(kb), ext: self.ext }
        } else {
            ExtElement { a: self.a.truncate(k), b: self.b.truncate(k), ext: self.ext }
        }
    }

    /// Whether the element lies in `uniformizer^k O_E`.
    pub fn in_ideal(&self, k: i64) -> bool {
        self.val_e() >= k
    }

    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.ext == other.ext && self.eq_at_precision(other)
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {} d)", self.a, self.b)
    }
}

impl Add for ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: Self) -> Self {
        ExtElement { a: self.a + rhs.a, b: self.b + rhs.b, ext: self.ext }
    }
}

impl Sub for ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: Self) -> Self {
        ExtElement { a: self.a - rhs.a, b: self.b - rhs.b, ext: self.ext }
    }
}

impl Neg for ExtElement {
    type Output = ExtElement;
    fn neg(self) -> Self {
        ExtElement { a: -self.a, b: -self.b, ext: self.ext }
    }
}

impl Mul for ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: Self) -> Self {
        let d = self.ext.delta_sq();
        ExtElement { a: self.a * rhs.a + d * self.b * rhs.b, b: self.a * rhs.b + self.b * rhs.a, ext: self.ext }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_are_norms() {
        for class in DeltaClass::ALL {
            let cfg = FieldConfig::new(5, 10, class).unwrap();
            let e = cfg.ext();
            for (a, b) in [(1, 2), (3, 5), (10, 1), (7, 0)] {
                let x = e.int(a, b);
                assert_eq!(e.eta(&x.norm()).unwrap(), 1);
                assert!(e.is_norm_by_search(&x.norm()).unwrap());
            }
        }
    }

    #[test]
    fn valuations() {
        let cfg = FieldConfig::new(3, 10, DeltaClass::P).unwrap();
        let e = cfg.ext();
        assert_eq!(e.delta().val_e(), 1);
        assert_eq!(e.int(3, 0).val_e(), 2);
        assert_eq!(e.int(9, 3).val_e(), 3);
        let x = e.int(4, 7);
        assert_eq!((x * x.inv().unwrap()), e.int(1, 0));
    }
}
