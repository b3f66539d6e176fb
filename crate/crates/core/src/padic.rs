//! Fixed-precision arithmetic in `Q_p` for odd `p`.
//!
//! A nonzero value is `p^v * u` with `u` a unit known modulo `p^prec`.
//! Precision is tracked per value: sums with cancellation lose digits, and a
//! result with no significant digit left becomes a zero known only modulo
//! some power of `p`. Inverting such a zero fails.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute precision attached to an exact zero.
const EXACT: i64 = i64::MAX / 8;

/// Largest `k` with `p^k < 2^62`, the storage limit for mantissas.
pub fn max_digits(p: u32) -> u32 {
    let mut k = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        k += 1;
    }
    k
}

pub(crate) fn pow_p(p: u32, k: u32) -> u64 {
    (p as u64).pow(k)
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inv_mod called on a non-unit");
    t0.rem_euclid(m as i128) as u64
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol of an integer prime to `p`.
pub fn legendre(a: i64, p: u32) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    assert!(a != 0, "legendre symbol of a multiple of p");
    let mut acc = 1u64;
    let mut base = a;
    let mut e = (p as u64 - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

pub fn least_nonresidue(p: u32) -> u32 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a nonresidue")
}

/// Representative of a square class of `F^x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaClass {
    U0,
    P,
    U0p,
}

impl DeltaClass {
    pub const ALL: [DeltaClass; 3] = [DeltaClass::U0, DeltaClass::P, DeltaClass::U0p];

    pub fn is_ramified(self) -> bool {
        !matches!(self, DeltaClass::U0)
    }
}

impl FromStr for DeltaClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u0" => Ok(DeltaClass::U0),
            "p" => Ok(DeltaClass::P),
            "u0p" => Ok(DeltaClass::U0p),
            _ => Err(Error::Invalid(format!("unknown delta class {s:?}"))),
        }
    }
}

/// The base field `F = Q_p`, the working precision, the extension `E` and
/// the quaternion parameter `gamma`.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    p: u32,
    precision: u32,
    delta_class: DeltaClass,
    gamma: PadicNumber,
}

impl FieldConfig {
    pub fn new(p: u32, precision: u32, delta_class: DeltaClass) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Invalid(format!("p = {p} is not an odd prime")));
        }
        if precision < 4 {
            return Err(Error::Invalid("precision must be at least 4".into()));
        }
        if precision > max_digits(p) {
            return Err(Error::Invalid(format!("precision {precision} exceeds the storage limit {} for p = {p}", max_digits(p))));
        }
        Ok(FieldConfig { p, precision, delta_class, gamma: PadicNumber::from_i64(p, precision, 1) })
    }

    pub fn with_gamma(mut self, gamma: PadicNumber) -> Result<Self> {
        if gamma.p() != self.p || gamma.is_zero() {
            return Err(Error::Invalid("gamma must be a nonzero element of F".into()));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn delta_class(&self) -> DeltaClass {
        self.delta_class
    }

    pub fn gamma(&self) -> PadicNumber {
        self.gamma
    }

    pub fn u0(&self) -> u32 {
        least_nonresidue(self.p)
    }

    pub fn int(&self, k: i64) -> PadicNumber {
        PadicNumber::from_i64(self.p, self.precision, k)
    }

    pub fn ratio(&self, num: i64, den: i64) -> PadicNumber {
        PadicNumber::from_ratio(self.p, self.precision, num, den).expect("nonzero denominator")
    }

    /// `p^k`.
    pub fn p_pow(&self, k: i64) -> PadicNumber {
        PadicNumber::unit_times_p_pow(self.p, self.precision, 1, k)
    }

    pub fn parse(&self, s: &str) -> Result<PadicNumber> {
        PadicNumber::parse(self.p, self.precision, s)
    }

    /// The four square-class representatives `1, u0, p, u0 p`.
    pub fn square_classes(&self) -> [PadicNumber; 4] {
        let u0 = self.u0() as i64;
        [self.int(1), self.int(u0), self.int(self.p as i64), self.int(u0 * self.p as i64)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Known to lie in `p^abs O`.
    Zero { abs: i64 },
    /// `p^v * u` with `u` a unit known modulo `p^prec`, `0 < u < p^prec`.
    Unit { v: i64, u: u64, prec: u32 },
}

/// An element of `Q_p` at finite precision.
#[derive(Clone, Copy)]
pub struct PadicNumber {
    p: u32,
    repr: Repr,
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a + b
    }
}

impl PadicNumber {
    pub fn zero(p: u32) -> Self {
        PadicNumber { p, repr: Repr::Zero { abs: EXACT } }
    }

    /// A value known only to be divisible by `p^abs`.
    pub fn zero_mod(p: u32, abs: i64) -> Self {
        PadicNumber { p, repr: Repr::Zero { abs } }
    }

    /// `p^v * u` for an integer `u` prime to `p`, taken modulo `p^prec`.
    pub fn from_unit(p: u32, v: i64, u: u64, prec: u32) -> Result<Self> {
        if u.is_multiple_of(p as u64) {
            return Err(Error::Invalid("mantissa must be prime to p".into()));
        }
        if prec == 0 || prec > max_digits(p) {
            return Err(Error::Invalid(format!("relative precision {prec} out of range")));
        }
        Ok(PadicNumber { p, repr: Repr::Unit { v, u: u % pow_p(p, prec), prec } })
    }

    fn unit_times_p_pow(p: u32, prec: u32, u: u64, k: i64) -> Self {
        PadicNumber { p, repr: Repr::Unit { v: k, u: u % pow_p(p, prec), prec } }
    }

    pub fn from_i64(p: u32, prec: u32, k: i64) -> Self {
        if k == 0 {
            return Self::zero(p);
        }
        let mut v = 0;
        let mut m = k;
        while m % p as i64 == 0 {
            m /= p as i64;
            v += 1;
        }
        let modulus = pow_p(p, prec) as i128;
        let u = (m as i128).rem_euclid(modulus) as u64;
        PadicNumber { p, repr: Repr::Unit { v, u, prec } }
    }

    pub fn from_ratio(p: u32, prec: u32, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        let n = Self::from_i64(p, prec, num);
        let d = Self::from_i64(p, prec, den);
        n.div(&d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs } if abs >= EXACT)
    }

    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { v, .. } => Some(v),
        }
    }

    /// Valuation, or the known lower bound for a zero.
    pub fn ord(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Unit { v, .. } => v,
        }
    }

    /// Valuation of a value that must be nonzero.
    pub fn val(&self) -> Result<i64> {
        self.valuation().ok_or_else(|| Error::Precision("valuation of a zero at precision".into()))
    }

    pub fn unit(&self) -> Option<u64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { u, .. } => Some(u),
        }
    }

    /// Number of significant digits (0 for a zero).
    pub fn rel_precision(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Unit { prec, .. } => prec,
        }
    }

    /// The power of `p` modulo which the value is known.
    pub fn abs_precision(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs } => abs,
            Repr::Unit { v, prec, .. } => v + prec as i64,
        }
    }

    /// The value modulo `p^k`, for `self` integral and known to that depth.
    pub fn mod_pk(&self, k: u32) -> Result<u64> {
        if k == 0 {
            return Ok(0);
        }
        if self.abs_precision() < k as i64 {
            return Err(Error::Precision(format!("value not known modulo p^{k}")));
        }
        match self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Unit { v, u, .. } => {
                if v < 0 {
                    return Err(Error::Invalid("reduction of a non-integral value".into()));
                }
                if v >= k as i64 {
                    return Ok(0);
                }
                let m = pow_p(self.p, k) as u128;
                Ok(((u as u128 % m) * pow_p(self.p, v as u32) as u128 % m) as u64)
            }
        }
    }

    pub fn residue(&self) -> Result<u64> {
        self.mod_pk(1)
    }

    /// Canonical representative of `self + p^a O`: the digits below `a`.
    pub fn truncate(&self, a: i64) -> Self {
        match self.repr {
            Repr::Zero { .. } => Self::zero(self.p),
            Repr::Unit { v, u, prec } => {
                if v >= a {
                    Self::zero(self.p)
                } else {
                    let k = (a - v) as u32;
                    if k >= prec {
                        *self
                    } else {
                        PadicNumber { p: self.p, repr: Repr::Unit { v, u: u % pow_p(self.p, k), prec } }
                    }
                }
            }
        }
    }

    /// Fractional part `{x}_p` as `num / p^k` with `0 <= num < p^k`.
    pub fn fractional_part(&self) -> Result<(u64, u32)> {
        match self.repr {
            Repr::Zero { abs } => {
                if abs < 0 {
                    Err(Error::Precision("fractional part of an imprecise zero".into()))
                } else {
                    Ok((0, 0))
                }
            }
            Repr::Unit { v, u, prec } => {
                if v >= 0 {
                    return Ok((0, 0));
                }
                let k = (-v) as u32;
                if prec < k {
                    return Err(Error::Precision(format!("fractional part needs {k} digits, only {prec} known")));
                }
                Ok((u % pow_p(self.p, k), k))
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero { .. } => Err(Error::Precision("inverse of a zero at precision".into())),
            Repr::Unit { v, u, prec } => {
                let m = pow_p(self.p, prec);
                Ok(PadicNumber { p: self.p, repr: Repr::Unit { v: -v, u: inv_mod(u, m), prec } })
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.inv()?)
    }

    /// Multiply by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match self.repr {
            Repr::Zero { abs } => Self::zero_mod(self.p, sat_add(abs, k)),
            Repr::Unit { v, u, prec } => PadicNumber { p: self.p, repr: Repr::Unit { v: v + k, u, prec } },
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { *self };
        let mut acc = self.one_like();
        for _ in 0..e.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    pub fn one_like(&self) -> Self {
        let prec = match self.repr {
            Repr::Unit { prec, .. } => prec,
            Repr::Zero { .. } => max_digits(self.p),
        };
        PadicNumber { p: self.p, repr: Repr::Unit { v: 0, u: 1, prec } }
    }

    pub fn from_i64_like(&self, k: i64) -> Self {
        let prec = match self.repr {
            Repr::Unit { prec, .. } => prec,
            Repr::Zero { .. } => max_digits(self.p),
        };
        Self::from_i64(self.p, prec, k)
    }

    /// Equality modulo the precision of both operands.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }

    /// The unit `p^{-v} x` of a nonzero value.
    pub fn unit_part(&self) -> Result<Self> {
        let v = self.val()?;
        Ok(self.shift(-v))
    }

    /// Whether `self` is a square in `F^x`.
    pub fn is_square(&self) -> Result<bool> {
        let v = self.val()?;
        Ok(v % 2 == 0 && legendre(self.unit().unwrap() as i64, self.p) == 1)
    }

    /// Square root in `F`, if one exists.
    pub fn sqrt(&self) -> Result<Option<Self>> {
        if !self.is_square()? {
            return Ok(None);
        }
        let v = self.val()?;
        let u = self.unit_part()?;
        let target = u.residue()?;
        let r0 = (1..self.p as u64).find(|r| r * r % self.p as u64 == target).unwrap();
        let f = [-u, self.from_i64_like(0), u.one_like()];
        let r = hensel_simple_root(&f, r0)?;
        Ok(Some(r.shift(v / 2)))
    }

    /// `(odd valuation, unit part is a residue)`: the square class.
    pub fn square_class(&self) -> Result<(bool, bool)> {
        let v = self.val()?;
        Ok((v.rem_euclid(2) == 1, legendre(self.unit().unwrap() as i64, self.p) == 1))
    }

    pub fn to_json(&self) -> ScalarJson {
        match self.repr {
            Repr::Unit { v, u, .. } => ScalarJson { val: Some(v), unit: u.to_string() },
            Repr::Zero { .. } => ScalarJson { val: None, unit: self.to_string() },
        }
    }

    /// Parses `"v:mantissa"`, an integer, or a fraction `"a/b"`.
    pub fn parse(p: u32, prec: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot parse p-adic value {s:?}"));
        if let Some((v, m)) = s.split_once(':') {
            let v: i64 = v.trim().parse().map_err(|_| bad())?;
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            if m == 0 {
                return Ok(Self::zero_mod(p, v));
            }
            return Self::from_unit(p, v, m, prec);
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            return Self::from_ratio(p, prec, a, b);
        }
        let a: i64 = s.parse().map_err(|_| bad())?;
        Ok(Self::from_i64(p, prec, a))
    }
}

impl fmt::Display for PadicNumber {
    /// `v:mantissa`, or `z:abs` for a zero known modulo `p^abs`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.repr {
            Repr::Zero { abs } if abs >= EXACT => write!(f, "0"),
            Repr::Zero { abs } => write!(f, "z:{abs}"),
            Repr::Unit { v, u, .. } => write!(f, "{v}:{u}"),
        }
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self, self.p)
    }
}

impl PartialEq for PadicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.eq_at_precision(other)
    }
}

impl Add for PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixing primes");
        let p = self.p;
        match (self.repr, rhs.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero_mod(p, a.min(b)),
            (Repr::Zero { abs }, Repr::Unit { v, u, prec }) | (Repr::Unit { v, u, prec }, Repr::Zero { abs }) => {
                let top = abs.min(v + prec as i64);
                if top <= v {
                    Self::zero_mod(p, top)
                } else {
                    let k = (top - v) as u32;
                    PadicNumber { p, repr: Repr::Unit { v, u: u % pow_p(p, k), prec: k } }
                }
            }
            (Repr::Unit { v: v1, u: u1, prec: q1 }, Repr::Unit { v: v2, u: u2, prec: q2 }) => {
                let top = (v1 + q1 as i64).min(v2 + q2 as i64);
                let v = v1.min(v2);
                let rel = (top - v) as u32;
                let m = pow_p(p, rel) as u128;
                let term = |vi: i64, ui: u64| -> u128 {
                    let d = (vi - v) as u32;
                    if d >= rel {
                        0
                    } else {
                        (ui as u128 % m) * pow_p(p, d) as u128 % m
                    }
                };
                let mut s = (term(v1, u1) + term(v2, u2)) % m;
                if s == 0 {
                    return Self::zero_mod(p, top);
                }
                let mut t = 0u32;
                while s.is_multiple_of(p as u128) {
                    s /= p as u128;
                    t += 1;
                }
                PadicNumber { p, repr: Repr::Unit { v: v + t as i64, u: s as u64, prec: rel - t } }
            }
        }
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> Self {
        match self.repr {
            Repr::Zero { .. } => self,
            Repr::Unit { v, u, prec } => {
                let m = pow_p(self.p, prec);
                PadicNumber { p: self.p, repr: Repr::Unit { v, u: m - u, prec } }
            }
        }
    }
}

impl Sub for PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "mixing primes");
        let p = self.p;
        match (self.repr, rhs.repr) {
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero_mod(p, sat_add(a, b)),
            (Repr::Zero { abs }, Repr::Unit { v, .. }) | (Repr::Unit { v, .. }, Repr::Zero { abs }) => Self::zero_mod(p, sat_add(abs, v)),
            (Repr::Unit { v: v1, u: u1, prec: q1 }, Repr::Unit { v: v2, u: u2, prec: q2 }) => {
                let prec = q1.min(q2);
                let m = pow_p(p, prec) as u128;
                let u = (u1 as u128 % m) * (u2 as u128 % m) % m;
                PadicNumber { p, repr: Repr::Unit { v: v1 + v2, u: u as u64, prec } }
            }
        }
    }
}

impl<'a> Add<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn add(self, rhs: &PadicNumber) -> PadicNumber {
        *self + *rhs
    }
}

impl<'a> Sub<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        *self - *rhs
    }
}

impl<'a> Mul<&'a PadicNumber> for &'a PadicNumber {
    type Output = PadicNumber;
    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        *self * *rhs
    }
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn poly_eval(f: &[PadicNumber], x: &PadicNumber) -> PadicNumber {
    let mut acc = PadicNumber::zero(x.p());
    for c in f.iter().rev() {
        acc = acc * *x + *c;
    }
    acc
}

fn poly_derivative(f: &[PadicNumber]) -> Vec<PadicNumber> {
    f.iter().enumerate().skip(1).map(|(i, c)| *c * c.from_i64_like(i as i64)).collect()
}

/// The root of `f` lifting the simple residue root `r0`.
///
/// `f` has coefficients in `O_F`, listed from the constant term up.
pub fn hensel_simple_root(f: &[PadicNumber], r0: u64) -> Result<PadicNumber> {
    let p = f.first().ok_or_else(|| Error::Invalid("empty polynomial".into()))?.p();
    if f.iter().any(|c| c.ord() < 0) {
        return Err(Error::Invalid("polynomial must have integral coefficients".into()));
    }
    let prec =
        f.iter().filter(|c| !c.is_exact_zero()).map(|c| c.abs_precision()).min().unwrap_or(max_digits(p) as i64).min(max_digits(p) as i64).max(1)
            as u32;
    let df = poly_derivative(f);
    let mut x = PadicNumber::from_i64(p, prec, (r0 % p as u64) as i64);
    if poly_eval(f, &x).ord() < 1 || poly_eval(&df, &x).ord() != 0 {
        return Err(Error::Invalid(format!("{r0} is not a simple root modulo p")));
    }
    for _ in 0..64 {
        let fx = poly_eval(f, &x);
        if fx.ord() >= prec as i64 {
            return Ok(x);
        }
        let step = fx.div(&poly_eval(&df, &x))?;
        x = x - step;
    }
    Err(Error::Internal("Newton iteration did not converge".into()))
}

/// Hilbert symbol `(a, b)` over `Q_p`, `p` odd.
pub fn hilbert_symbol(a: &PadicNumber, b: &PadicNumber) -> Result<i8> {
    let p = a.p();
    let alpha = a.val()?;
    let beta = b.val()?;
    let u = a.unit().unwrap() as i64;
    let w = b.unit().unwrap() as i64;
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre(u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre(w, p);
    }
    Ok(s)
}

/// Hilbert symbol by search: `(a, b) = 1` iff `a x^2 + b y^2 = z^2` has a
/// primitive solution modulo `p^3` (enough for Hensel lifting once the
/// valuations are reduced to 0 or 1).
pub fn hilbert_symbol_search(a: &PadicNumber, b: &PadicNumber) -> Result<i8> {
    let p = a.p();
    let reduce = |x: &PadicNumber| -> Result<u64> {
        let v = x.val()?;
        let u = x.unit().unwrap() % p as u64;
        Ok(if v.rem_euclid(2) == 1 { u * p as u64 } else { u })
    };
    let (ra, rb) = (reduce(a)?, reduce(b)?);
    let m = pow_p(p, 3);
    // for each residue t: 1 if t = z^2 with z a unit, 2 if only with p | z
    let mut roots = vec![0u8; m as usize];
    for z in 0..m {
        let t = (z * z % m) as usize;
        if z % p as u64 != 0 {
            roots[t] = 1;
        } else if roots[t] == 0 {
            roots[t] = 2;
        }
    }
    for x in 0..m {
        for y in 0..m {
            let t = ((ra * (x * x % m) + rb * (y * y % m)) % m) as usize;
            let primitive_xy = x % p as u64 != 0 || y % p as u64 != 0;
            if roots[t] == 1 || (roots[t] == 2 && primitive_xy) {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

/// `{"val", "unit"}` rendering of a value; `val` is absent for a zero, whose
/// `unit` is `"0"` or `"z:k"` when known only modulo `p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub val: Option<i64>,
    pub unit: String,
}

/// An exact value `exp(2 pi i num / p^level)` of the additive character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterValue {
    p: u32,
    num: u64,
    level: u32,
}

impl CharacterValue {
    pub fn one(p: u32) -> Self {
        CharacterValue { p, num: 0, level: 0 }
    }

    pub fn new(p: u32, num: u64, level: u32) -> Self {
        let m = pow_p(p, level);
        let mut num = num % m;
        let mut level = level;
        if num == 0 {
            level = 0;
        }
        while level > 0 && num.is_multiple_of(p as u64) {
            num /= p as u64;
            level -= 1;
        }
        CharacterValue { p, num, level }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let level = self.level.max(other.level);
        let a = self.num as u128 * pow_p(self.p, level - self.level) as u128;
        let b = other.num as u128 * pow_p(self.p, level - other.level) as u128;
        let m = pow_p(self.p, level) as u128;
        CharacterValue::new(self.p, ((a + b) % m) as u64, level)
    }

    pub fn inv(&self) -> Self {
        if self.num == 0 {
            *self
        } else {
            CharacterValue::new(self.p, pow_p(self.p, self.level) - self.num, self.level)
        }
    }

    /// `(re, im)` of the value.
    pub fn to_complex(&self) -> (f64, f64) {
        let t = self.num as f64 / pow_p(self.p, self.level) as f64;
        let a = 2.0 * std::f64::consts::PI * t;
        (a.cos(), a.sin())
    }
}

/// The additive character with conductor `O_F`: `psi(x) = exp(2 pi i {x}_p)`.
pub fn psi(x: &PadicNumber) -> Result<CharacterValue> {
    let (num, k) = x.fractional_part()?;
    Ok(CharacterValue::new(x.p(), num, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u32) -> FieldConfig {
        FieldConfig::new(p, 12, DeltaClass::U0).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let c = cfg(5);
        let x = c.ratio(3, 25);
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(x * c.int(25), c.int(3));
        assert_eq!(c.int(7) - c.int(2), c.int(5));
        assert!((c.int(7) - c.int(7)).is_zero());
        assert_eq!(c.int(-1).unit(), Some(pow_p(5, 12) - 1));
    }

    #[test]
    fn cancellation_loses_digits() {
        let c = cfg(3);
        let a = c.int(1);
        let b = c.int(1 + 3i64.pow(5));
        let d = b - a;
        assert_eq!(d.valuation(), Some(5));
        assert_eq!(d.rel_precision(), 7);
        assert_eq!(d.abs_precision(), 12);
    }

    #[test]
    fn psi_convention() {
        let c = cfg(5);
        assert!(psi(&c.int(3)).unwrap().is_one());
        let v = psi(&c.ratio(1, 5)).unwrap();
        assert_eq!((v.num(), v.level()), (1, 1));
        let x = c.ratio(7, 125);
        assert!(psi(&x).unwrap().mul(&psi(&-x).unwrap()).is_one());
    }

    #[test]
    fn hilbert_formula_matches_search() {
        for p in [3, 5, 7] {
            let c = cfg(p);
            let reps = c.square_classes();
            for a in &reps {
                for b in &reps {
                    assert_eq!(hilbert_symbol(a, b).unwrap(), hilbert_symbol_search(a, b).unwrap(), "p={p} {a} {b}");
                }
            }
        }
    }

    #[test]
    fn hensel_examples() {
        let c = cfg(3);
        let one = c.int(1);
        let r = hensel_simple_root(&[-one, c.int(0), one], 1).unwrap();
        assert_eq!(r, one);
        let a = c.int(4);
        let r = hensel_simple_root(&[-a, c.int(0), one], 1).unwrap();
        assert_eq!(r * r, a);
        let pp = c.int(3);
        assert!(hensel_simple_root(&[-pp, c.int(0), one], 0).is_err());
        assert!(hensel_simple_root(&[-pp, c.int(0), one], 1).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let c = cfg(7);
        let x = c.ratio(-5, 49);
        let y = c.parse(&x.to_string()).unwrap();
        assert_eq!(x, y);
        assert_eq!(c.parse("3/7").unwrap(), c.ratio(3, 7));
    }
}
