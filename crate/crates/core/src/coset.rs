//! Finite combinations of character-twisted lattice cosets on `s` and `s'`.
//!
//! A term is `coeff * psi(<w, X>) * 1[X in c + Lambda_a]` with `Lambda_a =
//! varpi^a L_0`. The span is closed under the Fourier transform for the
//! self-dual measure, which keeps every transform exact.

use std::fmt;

use serde::Serialize;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::ext::ExtElement;
use crate::matrix::Matrix;
use crate::padic::{psi, PadicNumber};
use crate::pairs::{LieS, LieSPrime};

/// Canonical key of one coordinate: `None` for zero, else `(v, unit)`.
pub type CoordKey = Option<(i64, u64)>;

/// A side of the comparison, with its standard lattice `L_0`.
pub trait CosetSpace: Clone + fmt::Debug {
    fn p(&self) -> u32;
    fn pairing(&self, other: &Self) -> PadicNumber;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn origin(&self) -> Self;
    /// Whether `self` lies in `Lambda_a`; fails if the digits are unknown.
    fn in_lattice(&self, a: i64) -> Result<bool>;
    /// Canonical representative of `self + Lambda_a`.
    fn reduce(&self, a: i64) -> Result<Self>;
    /// `b` with `Lambda_a^dual = Lambda_b`.
    fn dual_scale(&self, a: i64) -> i64;
    /// `e` with `vol(Lambda_a) = p^{e/2}` for the self-dual measure.
    fn vol_half_exp(&self, a: i64) -> i64;
    fn key(&self) -> Vec<CoordKey>;
}

fn coord_in(x: &PadicNumber, a: i64) -> Result<bool> {
    match x.valuation() {
        Some(v) => Ok(v >= a),
        None if x.abs_precision() >= a => Ok(true),
        None => Err(Error::Precision(format!("coordinate known only modulo p^{}", x.abs_precision()))),
    }
}

fn coord_reduce(x: &PadicNumber, a: i64) -> Result<PadicNumber> {
    if x.abs_precision() < a {
        return Err(Error::Precision(format!("cannot reduce modulo p^{a}: known to p^{}", x.abs_precision())));
    }
    Ok(x.truncate(a))
}

fn coord_key(x: &PadicNumber) -> CoordKey {
    x.valuation().map(|v| (v, x.unit().unwrap_or(0)))
}

impl CosetSpace for LieS {
    fn p(&self) -> u32 {
        self.a1.get(0, 0).p()
    }

    fn pairing(&self, other: &Self) -> PadicNumber {
        LieS::pairing(self, other)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn origin(&self) -> Self {
        let z = PadicNumber::zero(self.p());
        LieS { a1: self.a1.map(|_| z), a2: self.a2.map(|_| z) }
    }

    fn in_lattice(&self, a: i64) -> Result<bool> {
        for x in self.a1.entries().iter().chain(self.a2.entries()) {
            if !coord_in(x, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn reduce(&self, a: i64) -> Result<Self> {
        let r = |m: &Matrix<PadicNumber>| -> Result<Matrix<PadicNumber>> {
            let e: Vec<PadicNumber> = m.entries().iter().map(|x| coord_reduce(x, a)).collect::<Result<_>>()?;
            Ok(Matrix::from_fn(m.rows(), m.cols(), |i, j| e[i * m.cols() + j]))
        };
        Ok(LieS { a1: r(&self.a1)?, a2: r(&self.a2)? })
    }

    fn dual_scale(&self, a: i64) -> i64 {
        -a
    }

    fn vol_half_exp(&self, a: i64) -> i64 {
        let n = self.n() as i64;
        -4 * n * n * a
    }

    fn key(&self) -> Vec<CoordKey> {
        self.a1.entries().iter().chain(self.a2.entries()).map(coord_key).collect()
    }
}

impl LieSPrime {
    /// `c` with `L'^dual = varpi_E^{-c} L'`: the valuation of `gamma` plus
    /// that of the different.
    pub fn dual_shift(&self) -> i64 {
        let ext = self.ext();
        ext.e() * self.gamma.ord() + ext.v_delta()
    }

    /// Residue degree of `E/F`.
    fn residue_degree(&self) -> i64 {
        if self.ext().is_ramified() {
            1
        } else {
            2
        }
    }
}

fn ext_in(x: &ExtElement, a: i64) -> Result<bool> {
    let ext = x.ext();
    let (ka, kb) = if ext.is_ramified() { ((a + 1).div_euclid(2), a.div_euclid(2)) } else { (a, a) };
    Ok(coord_in(&x.a, ka)? && coord_in(&x.b, kb)?)
}

fn ext_reduce(x: &ExtElement, a: i64) -> Result<ExtElement> {
    let ext = x.ext();
    let (ka, kb) = if ext.is_ramified() { ((a + 1).div_euclid(2), a.div_euclid(2)) } else { (a, a) };
    if x.a.abs_precision() < ka || x.b.abs_precision() < kb {
        return Err(Error::Precision(format!("cannot reduce modulo varpi_E^{a}")));
    }
    Ok(x.truncate(a))
}

impl CosetSpace for LieSPrime {
    fn p(&self) -> u32 {
        self.gamma.p()
    }

    fn pairing(&self, other: &Self) -> PadicNumber {
        LieSPrime::pairing(self, other)
    }

    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }

    fn negated(&self) -> Self {
        self.neg()
    }

    fn origin(&self) -> Self {
        let z = self.ext().int(0, 0);
        LieSPrime { b: self.b.map(|_| z), gamma: self.gamma }
    }

    fn in_lattice(&self, a: i64) -> Result<bool> {
        for x in self.b.entries() {
            if !ext_in(x, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn reduce(&self, a: i64) -> Result<Self> {
        let e: Vec<ExtElement> = self.b.entries().iter().map(|x| ext_reduce(x, a)).collect::<Result<_>>()?;
        let cols = self.b.cols();
        Ok(LieSPrime { b: Matrix::from_fn(self.b.rows(), cols, |i, j| e[i * cols + j]), gamma: self.gamma })
    }

    fn dual_scale(&self, a: i64) -> i64 {
        -a - self.dual_shift()
    }

    fn vol_half_exp(&self, a: i64) -> i64 {
        let n = self.n() as i64;
        -self.residue_degree() * n * n * (2 * a + self.dual_shift())
    }

    fn key(&self) -> Vec<CoordKey> {
        self.b.entries().iter().flat_map(|x| [coord_key(&x.a), coord_key(&x.b)]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CosetTerm<P> {
    pub coeff: Cyclo,
    /// Character parameter: the term carries `psi(<w, X>)`.
    pub w: P,
    pub center: P,
    pub scale: i64,
}

#[derive(Clone, Debug)]
pub struct CosetFunction<P> {
    origin: P,
    terms: Vec<CosetTerm<P>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetTermJson {
    pub scale: i64,
    pub center: Vec<CoordKey>,
    pub character: Vec<CoordKey>,
    pub coeff: crate::cyclo::CycloJson,
}

impl<P: CosetSpace> CosetFunction<P> {
    pub fn zero(origin: &P) -> Self {
        CosetFunction { origin: origin.origin(), terms: Vec::new() }
    }

    /// `1[X in c + Lambda_a]`.
    pub fn indicator(center: &P, scale: i64) -> Self {
        let origin = center.origin();
        let term = CosetTerm { coeff: Cyclo::one(center.p()), w: origin.clone(), center: center.clone(), scale };
        CosetFunction { origin, terms: vec![term] }
    }

    /// The characteristic function of the standard lattice.
    pub fn standard(origin: &P) -> Self {
        Self::indicator(&origin.origin(), 0)
    }

    pub fn terms(&self) -> &[CosetTerm<P>] {
        &self.terms
    }

    pub fn origin(&self) -> &P {
        &self.origin
    }

    pub fn push(&mut self, coeff: Cyclo, w: P, center: P, scale: i64) {
        self.terms.push(CosetTerm { coeff, w, center, scale });
    }

    pub fn scaled(&self, c: &Cyclo) -> Self {
        let terms = self.terms.iter().map(|t| CosetTerm { coeff: t.coeff.clone() * c.clone(), ..t.clone() }).collect();
        CosetFunction { origin: self.origin.clone(), terms }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        CosetFunction { origin: self.origin.clone(), terms }
    }

    pub fn eval(&self, x: &P) -> Result<Cyclo> {
        let p = self.origin.p();
        let mut acc = Cyclo::zero(p);
        for t in &self.terms {
            if x.plus(&t.center.negated()).in_lattice(t.scale)? {
                let ch = psi(&t.w.pairing(x))?;
                acc = acc + t.coeff.clone() * Cyclo::from_character(&ch);
            }
        }
        Ok(acc)
    }

    /// `X -> f(-X)`.
    pub fn reflected(&self) -> Self {
        let terms =
            self.terms.iter().map(|t| CosetTerm { coeff: t.coeff.clone(), w: t.w.negated(), center: t.center.negated(), scale: t.scale }).collect();
        CosetFunction { origin: self.origin.clone(), terms }
    }

    /// `f^(X) = int f(Y) psi(<X, Y>) dY`.
    pub fn fourier(&self) -> Result<Self> {
        let p = self.origin.p();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let vol = Cyclo::p_half_pow(p, t.center.vol_half_exp(t.scale));
            let phase = Cyclo::from_character(&psi(&t.w.pairing(&t.center))?);
            terms.push(CosetTerm {
                coeff: t.coeff.clone() * vol * phase,
                w: t.center.clone(),
                center: t.w.negated(),
                scale: t.center.dual_scale(t.scale),
            });
        }
        Ok(CosetFunction { origin: self.origin.clone(), terms })
    }

    /// Reduces centers modulo their lattice and characters modulo the dual
    /// lattice, merges equal terms and drops zeros. Equal canonical forms
    /// imply equal functions; the converse needs all terms at one scale.
    pub fn canonical(&self) -> Result<Self> {
        let mut out: Vec<(Vec<CoordKey>, Vec<CoordKey>, CosetTerm<P>)> = Vec::new();
        for t in &self.terms {
            let center = t.center.reduce(t.scale)?;
            let dual = t.center.dual_scale(t.scale);
            let w = t.w.reduce(dual)?;
            // psi(<w, X>) = psi(<w', X>) psi(<w - w', c>) on c + Lambda
            let shift = t.w.plus(&w.negated());
            let fix = Cyclo::from_character(&psi(&shift.pairing(&center))?);
            let coeff = t.coeff.clone() * fix;
            let (ck, wk) = (center.key(), w.key());
            match out.iter_mut().find(|(c2, w2, t2)| t2.scale == t.scale && *c2 == ck && *w2 == wk) {
                Some((_, _, existing)) => existing.coeff = existing.coeff.clone() + coeff,
                None => out.push((ck, wk, CosetTerm { coeff, w, center, scale: t.scale })),
            }
        }
        out.retain(|(_, _, t)| !t.coeff.is_zero());
        out.sort_by(|a, b| a.2.scale.cmp(&b.2.scale).then_with(|| a.0.cmp(&b.0)).then_with(|| a.1.cmp(&b.1)));
        Ok(CosetFunction { origin: self.origin.clone(), terms: out.into_iter().map(|(_, _, t)| t).collect() })
    }

    pub fn same_as(&self, other: &Self) -> Result<bool> {
        let (a, b) = (self.canonical()?, other.canonical()?);
        Ok(a.terms.len() == b.terms.len()
            && a.terms
                .iter()
                .zip(&b.terms)
                .all(|(x, y)| x.scale == y.scale && x.center.key() == y.center.key() && x.w.key() == y.w.key() && x.coeff == y.coeff))
    }

    pub fn to_json(&self) -> Vec<CosetTermJson> {
        self.terms.iter().map(|t| CosetTermJson { scale: t.scale, center: t.center.key(), character: t.w.key(), coeff: t.coeff.to_json() }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{DeltaClass, FieldConfig};

    fn pt(c: &FieldConfig, x: i64, y: i64, num: i64) -> LieS {
        LieS::scalar(c.ratio(x, num), c.ratio(y, num))
    }

    #[test]
    fn standard_lattice_is_self_dual() {
        let c = FieldConfig::new(5, 12, DeltaClass::U0).unwrap();
        let f0 = CosetFunction::standard(&pt(&c, 0, 0, 1));
        assert!(f0.fourier().unwrap().same_as(&f0).unwrap());
        for class in [DeltaClass::U0, DeltaClass::P] {
            let c = FieldConfig::new(5, 12, class).unwrap();
            let ext = c.ext();
            let y = LieSPrime::scalar(ext.int(0, 0), c.int(1));
            let f = CosetFunction::standard(&y);
            let g = f.fourier().unwrap();
            // L' is self-dual exactly when E/F is unramified
            assert_eq!(g.same_as(&f).unwrap(), !class.is_ramified());
        }
    }

    #[test]
    fn double_transform_reflects() {
        let c = FieldConfig::new(3, 12, DeltaClass::U0).unwrap();
        let mut f = CosetFunction::indicator(&pt(&c, 1, 2, 9), 1);
        f.push(Cyclo::int(3, 2), pt(&c, 1, 0, 3), pt(&c, 2, 1, 1), -1);
        let ff = f.fourier().unwrap().fourier().unwrap();
        assert!(ff.same_as(&f.reflected()).unwrap());
    }

    #[test]
    fn shifted_coset_transform_matches_character_sum() {
        // f = 1[c + 5 L], transform at X = (1/25, 2/5): a sum over L / 5^3 L
        let c = FieldConfig::new(5, 12, DeltaClass::U0).unwrap();
        let center = pt(&c, 3, 7, 1);
        let f = CosetFunction::indicator(&center, 1);
        let x = pt(&c, 1, 10, 25);
        let exact = f.fourier().unwrap().eval(&x).unwrap();
        let mut brute = Cyclo::zero(5);
        let step = 125i64;
        for s in 0..step {
            for t in 0..step {
                let y = LieS::scalar(c.int(s), c.int(t));
                if !y.plus(&center.negated()).in_lattice(1).unwrap() {
                    continue;
                }
                brute = brute + Cyclo::from_character(&psi(&x.pairing(&y)).unwrap());
            }
        }
        assert_eq!(exact, brute.scale(&num_rational::BigRational::new(1.into(), (step * step).into())));
    }
}
