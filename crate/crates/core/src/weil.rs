//! Quadratic forms over `F` and their Weil indices, computed as normalized
//! Gauss integrals `i(L) = int_L psi(q(v)/2) dv` over an admissible lattice.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatF, Matrix};
use crate::padic::{pow_p, psi, PadicNumber};

/// Distance from the unit circle point to the nearest eighth root of unity
/// above which a Gauss sum is rejected.
pub const SNAP_TOLERANCE: f64 = 1e-6;

/// An eighth root of unity `exp(2 pi i k / 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mu8(u8);

impl Mu8 {
    pub const ONE: Mu8 = Mu8(0);

    pub fn new(k: i64) -> Self {
        Mu8(k.rem_euclid(8) as u8)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Self {
        Mu8::new(-(self.0 as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        Mu8::new(self.0 as i64 * e)
    }

    /// Multiplies by a sign.
    pub fn signed(self, s: i8) -> Self {
        if s < 0 {
            self * Mu8(4)
        } else {
            self
        }
    }

    pub fn to_complex(self) -> (f64, f64) {
        let a = std::f64::consts::PI * self.0 as f64 / 4.0;
        (a.cos(), a.sin())
    }

    /// Nearest eighth root of unity to `z / |z|`, with its distance.
    pub fn snap(re: f64, im: f64) -> Result<(Mu8, f64)> {
        let r = re.hypot(im);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Internal(format!("cannot normalize {re} + {im}i")));
        }
        let k = (im.atan2(re) / (std::f64::consts::PI / 4.0)).round() as i64;
        let m = Mu8::new(k);
        let (c, s) = m.to_complex();
        let d = (re / r - c).hypot(im / r - s);
        if d > SNAP_TOLERANCE {
            return Err(Error::Internal(format!("Gauss sum {re} + {im}i is {d:e} away from mu_8")));
        }
        Ok((m, d))
    }
}

impl std::ops::Mul for Mu8 {
    type Output = Mu8;
    fn mul(self, rhs: Mu8) -> Mu8 {
        Mu8::new(self.0 as i64 + rhs.0 as i64)
    }
}

impl std::ops::Div for Mu8 {
    type Output = Mu8;
    fn div(self, rhs: Mu8) -> Mu8 {
        self * rhs.inv()
    }
}

impl fmt::Display for Mu8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta8^{}", self.0)
    }
}

/// A quadratic form given by its symmetric Gram matrix `B`, `q(v) = B(v, v)`.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    gram: MatF,
}

impl QuadraticForm {
    pub fn new(gram: MatF) -> Result<Self> {
        if gram.rows() != gram.cols() {
            return Err(Error::Invalid("Gram matrix must be square".into()));
        }
        if gram.rows() > 0 && gram.transpose() != gram {
            return Err(Error::Invalid("Gram matrix must be symmetric".into()));
        }
        Ok(QuadraticForm { gram })
    }

    pub fn diagonal(coeffs: &[PadicNumber]) -> Self {
        if coeffs.is_empty() {
            return QuadraticForm { gram: Matrix::from_fn(0, 0, |_, _| unreachable!()) };
        }
        QuadraticForm { gram: Matrix::diag(coeffs) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &MatF {
        &self.gram
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        if self.dim() == 0 {
            return other.clone();
        }
        if other.dim() == 0 {
            return self.clone();
        }
        let (d1, d2) = (self.dim(), other.dim());
        let z = PadicNumber::zero(self.gram.get(0, 0).p());
        let gram = Matrix::from_fn(d1 + d2, d1 + d2, |i, j| match (i < d1, j < d1) {
            (true, true) => *self.gram.get(i, j),
            (false, false) => *other.gram.get(i - d1, j - d1),
            _ => z,
        });
        QuadraticForm { gram }
    }

    pub fn scaled(&self, a: &PadicNumber) -> Self {
        if self.dim() == 0 {
            return self.clone();
        }
        QuadraticForm { gram: self.gram.scale(a) }
    }

    pub fn neg(&self) -> Self {
        if self.dim() == 0 {
            return self.clone();
        }
        QuadraticForm { gram: -&self.gram }
    }
}

/// `P^T B P = diag(coeffs, 0, ..., 0)` with `radical` trailing zeros.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub coeffs: Vec<PadicNumber>,
    pub basis: MatF,
    pub radical: usize,
}

/// Congruent diagonal form of a non-degenerate form.
pub fn diagonalize(q: &QuadraticForm) -> Result<Diagonalization> {
    let d = diagonalize_with_radical(q)?;
    if d.radical > 0 {
        return Err(Error::Invalid(format!("degenerate form: radical of dimension {}", d.radical)));
    }
    Ok(d)
}

/// Congruent diagonal form, allowing a radical. Pivots are chosen by least
/// valuation so that the change of basis stays as integral as possible.
pub fn diagonalize_with_radical(q: &QuadraticForm) -> Result<Diagonalization> {
    let n = q.dim();
    if n == 0 {
        return Err(Error::Invalid("empty form".into()));
    }
    let mut s = q.gram.clone();
    let mut pm = Matrix::identity(n, s.get(0, 0));
    let mut coeffs = Vec::new();
    for t in 0..n {
        let best_diag = (t..n).filter_map(|i| s.get(i, i).valuation().map(|v| (v, i))).min();
        let best_off = (t..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter_map(|(i, j)| s.get(i, j).valuation().map(|v| (v, i, j))).min();
        let pivot = match (best_diag, best_off) {
            (None, None) => break,
            (Some((vd, i)), Some((vo, _, _))) if vd <= vo => i,
            (Some((_, i)), None) => i,
            (_, Some((_, i, j))) => {
                // e_i <- e_i + e_j makes the diagonal entry 2 B(e_i, e_j) + ...
                let one = s.get(0, 0).one_like();
                add_multiple(&mut s, &mut pm, i, j, &one);
                i
            }
        };
        swap(&mut s, &mut pm, t, pivot);
        let piv = *s.get(t, t);
        if piv.is_zero() {
            return Err(Error::Precision("pivot vanished during diagonalization".into()));
        }
        let inv = piv.inv()?;
        for j in t + 1..n {
            let c = -(*s.get(j, t) * inv);
            if !c.is_zero() {
                add_multiple(&mut s, &mut pm, j, t, &c);
            }
        }
        coeffs.push(piv);
    }
    let radical = n - coeffs.len();
    Ok(Diagonalization { coeffs, basis: pm, radical })
}

/// Replaces basis vector `e_i` by `e_i + c e_j`.
fn add_multiple(s: &mut MatF, pm: &mut MatF, i: usize, j: usize, c: &PadicNumber) {
    let n = s.rows();
    for k in 0..n {
        let v = *s.get(k, i) + *c * *s.get(k, j);
        s.set(k, i, v);
    }
    for k in 0..n {
        let v = *s.get(i, k) + *c * *s.get(j, k);
        s.set(i, k, v);
    }
    for k in 0..n {
        let v = *pm.get(k, i) + *c * *pm.get(k, j);
        pm.set(k, i, v);
    }
}

fn swap(s: &mut MatF, pm: &mut MatF, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = s.rows();
    for k in 0..n {
        let (x, y) = (*s.get(k, a), *s.get(k, b));
        s.set(k, a, y);
        s.set(k, b, x);
    }
    for k in 0..n {
        let (x, y) = (*s.get(a, k), *s.get(b, k));
        s.set(a, k, y);
        s.set(b, k, x);
    }
    for k in 0..n {
        let (x, y) = (*pm.get(k, a), *pm.get(k, b));
        pm.set(k, a, y);
        pm.set(k, b, x);
    }
}

/// Raw output of one Gauss-sum evaluation.
#[derive(Clone, Debug)]
pub struct GaussSum {
    pub value: Mu8,
    /// `i(L)` itself.
    pub complex: (f64, f64),
    pub snap_distance: f64,
    /// `k_i` with `L = sum p^{k_i} O e_i`.
    pub lattice: Vec<i64>,
    pub terms: u64,
}

/// Largest total number of grid points summed directly; larger forms are
/// split into orthogonal blocks and multiplied.
const GRID_LIMIT: u64 = 1 << 22;

/// The admissible lattice exponent `floor(-v(a)/2)` for a coefficient `a`:
/// its dual under `a x y` lies inside it.
fn admissible_exponent(a: &PadicNumber) -> Result<i64> {
    Ok((-a.val()?).div_euclid(2))
}

/// Summation depth `M` so that `a x^2 / 2` is well defined modulo `O` on
/// cosets of `p^M O` inside `p^k O`.
fn depth(v: i64, k: i64) -> i64 {
    (-v - k).max((-v + 1).div_euclid(2)).max(k)
}

/// Evaluates `i(L)` for `L = sum p^{k_i - shift} O e_i` with the admissible
/// `k_i`. Any `shift >= 0` gives an admissible lattice.
pub fn gauss_sum(coeffs: &[PadicNumber], shift: i64) -> Result<GaussSum> {
    if coeffs.is_empty() {
        return Ok(GaussSum { value: Mu8::ONE, complex: (1.0, 0.0), snap_distance: 0.0, lattice: vec![], terms: 1 });
    }
    if shift < 0 {
        return Err(Error::Invalid("lattice shift must be non-negative".into()));
    }
    let p = coeffs[0].p();
    let mut tables = Vec::new();
    let mut lattice = Vec::new();
    let mut log_vol = 0i64;
    for a in coeffs {
        let v = a.val()?;
        let k = admissible_exponent(a)? - shift;
        let m = depth(v, k);
        let half = a.from_i64_like(2).inv()?;
        let count = pow_p(p, (m - k) as u32);
        let mut vals = Vec::with_capacity(count as usize);
        for j in 0..count {
            let x = a.from_i64_like(j as i64).shift(k);
            let c = psi(&(*a * x * x * half))?;
            vals.push(c);
        }
        tables.push(vals);
        lattice.push(k);
        log_vol += m;
    }
    let total: u64 = tables.iter().map(|t| t.len() as u64).product();
    let (re, im) = if total <= GRID_LIMIT {
        grid_sum(p, &tables)
    } else {
        // i(L + L') = i(L) i(L'): multiply the one-dimensional sums
        let mut acc = (1.0, 0.0);
        for t in &tables {
            let (r, i) = grid_sum(p, std::slice::from_ref(t));
            acc = (acc.0 * r - acc.1 * i, acc.0 * i + acc.1 * r);
        }
        acc
    };
    let scale = (p as f64).powi(-(log_vol as i32));
    let complex = (re * scale, im * scale);
    let (value, snap_distance) = Mu8::snap(complex.0, complex.1)?;
    Ok(GaussSum { value, complex, snap_distance, lattice, terms: total })
}

/// Sums the product character over the full grid through an exact histogram.
fn grid_sum(p: u32, tables: &[Vec<crate::padic::CharacterValue>]) -> (f64, f64) {
    let level = tables.iter().flat_map(|t| t.iter().map(|c| c.level())).max().unwrap_or(0);
    let modulus = pow_p(p, level);
    let lift = |c: &crate::padic::CharacterValue| c.num() * pow_p(p, level - c.level());
    let mut hist = vec![0u64; modulus as usize];
    hist[0] = 1;
    for t in tables {
        let mut next = vec![0u64; modulus as usize];
        for (r, &cnt) in hist.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for c in t {
                next[((r as u64 + lift(c)) % modulus) as usize] += cnt;
            }
        }
        hist = next;
    }
    let mut re = 0.0;
    let mut im = 0.0;
    for (r, &cnt) in hist.iter().enumerate() {
        if cnt == 0 {
            continue;
        }
        let a = 2.0 * std::f64::consts::PI * r as f64 / modulus as f64;
        re += cnt as f64 * a.cos();
        im += cnt as f64 * a.sin();
    }
    (re, im)
}

/// The Weil index of a diagonal form from its Gauss sum on the standard
/// admissible lattice; the shifted lattice must agree.
pub fn weil_index_oracle(coeffs: &[PadicNumber]) -> Result<Mu8> {
    let a = gauss_sum(coeffs, 0)?;
    let b = gauss_sum(coeffs, 1)?;
    if a.value != b.value {
        return Err(Error::Internal(format!("lattice dependence: {} vs {}", a.value, b.value)));
    }
    Ok(a.value)
}

/// The Weil index of a non-degenerate form.
pub fn weil_index(q: &QuadraticForm) -> Result<Mu8> {
    if q.dim() == 0 {
        return Ok(Mu8::ONE);
    }
    weil_index_oracle(&diagonalize(q)?.coeffs)
}

/// `gamma(a x^2) / gamma(x^2)`.
pub fn gamma_ratio(a: &PadicNumber) -> Result<Mu8> {
    if a.is_zero() {
        return Err(Error::Invalid("gamma_ratio of zero".into()));
    }
    Ok(weil_index_oracle(&[*a])? / weil_index_oracle(&[a.one_like()])?)
}

/// Weil index of the form with Gram matrix `gram` (a trace form restricted
/// to a subspace).
pub fn gamma_of_space(gram: &MatF) -> Result<Mu8> {
    weil_index(&QuadraticForm::new(gram.clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{DeltaClass, FieldConfig};

    fn cfg(p: u32) -> FieldConfig {
        FieldConfig::new(p, 12, DeltaClass::U0).unwrap()
    }

    #[test]
    fn hyperbolic_plane_is_trivial() {
        for p in [3, 5, 7] {
            let c = cfg(p);
            for a in [c.int(1), c.int(p as i64), c.ratio(2, p as i64), c.int(c.u0() as i64)] {
                assert_eq!(weil_index_oracle(&[a, -a]).unwrap(), Mu8::ONE);
            }
            let h = Matrix::from_rows(vec![vec![c.int(0), c.int(1)], vec![c.int(1), c.int(0)]]).unwrap();
            assert_eq!(gamma_of_space(&h).unwrap(), Mu8::ONE);
        }
    }

    #[test]
    fn unit_coefficients_are_trivial() {
        // psi has conductor O, so a unimodular lattice gives i(L) = 1
        let c = cfg(5);
        assert_eq!(weil_index_oracle(&[c.int(1)]).unwrap(), Mu8::ONE);
        assert_eq!(weil_index_oracle(&[c.int(2), c.int(3)]).unwrap(), Mu8::ONE);
    }

    #[test]
    fn uniformizer_gauss_sums() {
        // i(O) for a = 2u/p is a normalized quadratic Gauss sum in u
        let c = cfg(5);
        assert_eq!(weil_index_oracle(&[c.ratio(2, 5)]).unwrap(), Mu8::ONE);
        assert_eq!(weil_index_oracle(&[c.ratio(1, 5)]).unwrap(), Mu8::new(4));
        let c = cfg(3);
        let g = weil_index_oracle(&[c.ratio(2, 3)]).unwrap();
        assert_eq!(g, Mu8::new(2));
    }

    #[test]
    fn diagonalization_is_a_congruence() {
        let c = cfg(5);
        let g = Matrix::from_rows(vec![vec![c.int(0), c.int(5), c.int(1)], vec![c.int(5), c.int(0), c.int(2)], vec![c.int(1), c.int(2), c.int(10)]])
            .unwrap();
        let d = diagonalize(&QuadraticForm::new(g.clone()).unwrap()).unwrap();
        let back = &(&d.basis.transpose() * &g) * &d.basis;
        assert_eq!(back, Matrix::diag(&d.coeffs));
        let prod = d.coeffs.iter().fold(c.int(1), |a, b| a * *b);
        let det = g.det();
        assert!((prod.div(&det).unwrap()).is_square().unwrap());
    }

    #[test]
    fn radical_is_reported() {
        let c = cfg(3);
        let g = Matrix::from_rows(vec![vec![c.int(1), c.int(1)], vec![c.int(1), c.int(1)]]).unwrap();
        let d = diagonalize_with_radical(&QuadraticForm::new(g).unwrap()).unwrap();
        assert_eq!(d.radical, 1);
        assert_eq!(d.coeffs, vec![c.int(1)]);
    }
}
