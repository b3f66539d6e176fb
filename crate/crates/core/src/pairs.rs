//! The two symmetric pairs.
//!
//! `s = gl_n + gl_n` sits in `gl_2n(F)` as `[[0, A1], [A2, 0]]` and carries the
//! action of `H = GL_n x GL_n`. `s'` is `gl_n(E)` realized inside `gl_2n(E)`
//! as `[[0, gamma B], [conj B, 0]]`, with `H' = GL_n(E)` acting by twisted
//! conjugation. Both involutions are conjugation by `diag(1, -1)`.

use crate::error::{Error, Result};
use crate::ext::{ExtElement, QuadExtension};
use crate::matrix::{conj_mat, discriminant, MatE, MatF, Matrix, Scalar};
use crate::padic::{PadicNumber, ScalarJson};
use serde::Serialize;

fn check_square<T: Scalar>(m: &Matrix<T>, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::Invalid(format!("expected a {n}x{n} matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// The matrix unit `E_ij` of size `n`.
pub fn unit_matrix<T: Scalar>(n: usize, i: usize, j: usize, like: &T) -> Matrix<T> {
    let z = like.zero_like();
    let o = like.one_like();
    Matrix::from_fn(n, n, |a, b| if a == i && b == j { o.clone() } else { z.clone() })
}

pub fn bracket<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Matrix<T> {
    &(x * y) - &(y * x)
}

/// `theta(g) = e g e` with `e = diag(1_n, -1_n)`.
pub fn theta<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.rows() / 2;
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if (i < n) == (j < n) { m.get(i, j).clone() } else { -m.get(i, j).clone() })
}

/// `iota(g) = theta(g)^{-1}`.
pub fn iota<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    theta(g).inverse()
}

/// `s(g) = g iota(g)`, constant on right `H`-cosets.
pub fn symmetrize<T: Scalar>(g: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(g * &iota(g)?)
}

/// `(1 - X)(1 + X)^{-1}`.
pub fn cayley<T: Scalar>(x: &Matrix<T>) -> Result<Matrix<T>> {
    let one = Matrix::identity(x.rows(), x.get(0, 0));
    let plus = &one + x;
    let minus = &one - x;
    let inv = plus.inverse().map_err(|_| Error::Invalid("1 + X is not invertible".into()))?;
    minus.inverse().map_err(|_| Error::Invalid("1 - X is not invertible".into()))?;
    Ok(&minus * &inv)
}

/// `ad(X)` on `gl_N` in the basis of matrix units, row-major.
pub fn ad_matrix<T: Scalar>(x: &Matrix<T>) -> Matrix<T> {
    let n = x.rows();
    let z = x.get(0, 0).zero_like();
    Matrix::from_fn(n * n, n * n, |r, c| {
        let (k, l) = (r / n, r % n);
        let (i, j) = (c / n, c % n);
        // (X E_ij - E_ij X)_{kl} = X_ki [j = l] - [i = k] X_jl
        let mut v = z.clone();
        if j == l {
            v = v + x.get(k, i).clone();
        }
        if i == k {
            v = v - x.get(j, l).clone();
        }
        v
    })
}

/// `|D(X)|_F = p^{-exponent/2}`: `exponent` is the valuation of the product
/// of the nonzero eigenvalues of `ad(X)` on `g`, i.e. of `det(ad X)` on
/// `h/t + s/c`, and `|D(X)|` is its square root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DiscFactor {
    pub exponent: i64,
}

impl DiscFactor {
    pub fn to_f64(self, p: u32) -> f64 {
        (p as f64).powf(-(self.exponent as f64) / 2.0)
    }
}

/// Lowest coefficient of `charpoly(ad)`; the coefficients below `2n` must
/// vanish and the one at `2n` must not, or `X` is not regular semisimple.
fn disc_from_ad(cp: &[PadicNumber], n: usize) -> Result<DiscFactor> {
    if cp[..2 * n].iter().any(|c| !c.is_zero()) {
        return Err(Error::NotRegular);
    }
    let c = &cp[2 * n];
    if c.is_zero() {
        return Err(Error::NotRegular);
    }
    Ok(DiscFactor { exponent: c.val()? })
}

/// An element `(A1, A2)` of `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieS {
    pub a1: MatF,
    pub a2: MatF,
}

/// `(h1, h2)` in `H = GL_n x GL_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HElem {
    pub h1: MatF,
    pub h2: MatF,
}

impl HElem {
    pub fn new(h1: MatF, h2: MatF) -> Result<Self> {
        let n = h1.rows();
        check_square(&h1, n)?;
        check_square(&h2, n)?;
        Ok(HElem { h1, h2 })
    }

    pub fn identity(n: usize, like: &PadicNumber) -> Self {
        HElem { h1: Matrix::identity(n, like), h2: Matrix::identity(n, like) }
    }

    pub fn n(&self) -> usize {
        self.h1.rows()
    }

    pub fn compose(&self, other: &Self) -> Self {
        HElem { h1: &self.h1 * &other.h1, h2: &self.h2 * &other.h2 }
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(HElem { h1: self.h1.inverse()?, h2: self.h2.inverse()? })
    }

    /// `det h1 * det h2`, the argument of `eta` on `H`.
    pub fn det_product(&self) -> PadicNumber {
        self.h1.det() * self.h2.det()
    }

    pub fn embed(&self) -> MatF {
        let z = Matrix::zeros(self.n(), self.n(), self.h1.get(0, 0));
        Matrix::block(&self.h1, &z, &z, &self.h2)
    }
}

impl LieS {
    pub fn new(a1: MatF, a2: MatF) -> Result<Self> {
        let n = a1.rows();
        check_square(&a1, n)?;
        check_square(&a2, n)?;
        Ok(LieS { a1, a2 })
    }

    /// `(x, y)` at `n = 1`.
    pub fn scalar(x: PadicNumber, y: PadicNumber) -> Self {
        LieS { a1: Matrix::diag(&[x]), a2: Matrix::diag(&[y]) }
    }

    pub fn n(&self) -> usize {
        self.a1.rows()
    }

    pub fn embed(&self) -> MatF {
        let z = Matrix::zeros(self.n(), self.n(), self.a1.get(0, 0));
        Matrix::block(&z, &self.a1, &self.a2, &z)
    }

    /// Reads `(A1, A2)` off an anti-diagonal block matrix.
    pub fn from_block(m: &MatF) -> Result<Self> {
        let n = m.rows() / 2;
        if m.rows() != 2 * n || m.cols() != 2 * n {
            return Err(Error::Invalid("expected an even square matrix".into()));
        }
        if !m.sub_block(0, 0, n, n).is_zero() || !m.sub_block(n, n, n, n).is_zero() {
            return Err(Error::Invalid("matrix does not lie in s".into()));
        }
        Ok(LieS { a1: m.sub_block(0, n, n, n), a2: m.sub_block(n, 0, n, n) })
    }

    pub fn scale(&self, t: &PadicNumber) -> Self {
        LieS { a1: self.a1.scale(t), a2: self.a2.scale(t) }
    }

    pub fn neg(&self) -> Self {
        LieS { a1: -&self.a1, a2: -&self.a2 }
    }

    pub fn add(&self, other: &Self) -> Self {
        LieS { a1: &self.a1 + &other.a1, a2: &self.a2 + &other.a2 }
    }

    /// `(h1 A1 h2^{-1}, h2 A2 h1^{-1})`.
    pub fn act(&self, h: &HElem) -> Result<Self> {
        let i1 = h.h1.inverse()?;
        let i2 = h.h2.inverse()?;
        Ok(LieS { a1: &(&h.h1 * &self.a1) * &i2, a2: &(&h.h2 * &self.a2) * &i1 })
    }

    /// `tr(XY) = tr(A1 B2) + tr(A2 B1)`.
    pub fn pairing(&self, other: &Self) -> PadicNumber {
        (&self.a1 * &other.a2).trace() + (&self.a2 * &other.a1).trace()
    }

    /// `A1 A2`, whose characteristic polynomial is the orbit invariant.
    pub fn product(&self) -> MatF {
        &self.a1 * &self.a2
    }

    pub fn disc_factor(&self) -> Result<DiscFactor> {
        disc_from_ad(&ad_matrix(&self.embed()).charpoly(), self.n())
    }

    /// Independent check: the nonzero `ad`-eigenvalues are the differences
    /// of distinct eigenvalues of `X`, so their product is `disc(charpoly X)`.
    pub fn disc_factor_by_discriminant(&self) -> Result<DiscFactor> {
        let d = discriminant(&self.embed().charpoly());
        Ok(DiscFactor { exponent: d.val().map_err(|_| Error::NotRegular)? })
    }
}

/// `B` in `s' = gl_n(E)` for the quaternion parameter `gamma`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieSPrime {
    pub b: MatE,
    pub gamma: PadicNumber,
}

/// `h` in `H' = GL_n(E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HPrime {
    pub h: MatE,
}

impl HPrime {
    pub fn n(&self) -> usize {
        self.h.rows()
    }

    pub fn compose(&self, other: &Self) -> Self {
        HPrime { h: &self.h * &other.h }
    }

    pub fn det(&self) -> ExtElement {
        self.h.det()
    }
}

impl LieSPrime {
    pub fn new(b: MatE, gamma: PadicNumber) -> Result<Self> {
        check_square(&b, b.rows())?;
        if gamma.is_zero() {
            return Err(Error::Invalid("gamma must be nonzero".into()));
        }
        Ok(LieSPrime { b, gamma })
    }

    pub fn scalar(b: ExtElement, gamma: PadicNumber) -> Self {
        LieSPrime { b: Matrix::diag(&[b]), gamma }
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn ext(&self) -> QuadExtension {
        self.b.get(0, 0).ext()
    }

    /// `[[0, gamma B], [conj B, 0]]` in `gl_2n(E)`.
    pub fn embed(&self) -> MatE {
        let z = Matrix::zeros(self.n(), self.n(), self.b.get(0, 0));
        let g = self.ext().from_f(self.gamma);
        Matrix::block(&z, &self.b.scale(&g), &conj_mat(&self.b), &z)
    }

    pub fn scale(&self, t: &PadicNumber) -> Self {
        LieSPrime { b: self.b.map(|x| x.scale(t)), gamma: self.gamma }
    }

    pub fn neg(&self) -> Self {
        LieSPrime { b: -&self.b, gamma: self.gamma }
    }

    pub fn add(&self, other: &Self) -> Self {
        LieSPrime { b: &self.b + &other.b, gamma: self.gamma }
    }

    /// `h B conj(h)^{-1}`.
    pub fn act(&self, h: &HPrime) -> Result<Self> {
        let hb = conj_mat(&h.h).inverse()?;
        Ok(LieSPrime { b: &(&h.h * &self.b) * &hb, gamma: self.gamma })
    }

    /// `tr(XY)` computed in `E`; its `delta`-component vanishes.
    pub fn pairing_e(&self, other: &Self) -> ExtElement {
        (&self.embed() * &other.embed()).trace()
    }

    /// `tr(XY) = gamma Tr_{E/F} tr(B conj C)`.
    pub fn pairing(&self, other: &Self) -> PadicNumber {
        let t = (&self.b * &conj_mat(&other.b)).trace();
        self.gamma * t.trace()
    }

    /// `gamma B conj(B)`, whose characteristic polynomial is the invariant.
    pub fn product(&self) -> MatE {
        let g = self.ext().from_f(self.gamma);
        (&self.b * &conj_mat(&self.b)).scale(&g)
    }

    pub fn disc_factor(&self) -> Result<DiscFactor> {
        let ad = ad_on_gprime(&self.embed(), &self.gamma)?;
        disc_from_ad(&ad.charpoly(), self.n())
    }

    pub fn disc_factor_by_discriminant(&self) -> Result<DiscFactor> {
        let d = discriminant(&self.embed().charpoly());
        if !d.b.is_zero() {
            return Err(Error::Internal("discriminant left F".into()));
        }
        Ok(DiscFactor { exponent: d.a.val().map_err(|_| Error::NotRegular)? })
    }
}

/// The `F`-basis of `gl_n(D)` inside `gl_2n(E)`: `[[a, gamma b], [conj b, conj a]]`
/// with `a`, `b` running over `E_ij` and `delta E_ij`.
pub fn gprime_basis(n: usize, ext: QuadExtension, gamma: &PadicNumber) -> Vec<MatE> {
    let g = ext.from_f(*gamma);
    let zero = ext.int(0, 0);
    let z = Matrix::zeros(n, n, &zero);
    let mut out = Vec::with_capacity(4 * n * n);
    for scalar in [ext.int(1, 0), ext.delta()] {
        for i in 0..n {
            for j in 0..n {
                let a = unit_matrix(n, i, j, &zero).scale(&scalar);
                out.push(Matrix::block(&a, &z, &z, &conj_mat(&a)));
            }
        }
    }
    for scalar in [ext.int(1, 0), ext.delta()] {
        for i in 0..n {
            for j in 0..n {
                let b = unit_matrix(n, i, j, &zero).scale(&scalar);
                out.push(Matrix::block(&z, &b.scale(&g), &conj_mat(&b), &z));
            }
        }
    }
    out
}

/// Coordinates of an element of `gl_n(D)` in [`gprime_basis`].
fn gprime_coords(m: &MatE, n: usize) -> Result<Vec<PadicNumber>> {
    let a = m.sub_block(0, 0, n, n);
    let b = conj_mat(&m.sub_block(n, 0, n, n));
    if !(&m.sub_block(n, n, n, n) - &conj_mat(&a)).is_zero() {
        return Err(Error::Internal("matrix left gl_n(D)".into()));
    }
    let mut out = Vec::with_capacity(4 * n * n);
    for part in [&a, &b] {
        for comp in 0..2 {
            for i in 0..n {
                for j in 0..n {
                    let e = part.get(i, j);
                    out.push(if comp == 0 { e.a } else { e.b });
                }
            }
        }
    }
    Ok(out)
}

/// `ad(Y)` on `gl_n(D)` as an `F`-linear map.
pub fn ad_on_gprime(y: &MatE, gamma: &PadicNumber) -> Result<MatF> {
    let n = y.rows() / 2;
    let ext = y.get(0, 0).ext();
    let basis = gprime_basis(n, ext, gamma);
    let cols: Vec<Vec<PadicNumber>> = basis.iter().map(|z| gprime_coords(&bracket(y, z), n)).collect::<Result<_>>()?;
    let d = basis.len();
    Ok(Matrix::from_fn(d, d, |r, c| cols[c][r]))
}

/// Basis of `h = gl_n + gl_n` as block-diagonal matrices in `gl_2n(F)`.
pub fn h_basis(n: usize, like: &PadicNumber) -> Vec<MatF> {
    let z = Matrix::zeros(n, n, like);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(Matrix::block(&unit_matrix(n, i, j, like), &z, &z, &z));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(Matrix::block(&z, &z, &z, &unit_matrix(n, i, j, like)));
        }
    }
    out
}

/// Basis of `s` as anti-diagonal matrices in `gl_2n(F)`.
pub fn s_basis(n: usize, like: &PadicNumber) -> Vec<MatF> {
    let z = Matrix::zeros(n, n, like);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(Matrix::block(&z, &unit_matrix(n, i, j, like), &z, &z));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.push(Matrix::block(&z, &z, &unit_matrix(n, i, j, like), &z));
        }
    }
    out
}

/// `F`-basis of `h' = gl_n(E)` as `diag(a, conj a)`.
pub fn hprime_basis(n: usize, ext: QuadExtension, gamma: &PadicNumber) -> Vec<MatE> {
    gprime_basis(n, ext, gamma).into_iter().take(2 * n * n).collect()
}

/// `F`-basis of `s'` as `[[0, gamma b], [conj b, 0]]`.
pub fn sprime_basis(n: usize, ext: QuadExtension, gamma: &PadicNumber) -> Vec<MatE> {
    gprime_basis(n, ext, gamma).into_iter().skip(2 * n * n).collect()
}

/// Gram matrix of `tr(XY)` on a list of matrices over `F`.
pub fn trace_gram(basis: &[MatF]) -> MatF {
    let d = basis.len();
    Matrix::from_fn(d, d, |i, j| (&basis[i] * &basis[j]).trace())
}

/// Gram matrix of `tr(XY)` on a list of matrices over `E` whose pairwise
/// traces lie in `F`.
pub fn trace_gram_e(basis: &[MatE]) -> Result<MatF> {
    let d = basis.len();
    let mut rows = Vec::with_capacity(d);
    for x in basis {
        let mut row = Vec::with_capacity(d);
        for y in basis {
            let t = (x * y).trace();
            if !t.b.is_zero() {
                return Err(Error::Internal("trace form left F".into()));
            }
            row.push(t.a);
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

/// Basis of the centralizer of `x` inside the span of `space`.
pub fn centralizer_in<T: Scalar>(x: &Matrix<T>, space: &[Matrix<T>], coords: impl Fn(&Matrix<T>) -> Vec<T>) -> Vec<Matrix<T>> {
    if space.is_empty() {
        return Vec::new();
    }
    let images: Vec<Vec<T>> = space.iter().map(|z| coords(&bracket(x, z))).collect();
    let rows = images[0].len();
    let m = Matrix::from_fn(rows, space.len(), |r, c| images[c][r].clone());
    let (_, ker) = m.kernel();
    ker.into_iter()
        .map(|v| {
            let mut acc = Matrix::zeros(x.rows(), x.cols(), x.get(0, 0));
            for (c, z) in v.iter().zip(space) {
                acc = &acc + &z.scale(c);
            }
            acc
        })
        .collect()
}

/// Entries of a matrix in row-major order, as coordinates in `gl_N`.
pub fn flat_coords<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    m.entries().to_vec()
}

/// `F`-coordinates of a matrix over `E`.
pub fn flat_coords_e(m: &MatE) -> Vec<ExtElement> {
    m.entries().to_vec()
}

/// A point of `s` or `s'` with exact entries; `E`-entries are `[a, b]` for `a + b delta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PointJson {
    S { a1: Vec<Vec<ScalarJson>>, a2: Vec<Vec<ScalarJson>> },
    Prime { b: Vec<Vec<[ScalarJson; 2]>> },
}

pub fn mat_f_json(m: &MatF) -> Vec<Vec<ScalarJson>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(PadicNumber::to_json).collect()).collect()
}

pub fn mat_e_json(m: &MatE) -> Vec<Vec<[ScalarJson; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| [x.a.to_json(), x.b.to_json()]).collect()).collect()
}

impl LieS {
    pub fn to_json(&self) -> PointJson {
        PointJson::S { a1: mat_f_json(&self.a1), a2: mat_f_json(&self.a2) }
    }
}

impl LieSPrime {
    pub fn to_json(&self) -> PointJson {
        PointJson::Prime { b: mat_e_json(&self.b) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{DeltaClass, FieldConfig};

    fn cfg(class: DeltaClass) -> FieldConfig {
        FieldConfig::new(5, 12, class).unwrap()
    }

    #[test]
    fn scalar_action() {
        let c = cfg(DeltaClass::U0);
        let x = LieS::scalar(c.int(3), c.int(7));
        let h = HElem::new(Matrix::diag(&[c.int(1)]), Matrix::diag(&[c.int(2)])).unwrap();
        let y = x.act(&h).unwrap();
        assert_eq!(y, LieS::scalar(c.int(3) * c.ratio(1, 2), c.int(14)));
        assert_eq!(x.pairing(&x), c.int(42));
        let one = LieS::scalar(c.int(1), c.int(1));
        assert_eq!(one.pairing(&one), c.int(2));
    }

    #[test]
    fn disc_factor_n1() {
        let c = cfg(DeltaClass::U0);
        // charpoly of ad X is t^2 (t^2 - 4xy): exponent v(xy)
        let x = LieS::scalar(c.int(25), c.int(15));
        assert_eq!(x.disc_factor().unwrap().exponent, 3);
        assert_eq!(x.disc_factor_by_discriminant().unwrap().exponent, 3);
        assert!(LieS::scalar(c.int(1), c.int(0)).disc_factor().is_err());
    }

    #[test]
    fn disc_factor_prime_side_n1() {
        for class in DeltaClass::ALL {
            let c = cfg(class);
            let e = c.ext();
            let y = LieSPrime::scalar(e.int(5, 3), c.int(1));
            let n = e.int(5, 3).norm();
            assert_eq!(y.disc_factor().unwrap().exponent, n.val().unwrap());
            assert_eq!(y.disc_factor_by_discriminant().unwrap(), y.disc_factor().unwrap());
        }
    }

    #[test]
    fn gprime_is_closed_under_brackets() {
        let c = cfg(DeltaClass::P);
        let e = c.ext();
        let basis = gprime_basis(2, e, &c.int(2));
        for x in &basis {
            for y in &basis {
                assert!(gprime_coords(&bracket(x, y), 2).is_ok());
            }
        }
    }

    #[test]
    fn pairing_lies_in_f() {
        let c = cfg(DeltaClass::U0p);
        let e = c.ext();
        let y = LieSPrime::scalar(e.int(2, 3), c.int(3));
        let z = LieSPrime::scalar(e.int(1, -4), c.int(3));
        let t = y.pairing_e(&z);
        assert!(t.b.is_zero());
        assert_eq!(t.a, y.pairing(&z));
    }

    #[test]
    fn cayley_and_symmetrize() {
        let c = cfg(DeltaClass::U0);
        let x = LieS::new(
            Matrix::from_rows(vec![vec![c.int(5), c.int(1)], vec![c.int(0), c.int(10)]]).unwrap(),
            Matrix::from_rows(vec![vec![c.int(15), c.int(0)], vec![c.int(5), c.int(5)]]).unwrap(),
        )
        .unwrap()
        .embed();
        let l = cayley(&x).unwrap();
        let lm = cayley(&-&x).unwrap();
        assert_eq!(&l * &lm, Matrix::identity(4, &c.int(1)));
        assert_eq!(theta(&l), lm);
        let s = symmetrize(&l).unwrap();
        assert_eq!(iota(&s).unwrap(), s);
    }
}
