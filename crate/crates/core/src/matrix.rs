//! Dense matrices over `F`, `E` and `Q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ext::ExtElement;
use crate::padic::PadicNumber;

/// Field elements usable as matrix entries.
pub trait Scalar: Clone + fmt::Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_s(&self) -> bool;
    fn try_inv(&self) -> Result<Self>;
    /// Pivot preference during elimination; smaller is better, `None` for zero.
    fn pivot_weight(&self) -> Option<i64>;
}

impl Scalar for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.p())
    }
    fn one_like(&self) -> Self {
        PadicNumber::one_like(self)
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_weight(&self) -> Option<i64> {
        self.valuation()
    }
}

impl Scalar for ExtElement {
    fn zero_like(&self) -> Self {
        ExtElement::zero_like(self)
    }
    fn one_like(&self) -> Self {
        ExtElement::one_like(self)
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn pivot_weight(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val_e())
        }
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::Singular)
        } else {
            Ok(self.recip())
        }
    }
    fn pivot_weight(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }
}

#[derive(Clone)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatF = Matrix<PadicNumber>;
pub type MatE = Matrix<ExtElement>;
pub type MatQ = Matrix<BigRational>;

impl<T: Scalar> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize, like: &T) -> Self {
        let z = like.zero_like();
        Self::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn identity(n: usize, like: &T) -> Self {
        let z = like.zero_like();
        let o = like.one_like();
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn diag(entries: &[T]) -> Self {
        let z = entries[0].zero_like();
        Self::from_fn(entries.len(), entries.len(), |i, j| if i == j { entries[i].clone() } else { z.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, t: &T) -> Self {
        self.map(|x| x.clone() * t.clone())
    }

    pub fn trace(&self) -> T {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero_s)
    }

    pub fn sub_block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `[[a, b], [c, d]]` from square blocks of equal size.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        Self::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - n).clone(),
            (false, true) => c.get(i - n, j).clone(),
            (false, false) => d.get(i - n, j - n).clone(),
        })
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let z = self.data[0].zero_like();
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = z.clone();
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let z = self.data[0].zero_like();
        (0..self.rows)
            .map(|i| {
                let mut acc = z.clone();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.get(i, k).clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    /// Gaussian elimination choosing pivots of least weight.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = self.data[0].one_like();
        for c in 0..n {
            let pivot = (c..n).filter_map(|r| m.get(r, c).pivot_weight().map(|w| (w, r))).min();
            let Some((_, r)) = pivot else {
                return self.data[0].zero_like() * acc;
            };
            if r != c {
                m.swap_rows(r, c);
                acc = -acc;
            }
            let piv = m.get(c, c).clone();
            let inv = piv.try_inv().expect("pivot is nonzero");
            acc = acc * piv;
            for r2 in c + 1..n {
                let f = m.get(r2, c).clone() * inv.clone();
                if f.is_zero_s() {
                    continue;
                }
                for k in c..n {
                    let v = m.get(r2, k).clone() - f.clone() * m.get(c, k).clone();
                    m.set(r2, k, v);
                }
            }
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n, &self.data[0]);
        for c in 0..n {
            let pivot = (c..n).filter_map(|r| m.get(r, c).pivot_weight().map(|w| (w, r))).min();
            let Some((_, r)) = pivot else {
                return Err(Error::Singular);
            };
            m.swap_rows(r, c);
            inv.swap_rows(r, c);
            let pinv = m.get(c, c).try_inv()?;
            for k in 0..n {
                let a = m.get(c, k).clone() * pinv.clone();
                m.set(c, k, a);
                let b = inv.get(c, k).clone() * pinv.clone();
                inv.set(c, k, b);
            }
            for r2 in 0..n {
                if r2 == c {
                    continue;
                }
                let f = m.get(r2, c).clone();
                if f.is_zero_s() {
                    continue;
                }
                for k in 0..n {
                    let a = m.get(r2, k).clone() - f.clone() * m.get(c, k).clone();
                    m.set(r2, k, a);
                    let b = inv.get(r2, k).clone() - f.clone() * inv.get(c, k).clone();
                    inv.set(r2, k, b);
                }
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(t - M)`, ascending coefficients, by the
    /// division-free Berkowitz recursion.
    pub fn charpoly(&self) -> Vec<T> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        let one = self.data[0].one_like();
        let zero = self.data[0].zero_like();
        // descending coefficients of the leading r x r minor
        let mut v = vec![one.clone(), -self.get(0, 0).clone()];
        for r in 1..n {
            let mut col: Vec<T> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<T> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut t = vec![one.clone(), -self.get(r, r).clone()];
            for _ in 0..r {
                let mut dot = zero.clone();
                for k in 0..r {
                    dot = dot + row[k].clone() * col[k].clone();
                }
                t.push(-dot);
                let next: Vec<T> = (0..r)
                    .map(|i| {
                        let mut acc = zero.clone();
                        for k in 0..r {
                            acc = acc + self.get(i, k).clone() * col[k].clone();
                        }
                        acc
                    })
                    .collect();
                col = next;
            }
            let mut nv = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = zero.clone();
                for j in 0..=i.min(r) {
                    acc = acc + t[i - j].clone() * v[j].clone();
                }
                nv.push(acc);
            }
            v = nv;
        }
        v.reverse();
        v
    }

    /// Row-reduces and returns `(rank, kernel basis)`.
    pub fn kernel(&self) -> (usize, Vec<Vec<T>>) {
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let pivot = (r..rows).filter_map(|i| m.get(i, c).pivot_weight().map(|w| (w, i))).min();
            let Some((_, i)) = pivot else { continue };
            m.swap_rows(i, r);
            let pinv = m.get(r, c).try_inv().expect("pivot is nonzero");
            for k in 0..cols {
                let a = m.get(r, k).clone() * pinv.clone();
                m.set(r, k, a);
            }
            for i2 in 0..rows {
                if i2 == r {
                    continue;
                }
                let f = m.get(i2, c).clone();
                if f.is_zero_s() {
                    continue;
                }
                for k in 0..cols {
                    let a = m.get(i2, k).clone() - f.clone() * m.get(r, k).clone();
                    m.set(i2, k, a);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let zero = self.data[0].zero_like();
        let one = self.data[0].one_like();
        let mut basis = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![zero.clone(); cols];
            v[free] = one.clone();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(row, free).clone();
            }
            basis.push(v);
        }
        (pivots.len(), basis)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        self.mul_mat(rhs)
    }
}

impl<T: Scalar + PartialEq> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

/// Entrywise conjugate of a matrix over `E`.
pub fn conj_mat(m: &MatE) -> MatE {
    m.map(ExtElement::conj)
}

/// Embeds a matrix over `F` into `E`.
pub fn to_ext(m: &MatF, ext: crate::ext::QuadExtension) -> MatE {
    m.map(|x| ext.from_f(*x))
}

/// Discriminant of a monic polynomial given by ascending coefficients,
/// `(-1)^{n(n-1)/2} Res(f, f')`.
pub fn discriminant<T: Scalar>(f: &[T]) -> T {
    let n = f.len() - 1;
    if n <= 1 {
        return f[0].one_like();
    }
    let df: Vec<T> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let mut k = c.zero_like();
            for _ in 0..i {
                k = k + c.clone();
            }
            k
        })
        .collect();
    let m = n - 1;
    let size = n + m;
    let z = f[0].zero_like();
    // descending coefficient rows
    let fd: Vec<T> = f.iter().rev().cloned().collect();
    let dd: Vec<T> = df.iter().rev().cloned().collect();
    let syl = Matrix::from_fn(size, size, |i, j| {
        if i < m {
            if j >= i && j - i < fd.len() {
                fd[j - i].clone()
            } else {
                z.clone()
            }
        } else {
            let k = i - m;
            if j >= k && j - k < dd.len() {
                dd[j - k].clone()
            } else {
                z.clone()
            }
        }
    });
    let r = syl.det();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{DeltaClass, FieldConfig};

    fn cfg() -> FieldConfig {
        FieldConfig::new(5, 12, DeltaClass::U0).unwrap()
    }

    fn m(c: &FieldConfig, rows: &[&[i64]]) -> MatF {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| c.int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn charpoly_and_det() {
        let c = cfg();
        let a = m(&c, &[&[1, 2, 0], &[3, 4, 5], &[0, 1, 7]]);
        let cp = a.charpoly();
        // det(t - A) constant term is -det(A)
        assert_eq!(cp[0], -a.det());
        assert_eq!(cp[2], -a.trace());
        assert_eq!(cp[3], c.int(1));
        assert_eq!(a.det(), c.int((28 - 5) - 2 * 21));
    }

    #[test]
    fn inverse_round_trip() {
        let c = cfg();
        let a = m(&c, &[&[5, 2], &[3, 25]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(2, &c.int(1)));
    }

    #[test]
    fn kernel_dimension() {
        let c = cfg();
        let a = m(&c, &[&[1, 2, 3], &[2, 4, 6]]);
        let (rank, ker) = a.kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn discriminant_quadratic() {
        let c = cfg();
        // t^2 - 3t + 2 has discriminant 1
        let f = [c.int(2), c.int(-3), c.int(1)];
        assert_eq!(discriminant(&f), c.int(1));
        // t^3 - t has discriminant 4
        let g = [c.int(0), c.int(-1), c.int(0), c.int(1)];
        assert_eq!(discriminant(&g), c.int(4));
    }
}
