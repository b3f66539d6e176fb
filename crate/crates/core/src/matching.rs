//! Orbit invariants, regular semisimplicity, matching between `s` and `s'`,
//! the `gamma`-norm criterion and transfer factors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtElement, QuadExtension};
use crate::fpoly::{factor_squarefree, FpPoly};
use crate::matrix::{discriminant, to_ext, MatE, MatF, Matrix};
use crate::padic::{hensel_simple_root, PadicNumber, ScalarJson};
use crate::pairs::{HElem, HPrime, LieS, LieSPrime};

/// Whether a value is nonzero; a zero known only to finite precision is
/// indeterminate.
pub fn nonzero(x: &PadicNumber) -> Result<bool> {
    if !x.is_zero() {
        Ok(true)
    } else if x.is_exact_zero() {
        Ok(false)
    } else {
        Err(Error::Precision(format!("value is zero modulo p^{}", x.abs_precision())))
    }
}

/// A monic invariant polynomial, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitInvariant {
    pub coeffs: Vec<PadicNumber>,
}

impl OrbitInvariant {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn discriminant(&self) -> PadicNumber {
        discriminant(&self.coeffs)
    }

    /// Separable at the working precision.
    pub fn is_separable(&self) -> Result<bool> {
        nonzero(&self.discriminant())
    }

    /// `(-1)^n f(0)`, the determinant.
    pub fn norm(&self) -> PadicNumber {
        let c = self.coeffs[0];
        if self.degree() % 2 == 1 {
            -c
        } else {
            c
        }
    }

    pub fn to_json(&self) -> Vec<ScalarJson> {
        self.coeffs.iter().map(|c| c.to_json()).collect()
    }
}

/// `charpoly(A1 A2)`.
pub fn invariant(x: &LieS) -> OrbitInvariant {
    OrbitInvariant { coeffs: x.product().charpoly() }
}

/// `charpoly(gamma B conj(B))`, whose coefficients lie in `F`.
pub fn invariant_prime(y: &LieSPrime) -> Result<OrbitInvariant> {
    let cp = y.product().charpoly();
    let mut coeffs = Vec::with_capacity(cp.len());
    for c in cp {
        if !c.b.is_zero() {
            return Err(Error::Internal("invariant polynomial left F".into()));
        }
        coeffs.push(c.a);
    }
    Ok(OrbitInvariant { coeffs })
}

pub fn is_rss(x: &LieS) -> Result<bool> {
    Ok(nonzero(&x.a1.det())? && nonzero(&x.a2.det())? && invariant(x).is_separable()?)
}

pub fn is_rss_prime(y: &LieSPrime) -> Result<bool> {
    let d = y.b.det();
    let unit = match nonzero(&d.a) {
        Ok(true) => true,
        _ => nonzero(&d.b)?,
    };
    Ok(unit && invariant_prime(y)?.is_separable()?)
}

/// Both elements are rss and share the invariant polynomial.
pub fn matches(x: &LieS, y: &LieSPrime) -> Result<bool> {
    if !is_rss(x)? || !is_rss_prime(y)? {
        return Err(Error::NotRegular);
    }
    let a = invariant(x);
    let b = invariant_prime(y)?;
    Ok(a.coeffs.len() == b.coeffs.len() && a.coeffs.iter().zip(&b.coeffs).all(|(s, t)| s == t))
}

/// `eta(det h1 det h2)`.
pub fn eta_h(ext: &QuadExtension, h: &HElem) -> Result<i8> {
    ext.eta(&h.det_product())
}

/// `kappa(X) = eta(det A1)`.
pub fn kappa(ext: &QuadExtension, x: &LieS) -> Result<i8> {
    if !is_rss(x)? {
        return Err(Error::NotRegular);
    }
    ext.eta(&x.a1.det())
}

/// Decides `A in gamma N(GL_n(E))` for a regular semisimple `A`.
///
/// After scaling `A` by a power of `p` so that its characteristic polynomial
/// is integral, the polynomial must be separable modulo `p`; otherwise the
/// answer is `Unsupported`. Each irreducible factor of degree `d` then cuts
/// out an unramified field `F_i` and a root `a_i`. The condition holds iff
/// for every `i` with `E (x) F_i` a field, `N(a_i) / gamma^d` is a norm from
/// `E`, using `eta_{E F_i / F_i} = eta o N_{F_i/F}`.
pub fn is_in_gamma_norm(a: &MatF, gamma: &PadicNumber, ext: &QuadExtension) -> Result<bool> {
    let f = OrbitInvariant { coeffs: a.charpoly() };
    if !f.is_separable()? {
        return Err(Error::NotRegular);
    }
    if !nonzero(&f.coeffs[0])? {
        return Ok(false);
    }
    let roots = root_norms(&f)?;
    for (d, norm) in roots {
        if !ext.is_ramified() && d % 2 == 0 {
            continue;
        }
        let target = norm.div(&gamma.pow(d as i64)?)?;
        if ext.eta(&target)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(deg F_i, N_{F_i/F}(a_i))` for the factors of a separable monic `f`,
/// with each norm known to at least one digit.
fn root_norms(f: &OrbitInvariant) -> Result<Vec<(usize, PadicNumber)>> {
    let n = f.degree();
    let p = f.coeffs[0].p();
    let mut k = i64::MIN;
    for (i, c) in f.coeffs[..n].iter().enumerate() {
        if let Some(v) = c.valuation() {
            k = k.max((-v).div_euclid((n - i) as i64) + i64::from((-v).rem_euclid((n - i) as i64) != 0));
        }
    }
    if k == i64::MIN {
        k = 0;
    }
    // g(t) = p^{kn} f(t / p^k) is monic and integral
    let g: Vec<PadicNumber> = f.coeffs.iter().enumerate().map(|(i, c)| c.shift(k * (n - i) as i64)).collect();
    let residues: Vec<u64> = g.iter().map(|c| c.residue()).collect::<Result<_>>()?;
    let gbar = FpPoly::new(p as u64, residues);
    if !gbar.is_squarefree() {
        return Err(Error::Unsupported("characteristic polynomial is not separable modulo p after scaling".into()));
    }
    let factors = factor_squarefree(&gbar).ok_or_else(|| Error::Unsupported("equal-degree splitting did not separate factors".into()))?;
    let mut out = Vec::new();
    for h in factors {
        let d = h.degree() as usize;
        if d == 1 && h.coeffs()[0] == 0 {
            // the root divisible by p: lift it to read its valuation
            let r = hensel_simple_root(&g, 0)?;
            out.push((1, r.shift(-k)));
        } else {
            let c0 = h.coeffs()[0];
            let unit = if d % 2 == 1 { (p as u64 - c0) % p as u64 } else { c0 };
            let norm = PadicNumber::from_unit(p, -k * d as i64, unit, 1)?;
            out.push((d, norm));
        }
    }
    Ok(out)
}

/// A `b` with `N(b) = c`, if `c` is a norm, found by searching for `y` with
/// `c + Delta y^2` a square.
pub fn norm_preimage(ext: &QuadExtension, c: &PadicNumber) -> Result<Option<ExtElement>> {
    if ext.eta(c)? != 1 {
        return Ok(None);
    }
    let v = c.val()?;
    let delta = ext.delta_sq();
    for j in (v.div_euclid(2) - 1)..=(v.div_euclid(2) + 1) {
        for r in 0..ext.p() as i64 {
            let y = c.from_i64_like(r).shift(j);
            let s = *c + delta * y * y;
            if s.is_zero() {
                continue;
            }
            if let Some(x) = s.sqrt()? {
                return Ok(Some(ext.elem(x, y)));
            }
        }
    }
    Err(Error::Internal("norm preimage search failed".into()))
}

/// For `Y = B` with `A = gamma B conj(B)`: the point `X = (1, A)` and the
/// conjugator `x = diag(1, gamma B)` with `Ad(x) Y = X` in `gl_2n(E)`.
pub fn lemma_conjugator(y: &LieSPrime) -> Result<(LieS, MatE)> {
    let n = y.n();
    let a = y.product();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let e = a.get(i, j);
            if !e.b.is_zero() {
                return Err(Error::Invalid("gamma B conj(B) is not defined over F".into()));
            }
            row.push(e.a);
        }
        rows.push(row);
    }
    let af = Matrix::from_rows(rows)?;
    let one = Matrix::identity(n, &y.gamma.one_like());
    let x = LieS::new(one, af)?;
    let ext = y.ext();
    let zero = Matrix::zeros(n, n, &ext.int(0, 0));
    let conj = Matrix::block(&Matrix::identity(n, &ext.int(1, 0)), &zero, &zero, &y.b.scale(&ext.from_f(y.gamma)));
    Ok((x, conj))
}

/// `x M x^{-1}`.
pub fn ad_conj(x: &MatE, m: &MatE) -> Result<MatE> {
    Ok(&(x * m) * &x.inverse()?)
}

/// Embeds `X in s(F)` into `gl_2n(E)`.
pub fn embed_in_e(x: &LieS, ext: QuadExtension) -> MatE {
    to_ext(&x.embed(), ext)
}

/// The `s`-element `U = Ad(x) V` for `V in s'`, read back over `F`.
pub fn transport(x: &MatE, v: &LieSPrime) -> Result<LieS> {
    let u = ad_conj(x, &v.embed())?;
    let mut rows = Vec::new();
    for i in 0..u.rows() {
        let mut row = Vec::new();
        for j in 0..u.cols() {
            let e = u.get(i, j);
            if !e.b.is_zero() {
                return Err(Error::Invalid("transported element is not defined over F".into()));
            }
            row.push(e.a);
        }
        rows.push(row);
    }
    LieS::from_block(&Matrix::from_rows(rows)?)
}

/// `[[A, A - 1], [A + 1, A]]`, a point of the symmetric space with upper
/// left block `A`.
pub fn x_canonical(a: &MatF) -> MatF {
    let one = Matrix::identity(a.rows(), a.get(0, 0));
    Matrix::block(a, &(a - &one), &(a + &one), a)
}

/// `x e x e = 1`, i.e. `x` lies in the symmetric space.
pub fn in_symmetric_space(x: &MatF) -> bool {
    let n = x.rows() / 2;
    let e = Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let one = x.get(0, 0).one_like();
        if i != j {
            PadicNumber::zero(one.p())
        } else if i < n {
            one
        } else {
            -one
        }
    });
    let xe = x * &e;
    &xe * &xe == Matrix::identity(2 * n, x.get(0, 0))
}

/// Group invariant: the characteristic polynomial of the upper left block.
pub fn group_invariant(x: &MatF) -> OrbitInvariant {
    let n = x.rows() / 2;
    OrbitInvariant { coeffs: x.sub_block(0, 0, n, n).charpoly() }
}

/// Separable invariant without the roots `+1` and `-1`.
pub fn is_rss_group(x: &MatF) -> Result<bool> {
    let f = group_invariant(x);
    if !f.is_separable()? {
        return Ok(false);
    }
    let at = |t: i64| {
        let t = f.coeffs[0].from_i64_like(t);
        crate::padic::poly_eval(&f.coeffs, &t)
    };
    Ok(nonzero(&at(1))? && nonzero(&at(-1))?)
}

/// `kappa(x) = eta(det B)` for `x = [[A, B], [C, D]]`.
pub fn kappa_group(ext: &QuadExtension, x: &MatF) -> Result<i8> {
    if !in_symmetric_space(x) {
        return Err(Error::Invalid("element is not in the symmetric space".into()));
    }
    if !is_rss_group(x)? {
        return Err(Error::NotRegular);
    }
    let n = x.rows() / 2;
    let b = x.sub_block(0, n, n, n).det();
    if !nonzero(&b)? {
        return Err(Error::Singular);
    }
    ext.eta(&b)
}

/// `h x h^{-1}` for `h = diag(h1, h2)`.
pub fn conj_group(h: &HElem, x: &MatF) -> Result<MatF> {
    let e = h.embed();
    Ok(&(&e * x) * &e.inverse()?)
}

/// `det h`, whose class in `E^x` drives the twisted action.
pub fn hprime_det(h: &HPrime) -> ExtElement {
    h.det()
}

/// Serializable summary of an invariant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub invariant: Vec<ScalarJson>,
    pub rss: bool,
    pub disc_exponent: Option<i64>,
}

pub fn classify(x: &LieS) -> Result<ClassifyReport> {
    let rss = is_rss(x)?;
    let disc_exponent = if rss { Some(x.disc_factor()?.exponent) } else { None };
    Ok(ClassifyReport { invariant: invariant(x).to_json(), rss, disc_exponent })
}

pub fn classify_prime(y: &LieSPrime) -> Result<ClassifyReport> {
    let rss = is_rss_prime(y)?;
    let disc_exponent = if rss { Some(y.disc_factor()?.exponent) } else { None };
    Ok(ClassifyReport { invariant: invariant_prime(y)?.to_json(), rss, disc_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{DeltaClass, FieldConfig};

    fn cfg(p: u32, class: DeltaClass) -> FieldConfig {
        FieldConfig::new(p, 12, class).unwrap()
    }

    #[test]
    fn n1_norm_criterion_matches_search() {
        for p in [3, 5] {
            for class in DeltaClass::ALL {
                let c = cfg(p, class);
                let e = c.ext();
                for v in -2..4 {
                    for u in 1..p as i64 {
                        let a = c.int(u).shift(v);
                        let m = Matrix::diag(&[a]);
                        let got = is_in_gamma_norm(&m, &c.int(1), &e).unwrap();
                        assert_eq!(got, e.is_norm_by_search(&a).unwrap(), "p={p} {class:?} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_n2_splits_per_factor() {
        let c = cfg(5, DeltaClass::U0);
        let e = c.ext();
        let yes = Matrix::diag(&[c.int(1), c.int(2)]);
        assert!(is_in_gamma_norm(&yes, &c.int(1), &e).unwrap());
        let no = Matrix::diag(&[c.int(5), c.int(2)]);
        assert!(!is_in_gamma_norm(&no, &c.int(1), &e).unwrap());
        assert!(is_in_gamma_norm(&no, &c.int(5), &e).is_ok());
        // an irreducible quadratic factor is always a norm for unramified E
        let comp = Matrix::from_rows(vec![vec![c.int(0), c.int(c.u0() as i64)], vec![c.int(1), c.int(0)]]).unwrap();
        assert!(is_in_gamma_norm(&comp, &c.int(5), &e).unwrap());
    }

    #[test]
    fn repeated_residue_roots_are_unsupported() {
        let c = cfg(5, DeltaClass::P);
        let m = Matrix::diag(&[c.int(1), c.int(6)]);
        assert!(matches!(is_in_gamma_norm(&m, &c.int(1), &c.ext()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn conjugator_carries_y_to_x() {
        for class in DeltaClass::ALL {
            let c = cfg(5, class).with_gamma(FieldConfig::new(5, 12, class).unwrap().int(3)).unwrap();
            let e = c.ext();
            let y = LieSPrime::scalar(e.int(2, 1), c.gamma());
            let (x, conj) = lemma_conjugator(&y).unwrap();
            assert_eq!(ad_conj(&conj, &y.embed()).unwrap(), embed_in_e(&x, e));
            assert!(matches(&x, &y).unwrap());
        }
    }

    #[test]
    fn canonical_group_points() {
        let c = cfg(3, DeltaClass::U0);
        let e = c.ext();
        let a = Matrix::diag(&[c.int(2), c.int(4)]);
        let x = x_canonical(&a);
        assert!(in_symmetric_space(&x));
        let want = e.eta(&(&a - &Matrix::identity(2, &c.int(1))).det()).unwrap();
        assert_eq!(kappa_group(&e, &x).unwrap(), want);
    }

    #[test]
    fn norm_preimages() {
        for class in DeltaClass::ALL {
            let c = cfg(7, class);
            let e = c.ext();
            for v in 0..4 {
                for u in 1..7 {
                    let t = c.int(u).shift(v);
                    match norm_preimage(&e, &t).unwrap() {
                        Some(b) => assert_eq!(b.norm(), t),
                        None => assert_eq!(e.eta(&t).unwrap(), -1),
                    }
                }
            }
        }
    }
}
