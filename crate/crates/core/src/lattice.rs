//! Truncated orbital integrals for `n <= 2` by lattice counting.
//!
//! For `X0 = (1, D)` with `D = diag(a_i)` split regular, `H(O)`-invariant
//! test functions see `h` only through the pair of lattices
//! `L1 = h1 O^n`, `L2 = h2 O^n`, and `f_0(h^{-1} X0 h) = 1` iff
//! `D L1 < L2 < L1`. The centralizer of `X0` is the diagonal torus, so the
//! integral is the number of such pairs up to diagonal `p`-power scaling,
//! each weighted by `eta(p)^{v(det h1 h2)}`. On `s'` the same holds with one
//! `O_E`-lattice `L = h O_E^n` and the condition `B conj(L) < L`.

use serde::Serialize;

use crate::coset::{CosetFunction, CosetSpace};
use crate::cyclo::{Cyclo, CycloJson};
use crate::error::{Error, Result};
use crate::ext::{ExtElement, QuadExtension};
use crate::matching::{kappa, norm_preimage};
use crate::matrix::{conj_mat, MatE, MatF, Matrix};
use crate::padic::{pow_p, FieldConfig, PadicNumber, ScalarJson};
use crate::pairs::{LieS, LieSPrime};

/// Refuse enumerations larger than this many candidate lattices.
pub const SIZE_GUARD: u64 = 20_000_000;

/// A partial lattice count.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralValue {
    pub value: Cyclo,
    pub depth: i64,
    /// Depth from which the enumeration is exhaustive.
    pub depth_needed: i64,
    pub complete: bool,
    /// Bound on `|exact - value|`; zero when complete.
    pub error_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralJson {
    pub value: CycloJson,
    pub depth: i64,
    pub depth_needed: i64,
    pub complete: bool,
    pub error_bound: f64,
}

impl IntegralValue {
    pub fn to_json(&self) -> IntegralJson {
        IntegralJson {
            value: self.value.to_json(),
            depth: self.depth,
            depth_needed: self.depth_needed,
            complete: self.complete,
            error_bound: self.error_bound,
        }
    }

    fn scaled(self, c: &Cyclo) -> Self {
        let m = c.max_abs_coefficient() * c.num_terms().max(1) as f64;
        IntegralValue { value: self.value * c.clone(), error_bound: self.error_bound * m, ..self }
    }

    fn plus(self, other: Self) -> Self {
        IntegralValue {
            value: self.value + other.value,
            depth: self.depth,
            depth_needed: self.depth_needed.max(other.depth_needed),
            complete: self.complete && other.complete,
            error_bound: self.error_bound + other.error_bound,
        }
    }
}

fn integral_f(m: &MatF) -> bool {
    m.entries().iter().all(|x| x.ord() >= 0)
}

fn integral_e(m: &MatE) -> bool {
    m.entries().iter().all(|x| x.val_e() >= 0)
}

fn guard(count: u64) -> Result<()> {
    if count > SIZE_GUARD {
        return Err(Error::TooLarge(format!("{count} candidate lattices exceed the guard of {SIZE_GUARD}")));
    }
    Ok(())
}

/// Upper unipotent `[[1, c], [0, 1]]` with `c` over `p^{-depth} O / O`
/// (the identity alone when `n = 1`).
fn unipotents(n: usize, like: &PadicNumber, depth: i64) -> Result<Vec<MatF>> {
    if n == 1 {
        return Ok(vec![Matrix::identity(1, like)]);
    }
    let depth = depth.max(0);
    let count = pow_p(like.p(), depth as u32);
    guard(count)?;
    let (one, zero) = (like.one_like(), like.from_i64_like(0));
    Ok((0..count).map(|k| Matrix::from_rows(vec![vec![one, like.from_i64_like(k as i64).shift(-depth)], vec![zero, one]]).unwrap()).collect())
}

/// Integral Hermite normal forms `[[p^i, e], [0, p^j]]` (`[p^i]` when
/// `n = 1`) with `i + j <= max_total`, paired with `i + j`.
fn hnf_list(n: usize, like: &PadicNumber, max_total: i64) -> Result<Vec<(MatF, i64)>> {
    let mut out = Vec::new();
    if max_total < 0 {
        return Ok(out);
    }
    let p = like.p();
    let pp = |k: i64| like.one_like().shift(k);
    if n == 1 {
        for i in 0..=max_total {
            out.push((Matrix::diag(&[pp(i)]), i));
        }
        return Ok(out);
    }
    let zero = like.from_i64_like(0);
    for i in 0..=max_total {
        for j in 0..=max_total - i {
            let count = pow_p(p, i as u32);
            guard(count)?;
            for e in 0..count {
                let m = Matrix::from_rows(vec![vec![pp(i), like.from_i64_like(e as i64)], vec![zero, pp(j)]])?;
                out.push((m, i + j));
            }
        }
    }
    Ok(out)
}

fn eta_p_pow(ext: &QuadExtension, like: &PadicNumber, k: i64) -> Result<i64> {
    let e = ext.eta(&like.one_like().shift(1))? as i64;
    Ok(if k.rem_euclid(2) == 0 { 1 } else { e })
}

/// Split diagonal data of `X = (A1, A2)`: the eigenvalues of `A1 A2`.
fn split_eigenvalues(x: &LieS) -> Result<Vec<PadicNumber>> {
    let a = x.product();
    match x.n() {
        1 => Ok(vec![*a.get(0, 0)]),
        2 => {
            let cp = a.charpoly();
            let (c0, c1) = (cp[0], cp[1]);
            let disc = c1 * c1 - c0.from_i64_like(4) * c0;
            let Some(r) = disc.sqrt()? else {
                return Err(Error::Unsupported("the lattice engine needs a split torus".into()));
            };
            let half = c0.from_i64_like(2).inv()?;
            let s = -c1;
            Ok(vec![(s + r) * half, (s - r) * half])
        }
        _ => Err(Error::Unsupported("the lattice engine covers n <= 2".into())),
    }
}

/// Exponent `v(a_1 - a_2)` bounding the unipotent depth (zero for `n = 1`).
fn depth_needed_f(d: &[PadicNumber]) -> Result<i64> {
    if d.len() == 1 {
        return Ok(0);
    }
    Ok((d[0] - d[1]).val()?.max(0))
}

/// `O^eta((1, D), f_0)` by normalizing `L2` to a unipotent lattice and
/// running over the `L1` above it.
pub fn count_pairs(d: &[PadicNumber], ext: &QuadExtension, depth: i64) -> Result<Cyclo> {
    let like = d[0];
    let n = d.len();
    let dm = Matrix::diag(d);
    let p = like.p();
    let total = d.iter().map(|a| a.ord()).sum::<i64>();
    if d.iter().any(|a| a.ord() < 0) {
        return Ok(Cyclo::zero(p));
    }
    let hnfs = hnf_list(n, &like, total)?;
    let mut acc = 0i64;
    // lattices above O^n are N^{-1} O^n with N determined up to left
    // multiplication by GL_n(O), so N runs over transposed normal forms
    let inverses: Vec<(MatF, i64)> = hnfs.iter().map(|(m, k)| Ok((m.transpose().inverse()?, *k))).collect::<Result<_>>()?;
    for h2 in unipotents(n, &like, depth)? {
        let conj = &(&h2.inverse()? * &dm) * &h2;
        for (ninv, k) in &inverses {
            if integral_f(&(&conj * ninv)) {
                acc += eta_p_pow(ext, &like, *k)?;
            }
        }
    }
    Ok(Cyclo::int(p, acc))
}

/// Independent count: `L1` unipotent, `L2 = h1 N O^n` below it.
pub fn count_pairs_oracle(d: &[PadicNumber], ext: &QuadExtension, depth: i64) -> Result<Cyclo> {
    let like = d[0];
    let n = d.len();
    let dm = Matrix::diag(d);
    let p = like.p();
    let total = d.iter().map(|a| a.ord().max(0)).sum::<i64>();
    let hnfs = hnf_list(n, &like, total)?;
    let mut acc = 0i64;
    for h1 in unipotents(n, &like, depth)? {
        let dh1 = &dm * &h1;
        for (nm, k) in &hnfs {
            let l2 = &h1 * nm;
            if integral_f(&(&l2.inverse()? * &dh1)) {
                acc += eta_p_pow(ext, &like, *k)?;
            }
        }
    }
    Ok(Cyclo::int(p, acc))
}

/// Scale terms of `f`: `f` must be a combination of `1[p^a L]`.
fn lattice_terms<P: CosetSpace>(f: &CosetFunction<P>) -> Result<Vec<(Cyclo, i64)>> {
    let mut out = Vec::new();
    for t in f.terms() {
        if !t.center.in_lattice(t.scale)? || !t.w.in_lattice(t.center.dual_scale(t.scale))? {
            return Err(Error::Unsupported("the lattice engine needs H(O)-invariant test functions".into()));
        }
        out.push((t.coeff.clone(), t.scale));
    }
    Ok(out)
}

/// `O^eta(X, f)` for `n <= 2`, split `X`, `f` a combination of `1[p^a L]`,
/// enumerating unipotent parameters down to `p^{-depth}`.
pub fn truncated_orbital(x: &LieS, f: &CosetFunction<LieS>, ext: &QuadExtension, depth: i64) -> Result<IntegralValue> {
    if ext.is_ramified() {
        return Err(Error::Unsupported("the lattice engine needs eta unramified".into()));
    }
    let n = x.n();
    let p = ext.p();
    let mut total = IntegralValue { value: Cyclo::zero(p), depth, depth_needed: 0, complete: true, error_bound: 0.0 };
    for (coeff, a) in lattice_terms(f)? {
        let xa = x.scale(&x.a1.get(0, 0).one_like().shift(-a));
        let k = kappa(ext, &xa)? as i64;
        let d = split_eigenvalues(&xa)?;
        let needed = depth_needed_f(&d)?;
        let value = count_pairs(&d, ext, depth)?.scale_int(k);
        let complete = depth >= needed || d.iter().any(|a| a.ord() < 0);
        let error_bound = if complete {
            0.0
        } else {
            let total: i64 = d.iter().map(|a| a.ord()).sum();
            let per_class = hnf_list(n, &d[0], total)?.len() as f64;
            ((p as f64).powi(needed as i32) - (p as f64).powi(depth.max(0) as i32)) * per_class
        };
        let part = IntegralValue { value, depth, depth_needed: needed, complete, error_bound };
        total = total.plus(part.scaled(&coeff));
    }
    Ok(total)
}

/// Representatives `c` of `varpi^{-depth} O_E / varpi^i O_E`.
fn e_classes(ext: &QuadExtension, like: &PadicNumber, depth: i64, i: i64) -> Result<Vec<ExtElement>> {
    let p = ext.p();
    let m = depth.max(0) + i;
    let (na, nb) = if ext.is_ramified() { ((m + 1) / 2, m / 2) } else { (m, m) };
    guard(pow_p(p, (na + nb) as u32))?;
    let shift = ext.uniformizer_pow(-depth.max(0))?;
    let mut out = Vec::new();
    for a in 0..pow_p(p, na as u32) {
        for b in 0..pow_p(p, nb as u32) {
            let x = ext.elem(like.from_i64_like(a as i64), like.from_i64_like(b as i64));
            out.push(x * shift);
        }
    }
    Ok(out)
}

/// `O(B, f_0')` for diagonal `B` with `n <= 2`.
pub fn count_lattices_prime(b: &MatE, ext: &QuadExtension, like: &PadicNumber, depth: i64) -> Result<Cyclo> {
    let n = b.rows();
    let p = ext.p();
    let mut acc = 0i64;
    let exps: Vec<i64> = if ext.is_ramified() { vec![0, 1] } else { vec![0] };
    if n == 1 {
        for &i in &exps {
            let h = Matrix::diag(&[ext.uniformizer_pow(i)?]);
            if integral_e(&(&(&h.inverse()? * b) * &conj_mat(&h))) {
                acc += 1;
            }
        }
        return Ok(Cyclo::int(p, acc));
    }
    let zero = ext.int(0, 0);
    for &i in &exps {
        for &j in &exps {
            for c in e_classes(ext, like, depth, i)? {
                let h = Matrix::from_rows(vec![vec![ext.uniformizer_pow(i)?, c], vec![zero, ext.uniformizer_pow(j)?]])?;
                if integral_e(&(&(&h.inverse()? * b) * &conj_mat(&h))) {
                    acc += 1;
                }
            }
        }
    }
    Ok(Cyclo::int(p, acc))
}

/// `O(Y, f')` for diagonal `Y` with `n <= 2` and `f'` a combination of
/// `1[varpi^a L']`.
pub fn truncated_orbital_prime(y: &LieSPrime, f: &CosetFunction<LieSPrime>, depth: i64) -> Result<IntegralValue> {
    let n = y.n();
    if n > 2 {
        return Err(Error::Unsupported("the lattice engine covers n <= 2".into()));
    }
    if n == 2 && !(y.b.get(0, 1).is_zero() && y.b.get(1, 0).is_zero()) {
        return Err(Error::Unsupported("the lattice engine on s' needs diagonal B".into()));
    }
    let ext = y.ext();
    let p = ext.p();
    let mut total = IntegralValue { value: Cyclo::zero(p), depth, depth_needed: 0, complete: true, error_bound: 0.0 };
    for (coeff, a) in lattice_terms(f)? {
        let s = ext.uniformizer_pow(-a)?;
        let b = y.b.map(|x| *x * s);
        let diag: Vec<ExtElement> = (0..n).map(|i| *b.get(i, i)).collect();
        let needed = if n == 2 { ext.e() * (diag[0].norm() - diag[1].norm()).val()?.max(0) } else { 0 };
        let value = count_lattices_prime(&b, &ext, &y.gamma, depth)?;
        let complete = depth >= needed || diag.iter().any(|x| x.val_e() < 0);
        let error_bound = if complete {
            0.0
        } else {
            let q = ext.q_e() as f64;
            let span = if ext.is_ramified() { 4.0 } else { 1.0 };
            (q.powi(needed as i32) - q.powi(depth.max(0) as i32)) * span
        };
        let part = IntegralValue { value, depth, depth_needed: needed, complete, error_bound };
        total = total.plus(part.scaled(&coeff));
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct FundLemmaRow2 {
    pub a: [ScalarJson; 2],
    pub in_norm_image: bool,
    pub lhs: IntegralJson,
    pub rhs: Option<IntegralJson>,
    /// Both sides exhaustive.
    pub decided: bool,
    pub pass: bool,
}

/// The fundamental lemma at `n = 2` on split `A = diag(a1, a2)`: compares
/// `kappa(X) O^eta(X, f_0)` for `X = (1, A)` with `O(B, f_0')` for
/// `B = diag(b1, b2)`, `N(b_i) = a_i`, or with zero when no such `B` exists.
pub fn fund_lemma_check_n2(cfg: &FieldConfig, a1: &PadicNumber, a2: &PadicNumber, depth: i64) -> Result<FundLemmaRow2> {
    let ext = cfg.ext();
    if ext.is_ramified() {
        return Err(Error::Unsupported("the fundamental lemma is checked for unramified E only".into()));
    }
    if !cfg.gamma().eq_at_precision(&cfg.int(1)) {
        return Err(Error::Unsupported("the fundamental lemma is checked for gamma = 1".into()));
    }
    let one = Matrix::identity(2, &cfg.int(1));
    let x = LieS::new(one, Matrix::diag(&[*a1, *a2]))?;
    let k = kappa(&ext, &x)?;
    let lhs = truncated_orbital(&x, &CosetFunction::standard(&x), &ext, depth)?.scaled(&Cyclo::int(ext.p(), k as i64));
    let pre = (norm_preimage(&ext, a1)?, norm_preimage(&ext, a2)?);
    let rhs = match pre {
        (Some(b1), Some(b2)) => {
            let y = LieSPrime::new(Matrix::diag(&[b1, b2]), cfg.gamma())?;
            Some(truncated_orbital_prime(&y, &CosetFunction::standard(&y), ext.e() * depth)?)
        }
        _ => None,
    };
    let decided = lhs.complete && rhs.as_ref().is_none_or(|r| r.complete);
    let pass = decided && rhs.as_ref().map_or(lhs.value.is_zero(), |r| r.value == lhs.value);
    Ok(FundLemmaRow2 {
        a: [a1.to_json(), a2.to_json()],
        in_norm_image: rhs.is_some(),
        lhs: lhs.to_json(),
        rhs: rhs.map(|r| r.to_json()),
        decided,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbital::orbital_n1;
    use crate::padic::DeltaClass;

    fn cfg(p: u32) -> FieldConfig {
        FieldConfig::new(p, 16, DeltaClass::U0).unwrap()
    }

    #[test]
    fn rank_one_matches_exact_engine() {
        let c = cfg(3);
        let ext = c.ext();
        for v in 0..5 {
            let x = LieS::scalar(c.int(2), c.p_pow(v));
            let f = CosetFunction::standard(&x);
            let t = truncated_orbital(&x, &f, &ext, v + 1).unwrap();
            assert!(t.complete);
            assert_eq!(t.value, orbital_n1(&x, &f, true, &ext).unwrap());
        }
    }

    #[test]
    fn two_enumerations_agree() {
        for p in [3, 5] {
            let c = cfg(p);
            let ext = c.ext();
            for (u, v1, v2) in [(1, 0, 0), (2, 0, 1), (1, 1, 2), (2, 2, 2), (1, 0, 3)] {
                let d = [c.p_pow(v1), c.int(u + 1) * c.p_pow(v2)];
                let depth = depth_needed_f(&d).unwrap();
                assert_eq!(count_pairs(&d, &ext, depth).unwrap(), count_pairs_oracle(&d, &ext, depth).unwrap(), "p={p} {d:?}");
            }
        }
    }

    #[test]
    fn complete_values_are_stable() {
        let c = cfg(3);
        let ext = c.ext();
        let x = LieS::new(Matrix::identity(2, &c.int(1)), Matrix::diag(&[c.int(1), c.int(10)])).unwrap();
        let f = CosetFunction::standard(&x);
        let a = truncated_orbital(&x, &f, &ext, 2).unwrap();
        let b = truncated_orbital(&x, &f, &ext, 3).unwrap();
        assert!(a.complete && b.complete);
        assert_eq!(a.value, b.value);
        let shallow = truncated_orbital(&x, &f, &ext, 0).unwrap();
        assert!(!shallow.complete && shallow.error_bound > 0.0);
    }

    #[test]
    fn fundamental_lemma_rank_two() {
        for p in [3, 5] {
            let c = cfg(p);
            for (j1, j2) in [(0, 0), (0, 2), (1, 1), (2, 0), (0, 1), (1, 3)] {
                let a1 = c.p_pow(j1);
                let a2 = c.int(c.u0() as i64) * c.p_pow(j2) + c.int(if j1 == j2 { 1 } else { 0 });
                let row = fund_lemma_check_n2(&c, &a1, &a2, 4).unwrap();
                assert!(row.decided && row.pass, "p={p} {row:?}");
            }
        }
    }
}
