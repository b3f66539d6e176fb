//! Weil indices of the bracket forms `q_{X,Y}`, the cross-side constant and
//! the small-ball measurement of the Fourier kernel against its asymptotic
//! expansion for deep dilations.

use serde::Serialize;

use crate::coset::{CosetFunction, CosetSpace};
use crate::cyclo::{Cyclo, CycloJson};
use crate::error::{Error, Result};
use crate::ext::QuadExtension;
use crate::matching::{kappa, lemma_conjugator, transport};
use crate::matrix::{MatE, MatF, Matrix};
use crate::orbital::{measure_factor_s, measure_factor_sprime, orbital_n1, orbital_n1_prime, Measure, ScaledJson, ScaledValue};
use crate::padic::{psi, PadicNumber, ScalarJson};
use crate::pairs::{bracket, h_basis, hprime_basis, trace_gram, trace_gram_e, LieS, LieSPrime, PointJson};
use crate::weil::{diagonalize_with_radical, gamma_of_space, weil_index_oracle, Mu8, QuadraticForm};

/// Deviation allowed between the measured kernel and the asymptotic sum.
pub const LIMIT_TOLERANCE: f64 = 1e-9;

fn gamma_of_gram(gram: MatF, n: usize) -> Result<Mu8> {
    let d = diagonalize_with_radical(&QuadraticForm::new(gram)?)?;
    if d.radical != n {
        return Err(Error::Invalid(format!("q_(X,Y) has radical of dimension {}, expected {n}", d.radical)));
    }
    weil_index_oracle(&d.coeffs)
}

/// `gamma(q_{X,Y})` with `q_{X,Y}(Z, Z') = tr([Z, X][Y, Z'])` on `h / t`.
/// The form is built on all of `h`; its radical is `t`.
pub fn gamma_pair(x: &LieS, y: &LieS) -> Result<Mu8> {
    let n = x.n();
    let like = x.a1.get(0, 0);
    let (xe, ye) = (x.embed(), y.embed());
    let basis = h_basis(n, like);
    let left: Vec<MatF> = basis.iter().map(|z| bracket(z, &xe)).collect();
    let right: Vec<MatF> = basis.iter().map(|z| bracket(&ye, z)).collect();
    let d = basis.len();
    let gram = Matrix::from_fn(d, d, |i, j| (&left[i] * &right[j]).trace());
    gamma_of_gram(gram, n)
}

/// The same on `h' / t'` for `X, Y` in `s'`.
pub fn gamma_pair_prime(x: &LieSPrime, y: &LieSPrime) -> Result<Mu8> {
    let n = x.n();
    let basis = hprime_basis(n, x.ext(), &x.gamma);
    let (xe, ye) = (x.embed(), y.embed());
    let left: Vec<MatE> = basis.iter().map(|z| bracket(z, &xe)).collect();
    let right: Vec<MatE> = basis.iter().map(|z| bracket(&ye, z)).collect();
    let d = basis.len();
    let mut rows = Vec::with_capacity(d);
    for l in &left {
        let mut row = Vec::with_capacity(d);
        for r in &right {
            let t = (l * r).trace();
            if !t.b.is_zero() {
                return Err(Error::Internal("bracket form left F".into()));
            }
            row.push(t.a);
        }
        rows.push(row);
    }
    gamma_of_gram(Matrix::from_rows(rows)?, n)
}

/// `gamma(h)` for the trace form on `h = gl_n + gl_n`.
pub fn gamma_h(n: usize, like: &PadicNumber) -> Result<Mu8> {
    gamma_of_space(&trace_gram(&h_basis(n, like)))
}

/// `gamma(h')` for the trace form on `h' = gl_n(E)` inside `gl_n(D)`.
pub fn gamma_hprime(n: usize, ext: QuadExtension, gamma: &PadicNumber) -> Result<Mu8> {
    gamma_of_space(&trace_gram_e(&hprime_basis(n, ext, gamma))?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossSideReport {
    pub x: PointJson,
    pub u: PointJson,
    pub pairing_s: ScalarJson,
    pub pairing_sprime: ScalarJson,
    pub disc_exponent_s: i64,
    pub disc_exponent_sprime: i64,
    pub gamma_xu: u8,
    pub gamma_yv: u8,
    /// `gamma(h) / gamma(h')`.
    pub constant: u8,
    pub pairing_pass: bool,
    pub disc_pass: bool,
    pub gamma_pass: bool,
    /// `eta(alpha(X) alpha(U))` at `n = 1`, the factor that closes the
    /// gamma relation when the plain constant does not.
    pub eta_correction: Option<i8>,
    pub corrected_gamma_pass: Option<bool>,
}

impl CrossSideReport {
    pub fn pass(&self) -> bool {
        self.pairing_pass && self.disc_pass && self.gamma_pass
    }
}

/// Transports `(Y, V)` to `(X, U)` through the conjugator `x = diag(1, gamma B)`
/// and compares pairings, discriminants and the bracket-form Weil indices.
/// `V` must lie in the Cartan subspace of `Y`.
pub fn cross_side_check(y: &LieSPrime, v: &LieSPrime) -> Result<CrossSideReport> {
    let n = y.n();
    let ext = y.ext();
    let (x, conj) = lemma_conjugator(y)?;
    let u = transport(&conj, v)?;
    let (ps, pp) = (x.pairing(&u), y.pairing(v));
    let (ds, dp) = (x.disc_factor()?, y.disc_factor()?);
    let gxu = gamma_pair(&x, &u)?;
    let gyv = gamma_pair_prime(y, v)?;
    let c = gamma_h(n, &y.gamma)? / gamma_hprime(n, ext, &y.gamma)?;
    let gamma_pass = gxu == c * gyv;
    let (eta_correction, corrected_gamma_pass) = if n == 1 {
        // alpha(X) alpha(U) = 2 <X, U> on the rank-one Cartan
        let e = ext.eta(&(ps * x.a1.get(0, 0).from_i64_like(2)))?;
        (Some(e), Some(gxu == (c * gyv).signed(e)))
    } else {
        (None, None)
    };
    Ok(CrossSideReport {
        x: x.to_json(),
        u: u.to_json(),
        pairing_s: ps.to_json(),
        pairing_sprime: pp.to_json(),
        disc_exponent_s: ds.exponent,
        disc_exponent_sprime: dp.exponent,
        gamma_xu: gxu.index(),
        gamma_yv: gyv.index(),
        constant: c.index(),
        pairing_pass: ps.eq_at_precision(&pp),
        disc_pass: ds == dp,
        gamma_pass,
        eta_correction,
        corrected_gamma_pass,
    })
}

fn scalar(x: &LieS) -> Result<(PadicNumber, PadicNumber)> {
    if x.n() != 1 {
        return Err(Error::Unsupported("the limit formula is checked at n = 1".into()));
    }
    Ok((*x.a1.get(0, 0), *x.a2.get(0, 0)))
}

fn mu8_cyclo(p: u32, g: Mu8) -> Cyclo {
    Cyclo::mu8(p, g.index())
}

/// The asymptotic sum on `s` for `Z = mu X` against `Y`: the points of the
/// orbit of `Z` in the Cartan line `F Y` are `(+-l x2, +-l y2)` with
/// `l^2 = xy / (x2 y2)`, reached by `s = +-l x2 / x`.
pub fn limit_rhs_s(z: &LieS, y: &LieS, ext: &QuadExtension) -> Result<Cyclo> {
    let (zx, zy) = scalar(z)?;
    let (yx, yy) = scalar(y)?;
    let p = ext.p();
    let q = (zx * zy).div(&(yx * yy))?;
    let Some(l) = q.sqrt()? else {
        return Ok(Cyclo::zero(p));
    };
    let mut acc = Cyclo::zero(p);
    for sign in [1i64, -1] {
        let ls = l * l.from_i64_like(sign);
        let s = (ls * yx).div(&zx)?;
        let hz = LieS::scalar(ls * yx, ls * yy);
        let e = ext.eta(&s)? as i64;
        let g = gamma_pair(&hz, y)?;
        let ch = psi(&hz.pairing(y))?;
        acc = acc + (mu8_cyclo(p, g) * Cyclo::from_character(&ch)).scale_int(e);
    }
    Ok(acc.scale_int(kappa(ext, y)? as i64))
}

/// The same on `s'`: the orbit `{b w : N(w) = 1}` meets `F c` in `+-l c`
/// with `l^2 = N(b) / N(c)`.
pub fn limit_rhs_sprime(z: &LieSPrime, y: &LieSPrime) -> Result<Cyclo> {
    if z.n() != 1 {
        return Err(Error::Unsupported("the limit formula is checked at n = 1".into()));
    }
    let p = z.ext().p();
    let (b, c) = (z.b.get(0, 0), y.b.get(0, 0));
    let Some(l) = b.norm().div(&c.norm())?.sqrt()? else {
        return Ok(Cyclo::zero(p));
    };
    let mut acc = Cyclo::zero(p);
    for sign in [1i64, -1] {
        let hz = y.scale(&(l * l.from_i64_like(sign)));
        let g = gamma_pair_prime(&hz, y)?;
        let ch = psi(&hz.pairing(y))?;
        acc = acc + mu8_cyclo(p, g) * Cyclo::from_character(&ch);
    }
    Ok(acc)
}

/// Shrinks the ball `Y + p^r L` from `r = start` until the measurement repeats
/// exactly at two consecutive radii; gives up at `r = max_scale`.
fn shrink_ball(start: i64, max_scale: i64, mut measure: impl FnMut(i64) -> Result<ScaledValue>) -> Result<(ScaledValue, i64)> {
    let mut prev = measure(start)?;
    for r in start + 1..=max_scale {
        let cur = measure(r)?;
        if cur == prev {
            return Ok((cur, r - 1));
        }
        prev = cur;
    }
    Err(Error::Precision(format!("kernel did not stabilize on balls down to scale {max_scale}")))
}

/// Measured kernel on `s`:
/// `I^eta(Z, f^) / (vol(p^r L) kappa(Y) |D(Y)|^{-1/2})` with `f = 1[Y + p^r L]`
/// and the exponential-compatible measures. Returns the value and the radius.
pub fn measured_kernel_s(z: &LieS, y: &LieS, ext: &QuadExtension, max_scale: i64) -> Result<(ScaledValue, i64)> {
    let p = ext.p();
    let k = kappa(ext, y)? as i64;
    let dz = z.disc_factor()?.exponent;
    let dy = y.disc_factor()?.exponent;
    let factor = measure_factor_s(p, Measure::ExpCompatible);
    let (zx, zy) = scalar(z)?;
    // coarser balls cannot resolve the characters psi(<Z', .>) on the orbit
    let start = 1 - zx.val()?.min(zy.val()?).min(0);
    shrink_ball(start, max_scale, |r| {
        let f = CosetFunction::indicator(y, r);
        let o = orbital_n1(z, &f.fourier()?, true, ext)?;
        let inv_vol = Cyclo::p_half_pow(p, -y.vol_half_exp(r));
        let v = ScaledValue::exact((o * inv_vol).scale_int(k));
        Ok(v.mul(&factor).mul(&ScaledValue { value: Cyclo::one(p), quarter_exp: -(dz + dy) }))
    })
}

pub fn measured_kernel_sprime(z: &LieSPrime, y: &LieSPrime, max_scale: i64) -> Result<(ScaledValue, i64)> {
    let ext = z.ext();
    let p = ext.p();
    let dz = z.disc_factor()?.exponent;
    let dy = y.disc_factor()?.exponent;
    let factor = measure_factor_sprime(&ext, Measure::ExpCompatible);
    let start = 1 - z.b.get(0, 0).val_e().min(0);
    shrink_ball(start, max_scale, |r| {
        let f = CosetFunction::indicator(y, r);
        let o = orbital_n1_prime(z, &f.fourier()?)?;
        let inv_vol = Cyclo::p_half_pow(p, -y.vol_half_exp(r));
        let v = ScaledValue::exact(o * inv_vol);
        Ok(v.mul(&factor).mul(&ScaledValue { value: Cyclo::one(p), quarter_exp: -(dz + dy) }))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelSample {
    pub v_mu: i64,
    pub ball_scale: i64,
    pub measured: ScaledJson,
    pub predicted: CycloJson,
    pub predicted_complex: [f64; 2],
    pub deviation: f64,
    /// Only recorded on `s`: `|i(X, mu Y) - kappa(mu Y) kappa(Y) i(mu X, Y)|`.
    pub scaling_deviation: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub side: &'static str,
    pub x: PointJson,
    pub y: PointJson,
    /// The orbit of `X` misses the Cartan subspace of `Y`.
    pub vanishing: bool,
    pub samples: Vec<KernelSample>,
    /// Least `N` with every sample at `v(mu) <= -N` within tolerance, when
    /// at least two samples qualify.
    pub stable_from: Option<i64>,
    /// The scan was too short to see stabilization.
    pub inconclusive: bool,
    pub pass: bool,
}

fn complex_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// In the vanishing case anything but an exact zero counts as a positive deviation.
fn deviation(meas: &ScaledValue, vanishing: bool, mc: (f64, f64), rc: (f64, f64)) -> f64 {
    let d = complex_dist(mc, rc);
    match (vanishing, meas.is_zero()) {
        (true, true) => 0.0,
        (true, false) => d.max(f64::MIN_POSITIVE),
        _ => d,
    }
}

fn finish(side: &'static str, x: PointJson, y: PointJson, vanishing: bool, samples: Vec<KernelSample>) -> LimitReport {
    // samples run from v(mu) = -1 downward
    let ok = |s: &KernelSample| {
        s.deviation <= LIMIT_TOLERANCE && s.scaling_deviation.is_none_or(|d| d <= LIMIT_TOLERANCE) && (!vanishing || s.deviation == 0.0)
    };
    let good_tail = samples.iter().rev().take_while(|s| ok(s)).count();
    let stable_from = if good_tail >= 2 { Some(-samples[samples.len() - good_tail].v_mu) } else { None };
    LimitReport { side, x, y, vanishing, samples, stable_from, inconclusive: stable_from.is_none(), pass: stable_from.is_some() }
}

/// Compares the measured `i^eta(mu X, Y)` with the asymptotic sum for
/// `v(mu) = -1, ..., -depth`, with `mu = p^{v(mu)}`. Also compares
/// `i^eta(X, mu Y)` with `kappa(mu Y) kappa(Y) i^eta(mu X, Y)`.
pub fn limit_formula_check_s(x: &LieS, y: &LieS, ext: &QuadExtension, depth: i64, max_scale: i64) -> Result<LimitReport> {
    let (xx, _) = scalar(x)?;
    let mut samples = Vec::new();
    let mut vanishing = false;
    for j in 1..=depth {
        let mu = xx.one_like().shift(-j);
        let z = x.scale(&mu);
        let (meas, r) = measured_kernel_s(&z, y, ext, max_scale)?;
        let rhs = limit_rhs_s(&z, y, ext)?;
        vanishing = rhs.is_zero();
        let (mc, rc) = (meas.to_complex(), rhs.to_complex());
        let deviation = deviation(&meas, vanishing, mc, rc);
        let my = y.scale(&mu);
        let (other, _) = measured_kernel_s(x, &my, ext, max_scale)?;
        let sign = (kappa(ext, &my)? * kappa(ext, y)?) as f64;
        let oc = other.to_complex();
        let scaling = complex_dist(oc, (sign * mc.0, sign * mc.1));
        samples.push(KernelSample {
            v_mu: -j,
            ball_scale: r,
            measured: meas.to_json(),
            predicted: rhs.to_json(),
            predicted_complex: [rc.0, rc.1],
            deviation,
            scaling_deviation: Some(scaling),
        });
    }
    Ok(finish("s", x.to_json(), y.to_json(), vanishing, samples))
}

pub fn limit_formula_check_sprime(x: &LieSPrime, y: &LieSPrime, depth: i64, max_scale: i64) -> Result<LimitReport> {
    if x.n() != 1 {
        return Err(Error::Unsupported("the limit formula is checked at n = 1".into()));
    }
    let mut samples = Vec::new();
    let mut vanishing = false;
    for j in 1..=depth {
        let mu = x.gamma.one_like().shift(-j);
        let z = x.scale(&mu);
        let (meas, r) = measured_kernel_sprime(&z, y, max_scale)?;
        let rhs = limit_rhs_sprime(&z, y)?;
        vanishing = rhs.is_zero();
        let (mc, rc) = (meas.to_complex(), rhs.to_complex());
        let deviation = deviation(&meas, vanishing, mc, rc);
        let (other, _) = measured_kernel_sprime(x, &y.scale(&mu), max_scale)?;
        let scaling = complex_dist(other.to_complex(), mc);
        samples.push(KernelSample {
            v_mu: -j,
            ball_scale: r,
            measured: meas.to_json(),
            predicted: rhs.to_json(),
            predicted_complex: [rc.0, rc.1],
            deviation,
            scaling_deviation: Some(scaling),
        });
    }
    Ok(finish("s'", x.to_json(), y.to_json(), vanishing, samples))
}
