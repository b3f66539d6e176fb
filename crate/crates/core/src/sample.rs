//! Random data for the verification grids, drawn from a caller-supplied RNG
//! so that every run is reproducible from its seed.

use rand::Rng;

use crate::coset::{CosetFunction, CosetSpace};
use crate::cyclo::Cyclo;
use crate::ext::{ExtElement, QuadExtension};
use crate::matching::{is_rss, is_rss_prime, nonzero};
use crate::matrix::{MatE, MatF, Matrix};
use crate::padic::{pow_p, FieldConfig, PadicNumber};
use crate::pairs::{HElem, LieS, LieSPrime};

/// Attempts before a rejection sampler gives up.
const MAX_TRIES: usize = 10_000;

/// A unit mantissa modulo `p^prec`.
pub fn unit<R: Rng>(rng: &mut R, p: u32, prec: u32) -> u64 {
    let m = pow_p(p, prec);
    loop {
        let u = rng.gen_range(1..m);
        if u % p as u64 != 0 {
            return u;
        }
    }
}

/// `p^v u` with `v` uniform in `vmin..=vmax` and `u` a random unit.
pub fn padic<R: Rng>(rng: &mut R, cfg: &FieldConfig, vmin: i64, vmax: i64) -> PadicNumber {
    let v = rng.gen_range(vmin..=vmax);
    let u = unit(rng, cfg.p(), cfg.precision());
    PadicNumber::from_unit(cfg.p(), v, u, cfg.precision()).expect("unit mantissa")
}

/// Like [`padic`] but exactly zero with probability `1/4`.
pub fn padic_or_zero<R: Rng>(rng: &mut R, cfg: &FieldConfig, vmin: i64, vmax: i64) -> PadicNumber {
    if rng.gen_ratio(1, 4) {
        PadicNumber::zero(cfg.p())
    } else {
        padic(rng, cfg, vmin, vmax)
    }
}

/// A small integer mantissa `u p^v`, for inputs that should stay readable.
pub fn small<R: Rng>(rng: &mut R, cfg: &FieldConfig, vmin: i64, vmax: i64) -> PadicNumber {
    let p = cfg.p() as i64;
    let mut u = rng.gen_range(1..p * p);
    while u % p == 0 {
        u = rng.gen_range(1..p * p);
    }
    let s = if rng.gen() { 1 } else { -1 };
    cfg.int(s * u) * cfg.p_pow(rng.gen_range(vmin..=vmax))
}

/// A nonzero element of `E`.
pub fn ext_elem<R: Rng>(rng: &mut R, cfg: &FieldConfig, ext: &QuadExtension, vmin: i64, vmax: i64) -> ExtElement {
    loop {
        let x = ext.elem(padic_or_zero(rng, cfg, vmin, vmax), padic_or_zero(rng, cfg, vmin, vmax));
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn mat_f<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> MatF {
    Matrix::from_fn(n, n, |_, _| padic_or_zero(rng, cfg, vmin, vmax))
}

pub fn mat_e<R: Rng>(rng: &mut R, cfg: &FieldConfig, ext: &QuadExtension, n: usize, vmin: i64, vmax: i64) -> MatE {
    Matrix::from_fn(n, n, |_, _| ext.elem(padic_or_zero(rng, cfg, vmin, vmax), padic_or_zero(rng, cfg, vmin, vmax)))
}

pub fn invertible_f<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> MatF {
    for _ in 0..MAX_TRIES {
        let m = mat_f(rng, cfg, n, vmin, vmax);
        if nonzero(&m.det()).unwrap_or(false) {
            return m;
        }
    }
    panic!("no invertible matrix found");
}

pub fn h_elem<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> HElem {
    HElem::new(invertible_f(rng, cfg, n, vmin, vmax), invertible_f(rng, cfg, n, vmin, vmax)).expect("square blocks")
}

/// A regular semisimple element of `s`.
pub fn lie_s_rss<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> LieS {
    for _ in 0..MAX_TRIES {
        let x = LieS::new(mat_f(rng, cfg, n, vmin, vmax), mat_f(rng, cfg, n, vmin, vmax)).expect("square blocks");
        if is_rss(&x).unwrap_or(false) {
            return x;
        }
    }
    panic!("no regular semisimple element found");
}

/// A regular semisimple element of `s'` for the configured `gamma`.
pub fn lie_sprime_rss<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> LieSPrime {
    let ext = cfg.ext();
    for _ in 0..MAX_TRIES {
        let y = LieSPrime::new(mat_e(rng, cfg, &ext, n, vmin, vmax), cfg.gamma()).expect("square block");
        if is_rss_prime(&y).unwrap_or(false) {
            return y;
        }
    }
    panic!("no regular semisimple element found");
}

/// A coefficient `a / b` with small numerator and a power of `p` or `1` below.
pub fn coefficient<R: Rng>(rng: &mut R, p: u32) -> Cyclo {
    let a = rng.gen_range(-4i64..=4);
    let a = if a == 0 { 1 } else { a };
    let b = if rng.gen() { 1 } else { p as i64 };
    let c = Cyclo::ratio(p, a, b);
    // occasionally a root of unity in front
    if rng.gen_ratio(1, 3) {
        c * Cyclo::mu8(p, rng.gen_range(0..8))
    } else {
        c
    }
}

/// A combination of `terms` twisted coset indicators
/// `c psi(<w, X>) 1[X in center + Lambda_a]` with points from `point`.
pub fn coset_function<P, R, G>(rng: &mut R, origin: &P, terms: usize, scales: (i64, i64), mut point: G) -> CosetFunction<P>
where
    P: CosetSpace,
    R: Rng,
    G: FnMut(&mut R) -> P,
{
    let mut f = CosetFunction::zero(origin);
    for _ in 0..terms {
        let c = coefficient(rng, origin.p());
        let w = if rng.gen_ratio(1, 3) { origin.origin() } else { point(rng) };
        let center = point(rng);
        let a = rng.gen_range(scales.0..=scales.1);
        f.push(c, w, center, a);
    }
    f
}

/// A point of `s` with entries of valuation in `vmin..=vmax` (or zero).
pub fn point_s<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> LieS {
    LieS::new(mat_f(rng, cfg, n, vmin, vmax), mat_f(rng, cfg, n, vmin, vmax)).expect("square blocks")
}

pub fn point_sprime<R: Rng>(rng: &mut R, cfg: &FieldConfig, n: usize, vmin: i64, vmax: i64) -> LieSPrime {
    LieSPrime::new(mat_e(rng, cfg, &cfg.ext(), n, vmin, vmax), cfg.gamma()).expect("square block")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::DeltaClass;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_are_reproducible() {
        let c = FieldConfig::new(5, 10, DeltaClass::U0).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..5).map(|_| padic(&mut rng, &c, -2, 2).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        assert_ne!(draw(7), draw(8));
    }

    #[test]
    fn rss_samplers_return_rss() {
        let c = FieldConfig::new(3, 10, DeltaClass::P).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=2 {
            assert!(is_rss(&lie_s_rss(&mut rng, &c, n, 0, 2)).unwrap());
            assert!(is_rss_prime(&lie_sprime_rss(&mut rng, &c, n, 0, 2)).unwrap());
        }
    }
}
