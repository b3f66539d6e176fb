use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use padic_transfer::coset::CosetSpace;
use padic_transfer::matching::{eta_h, kappa};
use padic_transfer::padic::{hilbert_symbol, DeltaClass, FieldConfig, PadicNumber};
use padic_transfer::sample;
use padic_transfer::weil::gauss_sum;

const PRIMES: [u32; 3] = [3, 5, 7];
const CLASSES: [DeltaClass; 3] = [DeltaClass::U0, DeltaClass::P, DeltaClass::U0p];

fn cfg(pi: usize, ci: usize) -> FieldConfig {
    FieldConfig::new(PRIMES[pi], 12, CLASSES[ci]).unwrap()
}

fn num(c: &FieldConfig, v: i64, u: u64) -> PadicNumber {
    let p = c.p() as u64;
    // force a unit mantissa
    let u = if u.is_multiple_of(p) { u + 1 } else { u };
    PadicNumber::from_unit(c.p(), v, u, c.precision()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arithmetic_round_trips(pi in 0..3usize, v1 in -4i64..5, u1 in 1u64..5000, v2 in -4i64..5, u2 in 1u64..5000) {
        let c = cfg(pi, 0);
        let (a, b) = (num(&c, v1, u1), num(&c, v2, u2));
        prop_assert_eq!((a * b).div(&b).unwrap(), a);
        prop_assert!((a + b - b - a).is_zero());
        prop_assert_eq!(c.parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn hilbert_symbol_is_a_symmetric_pairing(pi in 0..3usize, v in prop::array::uniform3(-3i64..4), u in prop::array::uniform3(1u64..5000)) {
        let c = cfg(pi, 0);
        let [a, b, d] = [num(&c, v[0], u[0]), num(&c, v[1], u[1]), num(&c, v[2], u[2])];
        let h = |x: &PadicNumber, y: &PadicNumber| hilbert_symbol(x, y).unwrap();
        prop_assert_eq!(h(&a, &b), h(&b, &a));
        prop_assert_eq!(h(&(a * b), &d), h(&a, &d) * h(&b, &d));
        prop_assert_eq!(h(&a, &(-a)), 1);
        prop_assert_eq!(h(&a, &(a * a)), 1);
    }

    #[test]
    fn weil_index_is_lattice_independent(pi in 0..3usize, seed: u64, dim in 1usize..4) {
        let c = cfg(pi, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q: Vec<PadicNumber> = (0..dim).map(|_| sample::padic(&mut rng, &c, -2, 2)).collect();
        let (a, b) = (gauss_sum(&q, 0).unwrap(), gauss_sum(&q, 2).unwrap());
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn kappa_transforms_by_eta(pi in 0..2usize, ci in 0..3usize, seed: u64, n in 1usize..3) {
        let c = cfg(pi, ci);
        let ext = c.ext();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::lie_s_rss(&mut rng, &c, n, -1, 2);
        let h = sample::h_elem(&mut rng, &c, n, -1, 1);
        let xh = x.act(&h).unwrap();
        prop_assert_eq!(kappa(&ext, &xh).unwrap(), eta_h(&ext, &h).unwrap() * kappa(&ext, &x).unwrap());
    }

    #[test]
    fn fourier_transform_squares_to_reflection(pi in 0..2usize, ci in 0..3usize, seed: u64, terms in 1usize..4, prime_side: bool) {
        let c = cfg(pi, ci);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ok = if prime_side {
            let o = sample::point_sprime(&mut rng, &c, 1, 0, 0);
            let f = sample::coset_function(&mut rng, &o, terms, (-1, 2), |r| sample::point_sprime(r, &c, 1, -1, 2));
            let probe = sample::point_sprime(&mut rng, &c, 1, -1, 2);
            let ff = f.fourier().unwrap().fourier().unwrap();
            ff.same_as(&f.reflected()).unwrap() && ff.eval(&probe).unwrap() == f.eval(&probe.negated()).unwrap()
        } else {
            let o = sample::point_s(&mut rng, &c, 1, 0, 0);
            let f = sample::coset_function(&mut rng, &o, terms, (-1, 2), |r| sample::point_s(r, &c, 1, -1, 2));
            let probe = sample::point_s(&mut rng, &c, 1, -1, 2);
            let ff = f.fourier().unwrap().fourier().unwrap();
            ff.same_as(&f.reflected()).unwrap() && ff.eval(&probe).unwrap() == f.eval(&probe.negated()).unwrap()
        };
        prop_assert!(ok);
    }
}
