//! The mode engine against independent oracles: the commutation recursion for
//! ground-ring modes and the derivative rule for deep ground modes.

use proptest::prelude::*;
use tcdo_core::modespace::properties::{check_borcherds, check_commutator, check_translation_covariance};
use tcdo_core::modespace::sampling::StateSampler;
use tcdo_core::modespace::{mono, FreeState, Generator, Ring};
use tcdo_core::scalar::{q_frac, q_int};

fn a() -> FreeState {
    FreeState::generator(Generator::A)
}

/// `[a_(r), f_(m)] u = (f')_(r+m) u` for `f = x^k`.
fn commutation_oracle_holds(k: i64, r: i64, m: i64, u: &FreeState) -> bool {
    let f = FreeState::ground(k);
    let df = FreeState::ground(k - 1).scale(&q_int(k));
    let lhs = &a().apply_mode(r, &f.apply_mode(m, u).unwrap()).unwrap()
        - &f.apply_mode(m, &a().apply_mode(r, u).unwrap()).unwrap();
    let rhs = df.apply_mode(r + m, u).unwrap();
    lhs == rhs
}

#[test]
fn ground_modes_satisfy_commutation_recursion() {
    let mut sampler = StateSampler::new(11, 3);
    for _ in 0..60 {
        let u = sampler.state(Ring::Laurent, true);
        let k = sampler.int_in(-2, 3);
        let r = sampler.int_in(0, 2);
        let m = sampler.int_in(-3, 2);
        assert!(commutation_oracle_holds(k, r, m, &u), "k={k} r={r} m={m} u={u}");
    }
}

#[test]
fn deep_ground_modes_follow_the_derivative_rule() {
    // f_(m) = (1/(-m-1)) (∂f)_(m+1) for m <= -2
    let mut sampler = StateSampler::new(12, 3);
    for _ in 0..60 {
        let u = sampler.state(Ring::Laurent, true);
        let k = sampler.int_in(-2, 3);
        let m = sampler.int_in(-4, -2);
        let f = FreeState::ground(k);
        let lhs = f.apply_mode(m, &u).unwrap();
        let rhs = f.translation().apply_mode(m + 1, &u).unwrap().scale(&q_frac(1, -m - 1));
        assert_eq!(lhs, rhs, "k={k} m={m} u={u}");
    }
}

#[test]
fn apply_mode_examples() {
    assert_eq!(a().apply_mode(0, &FreeState::ground(1)).unwrap(), FreeState::vacuum());
    assert!(a().apply_mode(1, &a()).unwrap().is_zero());
    let field = mono(&[1], &[], &[], 2);
    assert_eq!(field.apply_mode(0, &FreeState::ground(1)).unwrap(), FreeState::ground(2));
}

#[test]
fn borcherds_on_generators_exhaustive() {
    let x = FreeState::generator(Generator::B);
    let vac = FreeState::vacuum();
    for m in -3..=3 {
        for n in -3..=3 {
            for k in -3..=3 {
                assert!(check_borcherds(&a(), &x, &vac, m, n, k).unwrap(), "({m},{n},{k})");
                assert!(check_borcherds(&x, &a(), &a(), m, n, k).unwrap(), "({m},{n},{k})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn borcherds_on_random_triples(seed in any::<u64>(), m in -2i64..=2, n in -2i64..=2, k in -2i64..=2) {
        let mut s = StateSampler::new(seed, 2);
        let ring = s.ring();
        let (x, y, z) = (s.state(ring, true), s.state(ring, true), s.target(ring));
        prop_assert!(check_borcherds(&x, &y, &z, m, n, k).unwrap());
    }

    #[test]
    fn translation_and_commutator(seed in any::<u64>(), r in -2i64..=2, m in -2i64..=2) {
        let mut s = StateSampler::new(seed, 2);
        let ring = s.ring();
        let (w, v, u) = (s.state(ring, true), s.state(ring, true), s.target(ring));
        prop_assert!(check_translation_covariance(&w, m, &u).unwrap());
        prop_assert!(check_commutator(&w, &v, &u, r, m).unwrap());
    }

    #[test]
    fn mode_action_is_deterministic(seed in any::<u64>(), m in -3i64..=2) {
        let mut s1 = StateSampler::new(seed, 3);
        let mut s2 = StateSampler::new(seed, 3);
        let (w1, u1) = (s1.state(Ring::Poly, true), s1.state(Ring::Poly, true));
        let (w2, u2) = (s2.state(Ring::Poly, true), s2.state(Ring::Poly, true));
        prop_assert_eq!(w1.apply_mode(m, &u1).unwrap().to_string(), w2.apply_mode(m, &u2).unwrap().to_string());
    }
}
