//! Čech cohomology tables and the free-field ↔ PBW comparisons.

use num_bigint::BigInt;
use proptest::prelude::*;
use tcdo_core::affine::{irreducible_table, pbw_basis, verma_dim, verma_to_sections, VermaModule};
use tcdo_core::cech::{cech_dims, character_check, check_sl2_stability, euler_check, singular_vectors_h0};
use tcdo_core::modespace::FreeState;
use tcdo_core::p1tcdo::{section_monomials, ChartId, Sl2Embedding};
use tcdo_core::qseries::{char_h1, char_l, count_2colored, eta_inverse_squared};
use tcdo_core::scalar::q_int;
use tcdo_core::Error;

#[test]
fn spec_examples() {
    let r = cech_dims(0, 0).unwrap();
    let e = r.entry(0, 0).unwrap();
    assert_eq!((e.dim_h0, e.dim_h1), (1, 0));
    assert_eq!(cech_dims(2, 0).unwrap().h0_character.coeff(0), BigInt::from(3));
    let r = cech_dims(-1, 3).unwrap();
    assert!(r.h0_character.is_zero() && r.h1_character.is_zero());
    let r = cech_dims(-2, 1).unwrap();
    assert_eq!(r.h1_character.coeff(0), BigInt::from(1));
}

#[test]
fn adjoint_representation_at_weight_one() {
    // H0 of the chiral structure sheaf at weight 1 is sl2 itself: one state at μ = 2, 0, -2
    let r = cech_dims(0, 1).unwrap();
    let h0: Vec<(i64, usize)> =
        r.entries.iter().filter(|e| e.weight == 1 && e.dim_h0 > 0).map(|e| (e.h_weight, e.dim_h0)).collect();
    assert_eq!(h0, vec![(-2, 1), (0, 1), (2, 1)]);
}

#[test]
fn euler_characteristic_per_weight() {
    for n in -4..=4 {
        let r = cech_dims(n, 3).unwrap();
        assert!(r.stable && r.rank_nullity_ok());
        for j in 0..=3usize {
            let diff = r.h0_character.coeff(j) - r.h1_character.coeff(j);
            assert_eq!(diff, count_2colored(j as i64).unwrap() * BigInt::from(n + 1), "n={n} j={j}");
        }
        assert!(euler_check(&r).unwrap());
        assert!(character_check(&r).unwrap());
    }
}

#[test]
fn unstable_reports_are_refused() {
    let mut r = cech_dims(1, 1).unwrap();
    r.stable = false;
    assert_eq!(euler_check(&r), Err(Error::Stability { n: 1 }));
    assert_eq!(character_check(&r), Err(Error::Stability { n: 1 }));
}

#[test]
fn singular_vector_is_the_ground_state() {
    for n in 0..=3 {
        let sv = singular_vectors_h0(n, 3).unwrap();
        assert_eq!(sv.len(), 1, "n = {n}");
        let ((w, mu), v) = &sv[0];
        assert_eq!((*w, *mu), (0, n));
        let (m, _) = v.terms().next().unwrap();
        assert_eq!(m.ground(), 0);
        assert_eq!(m.mode_count(), 0);
    }
}

#[test]
fn cocycles_are_sl2_stable() {
    for n in [-3, -1, 0, 2] {
        let r = check_sl2_stability(n, 2).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn section_image_is_irreducible_for_nonnegative_n() {
    // the image of M_n in the sections is L_n: ranks equal the oracle's irreducible dims
    for n in 0..=2 {
        let ranks = verma_to_sections(n, 3).unwrap();
        let table = irreducible_table(n, 3, -40, 40).unwrap();
        for r in &ranks {
            let irr = table.iter().find(|e| e.depth == r.depth && e.h_weight == r.h_weight).map_or(0, |e| e.irreducible);
            assert_eq!(r.rank, irr, "n={n} depth={} μ={}", r.depth, r.h_weight);
        }
    }
}

#[test]
fn ground_state_is_killed_by_a_power_of_f0() {
    let rho = Sl2Embedding::zero_chart();
    for n in 0..=3 {
        let mut v = FreeState::vacuum().into_module(n).unwrap();
        for _ in 0..=n {
            assert!(!v.is_zero());
            v = rho.f.apply_mode(0, &v).unwrap();
        }
        assert!(v.is_zero(), "n = {n}");
        // the PBW side sees the same thing: rank 0 at μ = -n - 2 although x^{n+1} is a section
        let ranks = verma_to_sections(n, 0).unwrap();
        let below = ranks.iter().find(|r| r.depth == 0 && r.h_weight == -n - 2).unwrap();
        assert_eq!((below.rank, below.sections), (0, 1));
    }
}

#[test]
fn full_verma_is_larger_than_the_sections() {
    // the plain Verma module is not the section space: only its Sugawara quotient is
    let nu = q_int(1);
    assert_eq!(verma_dim(&nu, 1, &nu), 2);
    assert_eq!(section_monomials(ChartId::Zero, 1, 1, 1).len(), 1);
    let module = VermaModule::new(nu.clone());
    assert_eq!(tcdo_core::affine::quotient_dim(&module, 1, &nu), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn euler_identity_of_closed_forms(n in 0i64..8, order in 0usize..10) {
        let diff = char_l(n, order).unwrap().try_sub(&char_h1(n, order).unwrap()).unwrap();
        prop_assert_eq!(diff, eta_inverse_squared(order).scale(&BigInt::from(n + 1)));
    }

    #[test]
    fn pbw_counts_are_symmetric_under_depth_zero_shift(d in 0u32..4, s in -6i64..2) {
        // multiplying by f_0 is injective: the count at (d, s - 1) is at least that at (d, s)
        prop_assert!(pbw_basis(d, s - 1).len() >= pbw_basis(d, s).len());
    }
}
