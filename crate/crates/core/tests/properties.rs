//! Randomized invariant checks over the public API.

use conic_qm::cone::make_hermitian_quantity;
use conic_qm::fixtures;
use conic_qm::linalg::{gauss_hermite, vec_norm, vec_sub};
use conic_qm::{outcome_distribution, q_numeric, q_spectral, ConeModel, Route};
use proptest::prelude::*;

fn cone_strategy() -> impl Strategy<Value = ConeModel> {
    prop_oneof![
        (2usize..=8).prop_map(|d| ConeModel::simplex(d).unwrap()),
        (2usize..=4).prop_map(|n| ConeModel::psd_hermitian(n).unwrap()),
        (2usize..=6).prop_map(|n| ConeModel::spin_factor(n).unwrap()),
    ]
}

proptest! {
    #[test]
    fn random_states_are_normalized_members(cone in cone_strategy(), seed in 0u64..1_000) {
        let x = cone.random_normalized_state(seed);
        prop_assert!((cone.e_value(&x).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!(cone.contains(&x, 1e-12).unwrap());
    }

    #[test]
    fn flows_preserve_structure(n in 2usize..=4, seed in 0u64..300, t in -3.0f64..3.0) {
        let a = fixtures::random_hermitian(n, seed);
        let q = make_hermitian_quantity(&a).unwrap();
        let x = q.cone().random_normalized_state(seed + 1);
        let gnorm = q.generator().norm().max(1e-12);
        let t = t.clamp(-10.0 / gnorm, 10.0 / gnorm);
        let y = q.evolve(t, &x).unwrap();
        prop_assert!((q.cone().e_value(&y).unwrap() - 1.0).abs() <= 1e-10);
        prop_assert!(q.cone().contains(&y, 1e-8).unwrap());
        let a_gap = (q.outcome_value(&y).unwrap() - q.outcome_value(&x).unwrap()).abs();
        prop_assert!(a_gap <= 1e-9 * (1.0 + q.outcome_value(&x).unwrap().abs()));
    }

    #[test]
    fn both_projector_routes_preserve_the_cone(
        n in 2usize..=4,
        seed in 0u64..200,
        eps in 0.05f64..2.0,
    ) {
        let a = fixtures::random_hermitian(n, 500 + seed);
        let q = make_hermitian_quantity(&a).unwrap();
        let x = q.cone().random_normalized_state(600 + seed);
        for y in [q_spectral(&q, &x).unwrap(), q_numeric(&q, &x, eps, 48).unwrap()] {
            prop_assert!((q.cone().e_value(&y).unwrap() - 1.0).abs() <= 1e-10);
            prop_assert!(q.cone().contains(&y, 1e-8).unwrap());
        }
        // idempotence of the exact route
        let y = q_spectral(&q, &x).unwrap();
        let yy = q_spectral(&q, &y).unwrap();
        prop_assert!(vec_norm(&vec_sub(yy.coords(), y.coords())) <= 1e-10);
    }

    #[test]
    fn distributions_live_on_the_probability_simplex(n in 2usize..=5, seed in 0u64..300) {
        let a = fixtures::random_hermitian(n, 900 + seed);
        let q = make_hermitian_quantity(&a).unwrap();
        let x = q.cone().random_normalized_state(1_000 + seed);
        let d = outcome_distribution(&q, &x, Route::Spectral, None).unwrap();
        prop_assert!(d.entries.iter().all(|e| e.probability >= 0.0));
        prop_assert!((d.total_probability() - 1.0).abs() <= 1e-9);
        prop_assert!((d.expectation() - q.outcome_value(&x).unwrap()).abs() <= 1e-9);
        prop_assert!(d.entries.windows(2).all(|w| w[0].value > w[1].value));
        for e in &d.entries {
            prop_assert!((q.cone().e_value(&e.representative).unwrap() - 1.0).abs() <= 1e-8);
            prop_assert!(q.cone().contains(&e.representative, 1e-8).unwrap());
        }
    }

    #[test]
    fn quadrature_rules_are_well_formed(n in 1usize..=128) {
        let r = gauss_hermite(n).unwrap();
        prop_assert_eq!(r.len(), n);
        prop_assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(r.weights.iter().all(|w| *w > 0.0));
        let sum: f64 = r.weights.iter().sum();
        prop_assert!((sum - std::f64::consts::PI.sqrt()).abs() <= 1e-12);
        // exact symmetry by construction
        for i in 0..n / 2 {
            prop_assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
            prop_assert_eq!(r.weights[i], r.weights[n - 1 - i]);
        }
    }
}
