use multipole_core::harmonic::{harmonic_components, reconstruct, trace_norm};
use multipole_core::multipole::{skeleton_to_harmonic, sylvester_decompose};
use multipole_core::operator::{classical_from_polynomial, expectation_oracle, expectation_tensor};
use multipole_core::spinstate::{majorana_stars, state_from_stars};
use multipole_core::symtensor::slot_count;
use multipole_core::{Complex64, Skeleton, SpinState, SymTensor};
use proptest::prelude::*;

fn tensor_strategy() -> impl Strategy<Value = SymTensor> {
    (0usize..=8).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, slot_count(n))
            .prop_map(move |c| SymTensor::from_real_coeffs(n, &c).unwrap())
    })
}

fn axis_strategy() -> impl Strategy<Value = [f64; 3]> {
    (0.05f64..3.09, 0.0f64..std::f64::consts::TAU).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

fn state_strategy() -> impl Strategy<Value = SpinState> {
    (1usize..=6).prop_flat_map(|two_j| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), two_j + 1)
            .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 0.1))
            .prop_map(move |v| {
                SpinState::new(two_j, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs(a in tensor_strategy()) {
        let comps = harmonic_components(&a).unwrap();
        let scale = a.max_abs().max(1.0);
        prop_assert!((&reconstruct(&comps).unwrap() - &a).max_abs() < 1e-12 * scale);
        for h in &comps {
            prop_assert!(trace_norm(h.tensor()) < 1e-12 * scale);
        }
    }

    #[test]
    fn skeleton_survives_a_round_trip(axes in prop::collection::vec(axis_strategy(), 1..=5), scale in 0.1f64..10.0) {
        let s = Skeleton::new(axes, scale, 1).unwrap();
        let h = skeleton_to_harmonic(&s).unwrap();
        let back = skeleton_to_harmonic(&sylvester_decompose(&h).unwrap()).unwrap();
        prop_assert!((back.tensor() - h.tensor()).max_abs() < 1e-7 * h.tensor().max_abs());
    }

    #[test]
    fn stars_reproduce_the_state(psi in state_strategy()) {
        let back = state_from_stars(&majorana_stars(&psi).unwrap()).unwrap();
        prop_assert!(back.fidelity(&psi) > 1.0 - 1e-9);
    }

    #[test]
    fn tensor_route_matches_oracle(psi in state_strategy(), c in prop::collection::vec(-1.0f64..1.0, 6)) {
        let obs = classical_from_polynomial(&SymTensor::from_real_coeffs(2, &c).unwrap()).unwrap();
        if psi.two_j() >= 2 {
            let t = expectation_tensor(&psi, &obs).unwrap();
            let o = expectation_oracle(&psi, &obs).unwrap();
            prop_assert!((t - o).abs() < 1e-9);
        }
    }
}
