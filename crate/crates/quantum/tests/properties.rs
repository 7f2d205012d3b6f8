//! Property-based checks of the register algebra's structural invariants.

use frlab_quantum::{
    born, heisenberg, lueders_state, protocol_unitaries, DenseOperator, StateVector, SystemLabel,
    DEFAULT_TOLERANCE,
};
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = DEFAULT_TOLERANCE;

/// A random normalized state on the given register.
fn state_on(labels: &'static [char]) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << labels.len();
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter_map("norm too small", move |parts| {
            let norm_sq: f64 = parts.iter().map(|(re, im)| re * re + im * im).sum();
            if norm_sq < 1e-6 {
                return None;
            }
            let norm = norm_sq.sqrt();
            let amps = parts
                .into_iter()
                .map(|(re, im)| Complex64::new(re / norm, im / norm))
                .collect();
            let register = labels.iter().map(|&ch| SystemLabel(ch)).collect();
            Some(StateVector::from_amplitudes(register, amps).expect("normalized by division"))
        })
}

proptest! {
    #[test]
    fn identity_expectation_is_one(state in state_on(&['l', 'g'])) {
        let id = DenseOperator::identity(state.register().to_vec());
        let p = born(&state, &id, TOL).unwrap();
        prop_assert!((p - 1.0).abs() < 1e-7);
    }

    #[test]
    fn protocol_evolution_preserves_the_norm(state in state_on(&['r', 'a', 'l', 'g'])) {
        let us = protocol_unitaries();
        let out = us.evolution_to_t2().apply(&state).unwrap();
        prop_assert!((out.norm_sq() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn tensor_products_of_states_stay_normalized(
        a in state_on(&['l']),
        b in state_on(&['g']),
    ) {
        let prod = a.tensor(&b).unwrap();
        prop_assert!((prod.norm_sq() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn conjugation_by_the_copy_preserves_projectors(seed in state_on(&['l', 'g'])) {
        let pi = DenseOperator::projector_onto(&seed);
        let us = protocol_unitaries();
        let evolved = heisenberg(&pi, &us.u_a, TOL).unwrap();
        prop_assert!(evolved.is_projector(1e-7));
    }

    #[test]
    fn repeated_collapse_is_stable(state in state_on(&['l', 'g'])) {
        let pi = DenseOperator::proj0(SystemLabel('l'))
            .kron(&DenseOperator::identity(vec![SystemLabel('g')]))
            .unwrap();
        // A state orthogonal to the projector has no posterior; skip those.
        if let Ok((once, _)) = lueders_state(&state, &pi, TOL) {
            let (twice, p2) = lueders_state(&once, &pi, TOL).unwrap();
            prop_assert!((p2 - 1.0).abs() < 1e-7);
            prop_assert!(once.approx_eq_up_to_phase(&twice, 1e-7));
        }
    }

    #[test]
    fn phase_rotation_is_invisible_to_ray_equality(
        state in state_on(&['l', 'g']),
        phase in 0.0f64..std::f64::consts::TAU,
    ) {
        let factor = Complex64::from_polar(1.0, phase);
        let rotated = StateVector::from_amplitudes(
            state.register().to_vec(),
            state.amplitudes().iter().map(|a| a * factor).collect(),
        )
        .unwrap();
        prop_assert!(state.approx_eq_up_to_phase(&rotated, 1e-7));
    }
}
