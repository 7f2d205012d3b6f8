//! End-to-end checks of the protocol algebra against independently computed
//! values: the unitaries' structure, the state history, the six expectation
//! values, and the Lüders/Heisenberg facts the modal layer relies on.

use frlab_quantum::{
    born, canonical_register, evolved_projectors, fail_state, heisenberg, initial_state,
    lueders_state, ok_state, plus_state, protocol_expectations, protocol_unitaries,
    sequential_expectation, state_at_t2, state_at_tprime, DenseOperator, Observable, StateVector,
    SystemLabel, DEFAULT_TOLERANCE,
};
use num_complex::Complex64;

const TOL: f64 = DEFAULT_TOLERANCE;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn r() -> SystemLabel {
    SystemLabel('r')
}
fn a() -> SystemLabel {
    SystemLabel('a')
}
fn l() -> SystemLabel {
    SystemLabel('l')
}
fn g() -> SystemLabel {
    SystemLabel('g')
}

#[test]
fn protocol_unitaries_are_unitary_and_selfadjoint() {
    let us = protocol_unitaries();
    for u in [&us.u_t1, &us.u_tprime, &us.u_t2] {
        assert!(u.is_unitary(TOL));
        assert!(u.approx_eq(&u.adjoint(), TOL));
    }
    assert!(us.u_a.is_unitary(TOL));
    assert!(us.u_a.approx_eq(&us.u_a.adjoint(), TOL));
}

#[test]
fn first_two_steps_commute() {
    let us = protocol_unitaries();
    let ab = us.u_t1.mul(&us.u_tprime).unwrap();
    let ba = us.u_tprime.mul(&us.u_t1).unwrap();
    assert!(ab.approx_eq(&ba, TOL));
}

#[test]
fn copy_interaction_maps_plus_zero_to_fail() {
    let us = protocol_unitaries();
    let plus_zero = plus_state(l())
        .tensor(&StateVector::basis(vec![g()], &[0]).unwrap())
        .unwrap();
    let out = us.u_a.apply(&plus_zero).unwrap();
    assert!(out.approx_eq_up_to_phase(&fail_state(l(), g()), TOL));
}

#[test]
fn state_after_first_step_matches_hand_expansion() {
    let us = protocol_unitaries();
    let out = us.u_t1.apply(&initial_state()).unwrap();
    // √(1/3)|0000⟩ + √(2/3)|1100⟩
    let mut amps = vec![c(0.0); 16];
    amps[0b0000] = c((1.0f64 / 3.0).sqrt());
    amps[0b1100] = c((2.0f64 / 3.0).sqrt());
    let expected = StateVector::from_amplitudes(canonical_register(), amps).unwrap();
    assert!(out.approx_eq_up_to_phase(&expected, TOL));
}

#[test]
fn state_at_tprime_matches_hand_expansion() {
    // √(2/3)|fail⟩_ra|0⟩_l|0⟩_g + √(1/3)|1⟩_r|1⟩_a|1⟩_l|0⟩_g
    let fail_ra = fail_state(r(), a());
    let rest = StateVector::basis(vec![l(), g()], &[0, 0]).unwrap();
    let branch_fail = fail_ra.tensor(&rest).unwrap();
    let mut amps = vec![c(0.0); 16];
    for (i, amp) in branch_fail.amplitudes().iter().enumerate() {
        amps[i] += amp * c((2.0f64 / 3.0).sqrt());
    }
    amps[0b1110] += c((1.0f64 / 3.0).sqrt());
    // Non-unit intermediate sums collapse to a unit vector here.
    let expected = StateVector::from_amplitudes(canonical_register(), amps).unwrap();
    assert!(state_at_tprime().approx_eq_up_to_phase(&expected, TOL));
}

#[test]
fn pre_measurement_state_is_the_three_branch_superposition() {
    let mut amps = vec![c(0.0); 16];
    let w = c((1.0f64 / 3.0).sqrt());
    amps[0b0000] = w;
    amps[0b1100] = w;
    amps[0b1111] = w;
    let expected = StateVector::from_amplitudes(canonical_register(), amps).unwrap();
    assert!(state_at_t2().approx_eq_up_to_phase(&expected, TOL));
}

#[test]
fn double_ok_probability_is_one_twelfth() {
    let psi = state_at_t2();
    let pi_ok_ra = DenseOperator::projector_onto(&ok_state(r(), a()));
    let pi_ok_lg = DenseOperator::projector_onto(&ok_state(l(), g()));
    let joint = pi_ok_ra.kron(&pi_ok_lg).unwrap();
    let p = born(&psi, &joint, TOL).unwrap();
    assert!((p - 1.0 / 12.0).abs() < TOL);
}

#[test]
fn born_basics() {
    let zero = StateVector::basis(vec![l()], &[0]).unwrap();
    assert!((born(&zero, &DenseOperator::proj0(l()), TOL).unwrap() - 1.0).abs() < TOL);

    let fail_lg = fail_state(l(), g());
    let pi_ok = DenseOperator::projector_onto(&ok_state(l(), g()));
    assert!(born(&fail_lg, &pi_ok, TOL).unwrap().abs() < TOL);

    let id = DenseOperator::identity(canonical_register());
    assert!((born(&state_at_t2(), &id, TOL).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn six_protocol_expectations_match_their_exact_values() {
    let e = protocol_expectations();
    assert!(e.ok_c_and_zero_g.abs() < TOL);
    assert!((e.joint_ok - 1.0 / 12.0).abs() < TOL);
    assert!((e.joint_ok_complement - 11.0 / 12.0).abs() < TOL);
    assert!(e.one_g_and_zero_a.abs() < TOL);
    assert!((e.fail_d_from_plus_zero - 1.0).abs() < TOL);
    assert!((e.not_ok_d_from_plus_zero - 1.0).abs() < TOL);
}

#[test]
fn two_factor_products_are_hermitian_but_the_four_factor_one_is_not() {
    let pis = evolved_projectors();
    let two = pis.ok_ra_at_t3.mul(&pis.zero_l_at_t2).unwrap();
    assert!(two.is_hermitian(TOL));

    let four = pis
        .ok_lg_at_t4
        .mul(&pis.ok_ra_at_t3)
        .unwrap()
        .mul(&pis.one_l_at_t2)
        .unwrap()
        .mul(&pis.one_r_at_t1)
        .unwrap();
    assert!(!four.is_hermitian(TOL));

    // The non-Hermitian product still has a real expectation in the
    // protocol state, which is what sequential_expectation certifies.
    let value = sequential_expectation(
        &initial_state(),
        &[
            &pis.ok_lg_at_t4,
            &pis.ok_ra_at_t3,
            &pis.one_l_at_t2,
            &pis.one_r_at_t1,
        ],
        TOL,
    )
    .unwrap();
    assert!((value - 1.0 / 12.0).abs() < TOL);
}

#[test]
fn evolved_projectors_stay_projectors() {
    let pis = evolved_projectors();
    for pi in [
        &pis.zero_r_at_t1,
        &pis.one_r_at_t1,
        &pis.zero_l_at_t2,
        &pis.one_l_at_t2,
        &pis.ok_ra_at_t3,
        &pis.fail_ra_at_t3,
        &pis.ok_lg_at_t4,
        &pis.fail_lg_at_t4,
    ] {
        assert!(pi.is_projector(TOL));
    }
}

#[test]
fn heisenberg_composition_matches_single_conjugation_by_the_product() {
    let us = protocol_unitaries();
    let u = us.evolution_to_tprime();
    let pi = DenseOperator::projector_onto(&ok_state(r(), a()))
        .embed(&canonical_register())
        .unwrap();
    // Conjugating by U_t2·U in one step equals conjugating by U_t2 first,
    // then by U: (U_t2 U)† π (U_t2 U) = U† (U_t2† π U_t2) U.
    let composed = heisenberg(&pi, &us.u_t2.mul(&u).unwrap(), TOL).unwrap();
    let stepwise = heisenberg(&heisenberg(&pi, &us.u_t2, TOL).unwrap(), &u, TOL).unwrap();
    assert!(composed.approx_eq(&stepwise, TOL));
}

#[test]
fn single_ok_collapse_leaves_the_anticorrelated_branch() {
    let psi = state_at_t2();
    let pi_ok_ra = DenseOperator::projector_onto(&ok_state(r(), a()))
        .embed(&canonical_register())
        .unwrap();
    let (posterior, p) = lueders_state(&psi, &pi_ok_ra, TOL).unwrap();
    assert!((p - 1.0 / 6.0).abs() < TOL);
    // Posterior is |ok⟩_ra|1⟩_l|1⟩_g up to a global sign.
    let expected = ok_state(r(), a())
        .tensor(&StateVector::basis(vec![l(), g()], &[1, 1]).unwrap())
        .unwrap();
    assert!(posterior.approx_eq_up_to_phase(&expected, TOL));
}

#[test]
fn double_ok_collapse_yields_the_product_of_ok_states() {
    let psi = state_at_t2();
    let joint = DenseOperator::projector_onto(&ok_state(r(), a()))
        .kron(&DenseOperator::projector_onto(&ok_state(l(), g())))
        .unwrap();
    let (posterior, p) = lueders_state(&psi, &joint, TOL).unwrap();
    assert!((p - 1.0 / 12.0).abs() < TOL);
    let expected = ok_state(r(), a()).tensor(&ok_state(l(), g())).unwrap();
    assert!(posterior.approx_eq_up_to_phase(&expected, TOL));
}

#[test]
fn lueders_is_idempotent() {
    let psi = state_at_t2();
    let pi = DenseOperator::projector_onto(&ok_state(r(), a()))
        .embed(&canonical_register())
        .unwrap();
    let (once, _) = lueders_state(&psi, &pi, TOL).unwrap();
    let (twice, p2) = lueders_state(&once, &pi, TOL).unwrap();
    assert!((p2 - 1.0).abs() < TOL);
    assert!(once.approx_eq_up_to_phase(&twice, TOL));
}

#[test]
fn copy_interaction_heisenberg_facts() {
    let us = protocol_unitaries();
    // U_a†(π_fail)U_a = π_+ ⊗ π_0 on (l,g).
    let pi_fail = DenseOperator::projector_onto(&fail_state(l(), g()));
    let evolved = heisenberg(&pi_fail, &us.u_a, TOL).unwrap();
    let pi_plus = DenseOperator::projector_onto(&plus_state(l()));
    let expected = pi_plus.kron(&DenseOperator::proj0(g())).unwrap();
    assert!(evolved.approx_eq(&expected, TOL));

    // π_0 on l commutes with the copy, so it is left untouched.
    let pi0_l = DenseOperator::proj0(l())
        .kron(&DenseOperator::identity(vec![g()]))
        .unwrap();
    let unchanged = heisenberg(&pi0_l, &us.u_a, TOL).unwrap();
    assert!(unchanged.approx_eq(&pi0_l, TOL));
}

#[test]
fn ok_fail_pair_basis_is_a_complete_observable() {
    let ok = ok_state(l(), g());
    let fail = fail_state(l(), g());
    let mid0 = StateVector::basis(vec![l(), g()], &[0, 1]).unwrap();
    let mid1 = StateVector::basis(vec![l(), g()], &[1, 0]).unwrap();
    let obs = Observable::new(
        vec![
            ("ok".into(), DenseOperator::projector_onto(&ok)),
            ("fail".into(), DenseOperator::projector_onto(&fail)),
            ("zero-one".into(), DenseOperator::projector_onto(&mid0)),
            ("one-zero".into(), DenseOperator::projector_onto(&mid1)),
        ],
        TOL,
    )
    .unwrap();
    let dist = obs.distribution(&fail, TOL).unwrap();
    let p_fail = dist
        .iter()
        .find(|(name, _)| name == "fail")
        .map(|(_, p)| *p)
        .unwrap();
    assert!((p_fail - 1.0).abs() < TOL);
    let total: f64 = dist.iter().map(|(_, p)| p).sum();
    assert!((total - 1.0).abs() < TOL);
}
