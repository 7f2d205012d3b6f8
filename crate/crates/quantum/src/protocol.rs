//! The extended Wigner's-friend protocol: its register, unitaries, state
//! history, and the six expectation values the modal analysis consumes.
//!
//! Register order is the canonical `r,a,l,g`: the coin system `r`, agent a's
//! memory `a`, the travelling system `l`, and agent g's memory `g`. Agent a
//! measures `r` at time t1, the coin-conditioned Hadamard acts on `l` at t',
//! agent g measures `l` at t2 (modelled unitarily), and the two outside
//! agents measure (r,a) resp. (l,g) in the ok/fail basis at t3 and t4.

use crate::expectation::{born, heisenberg, sequential_expectation};
use crate::label::SystemLabel;
use crate::operator::DenseOperator;
use crate::state::StateVector;
use crate::DEFAULT_TOLERANCE;
use num_complex::Complex64;

/// The canonical four-system register `r,a,l,g`.
pub fn canonical_register() -> Vec<SystemLabel> {
    vec![
        SystemLabel('r'),
        SystemLabel('a'),
        SystemLabel('l'),
        SystemLabel('g'),
    ]
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `|+⟩ = √(1/2)(|0⟩+|1⟩)` on one labeled system.
pub fn plus_state(label: SystemLabel) -> StateVector {
    let h = (0.5f64).sqrt();
    StateVector::qubit(label, c(h), c(h)).expect("|+⟩ is normalized")
}

/// `|ok⟩ = √(1/2)(|00⟩−|11⟩)` on a labeled pair.
pub fn ok_state(first: SystemLabel, second: SystemLabel) -> StateVector {
    let h = (0.5f64).sqrt();
    StateVector::from_amplitudes(
        vec![first, second],
        vec![c(h), c(0.0), c(0.0), -c(h)],
    )
    .expect("|ok⟩ is normalized")
}

/// `|fail⟩ = √(1/2)(|00⟩+|11⟩)` on a labeled pair.
pub fn fail_state(first: SystemLabel, second: SystemLabel) -> StateVector {
    let h = (0.5f64).sqrt();
    StateVector::from_amplitudes(vec![first, second], vec![c(h), c(0.0), c(0.0), c(h)])
        .expect("|fail⟩ is normalized")
}

/// The t=0 state: `(√(1/3)|0⟩ + √(2/3)|1⟩)_r ⊗ |0⟩_a|0⟩_l|0⟩_g`.
pub fn initial_state() -> StateVector {
    let coin = StateVector::qubit(
        SystemLabel('r'),
        c((1.0f64 / 3.0).sqrt()),
        c((2.0f64 / 3.0).sqrt()),
    )
    .expect("coin state is normalized");
    let rest = StateVector::basis(
        vec![SystemLabel('a'), SystemLabel('l'), SystemLabel('g')],
        &[0, 0, 0],
    )
    .expect("basis state");
    coin.tensor(&rest).expect("disjoint registers")
}

/// The four protocol unitaries. The first three act on the full `r,a,l,g`
/// register; `u_a` is the local (l,g) interaction available to agent a's
/// reasoning about the late measurement.
#[derive(Debug, Clone)]
pub struct ProtocolUnitaries {
    /// t1: copies the coin value into a's memory, conditioned on `r`.
    pub u_t1: DenseOperator,
    /// t': applies a Hadamard to `l` on the `r = 1` branch.
    pub u_tprime: DenseOperator,
    /// t2: copies `l` into g's memory, conditioned on `r = 1`.
    pub u_t2: DenseOperator,
    /// The l→g copy on its own (l,g) register; equals the t2 interaction
    /// as seen from inside the `r = 1` branch.
    pub u_a: DenseOperator,
}

impl ProtocolUnitaries {
    /// `U = U_t' · U_t1`: the evolution from t=0 through t'.
    pub fn evolution_to_tprime(&self) -> DenseOperator {
        self.u_tprime.mul(&self.u_t1).expect("same register")
    }

    /// `Ū = U_t2 · U_t' · U_t1`: the evolution from t=0 through t2.
    pub fn evolution_to_t2(&self) -> DenseOperator {
        self.u_t2
            .mul(&self.evolution_to_tprime())
            .expect("same register")
    }
}

/// Builds the four protocol unitaries.
pub fn protocol_unitaries() -> ProtocolUnitaries {
    let r = SystemLabel('r');
    let a = SystemLabel('a');
    let l = SystemLabel('l');
    let g = SystemLabel('g');
    let id = DenseOperator::identity;

    // U_t1 = π_0 ⊗ 𝕀₃  +  π_1 ⊗ σ_x ⊗ 𝕀₂
    let u_t1 = DenseOperator::proj0(r)
        .kron(&id(vec![a, l, g]))
        .and_then(|lhs| {
            let rhs = DenseOperator::proj1(r)
                .kron(&DenseOperator::pauli_x(a))?
                .kron(&id(vec![l, g]))?;
            lhs.add(&rhs)
        })
        .expect("disjoint labels");

    // U_t' = π_0 ⊗ 𝕀₃  +  π_1 ⊗ 𝕀 ⊗ H ⊗ 𝕀
    let u_tprime = DenseOperator::proj0(r)
        .kron(&id(vec![a, l, g]))
        .and_then(|lhs| {
            let rhs = DenseOperator::proj1(r)
                .kron(&id(vec![a]))?
                .kron(&DenseOperator::hadamard(l))?
                .kron(&id(vec![g]))?;
            lhs.add(&rhs)
        })
        .expect("disjoint labels");

    // U_a = π_0 ⊗ 𝕀 + π_1 ⊗ σ_x on (l,g): copy l into g.
    let u_a = DenseOperator::proj0(l)
        .kron(&id(vec![g]))
        .and_then(|lhs| {
            let rhs = DenseOperator::proj1(l).kron(&DenseOperator::pauli_x(g))?;
            lhs.add(&rhs)
        })
        .expect("disjoint labels");

    // U_t2 = π_0 ⊗ 𝕀₃  +  π_1 ⊗ 𝕀 ⊗ U_a
    let u_t2 = DenseOperator::proj0(r)
        .kron(&id(vec![a, l, g]))
        .and_then(|lhs| {
            let rhs = DenseOperator::proj1(r).kron(&id(vec![a]))?.kron(&u_a)?;
            lhs.add(&rhs)
        })
        .expect("disjoint labels");

    ProtocolUnitaries {
        u_t1,
        u_tprime,
        u_t2,
        u_a,
    }
}

/// The state at t': `√(2/3)|fail⟩_ra|0⟩_l|0⟩_g + √(1/3)|1⟩_r|1⟩_a|1⟩_l|0⟩_g`,
/// computed by evolving the initial state.
pub fn state_at_tprime() -> StateVector {
    protocol_unitaries()
        .evolution_to_tprime()
        .apply(&initial_state())
        .expect("unitary evolution preserves the norm")
}

/// The pre-measurement state at t2:
/// `|Ψ⟩ = √(1/3)(|0000⟩ + |1100⟩ + |1111⟩)` on `r,a,l,g`,
/// computed by evolving the initial state.
pub fn state_at_t2() -> StateVector {
    protocol_unitaries()
        .evolution_to_t2()
        .apply(&initial_state())
        .expect("unitary evolution preserves the norm")
}

/// Heisenberg-evolved projectors for the four measurements, all on the full
/// `r,a,l,g` register, conjugated by the evolution up to their time.
#[derive(Debug, Clone)]
pub struct EvolvedProjectors {
    /// Coin found heads (`r = 0`) at t1.
    pub zero_r_at_t1: DenseOperator,
    /// Coin found tails (`r = 1`) at t1.
    pub one_r_at_t1: DenseOperator,
    /// `l = 0` at t2 (g's measurement outcome 0).
    pub zero_l_at_t2: DenseOperator,
    /// `l = 1` at t2 (g's measurement outcome 1).
    pub one_l_at_t2: DenseOperator,
    /// (r,a) found in `|ok⟩` at t3 (agent c's outcome).
    pub ok_ra_at_t3: DenseOperator,
    /// (r,a) found in `|fail⟩` at t3.
    pub fail_ra_at_t3: DenseOperator,
    /// (l,g) found in `|ok⟩` at t4 (agent d's outcome).
    pub ok_lg_at_t4: DenseOperator,
    /// (l,g) found in `|fail⟩` at t4.
    pub fail_lg_at_t4: DenseOperator,
}

/// Builds the Heisenberg projectors from the protocol unitaries.
pub fn evolved_projectors() -> EvolvedProjectors {
    let tol = DEFAULT_TOLERANCE;
    let reg = canonical_register();
    let us = protocol_unitaries();
    let u = us.evolution_to_tprime();
    let u_bar = us.evolution_to_t2();

    let embed_pi = |local: DenseOperator| local.embed(&reg).expect("labels in register");
    let evolve = |pi: DenseOperator, by: &DenseOperator| {
        heisenberg(&pi, by, tol).expect("protocol evolutions are unitary")
    };

    let r = SystemLabel('r');
    let l = SystemLabel('l');
    let ok_ra = DenseOperator::projector_onto(&ok_state(SystemLabel('r'), SystemLabel('a')));
    let fail_ra = DenseOperator::projector_onto(&fail_state(SystemLabel('r'), SystemLabel('a')));
    let ok_lg = DenseOperator::projector_onto(&ok_state(SystemLabel('l'), SystemLabel('g')));
    let fail_lg = DenseOperator::projector_onto(&fail_state(SystemLabel('l'), SystemLabel('g')));

    EvolvedProjectors {
        zero_r_at_t1: evolve(embed_pi(DenseOperator::proj0(r)), &us.u_t1),
        one_r_at_t1: evolve(embed_pi(DenseOperator::proj1(r)), &us.u_t1),
        zero_l_at_t2: evolve(embed_pi(DenseOperator::proj0(l)), &u),
        one_l_at_t2: evolve(embed_pi(DenseOperator::proj1(l)), &u),
        ok_ra_at_t3: evolve(embed_pi(ok_ra), &u_bar),
        fail_ra_at_t3: evolve(embed_pi(fail_ra), &u_bar),
        ok_lg_at_t4: evolve(embed_pi(ok_lg), &u_bar),
        fail_lg_at_t4: evolve(embed_pi(fail_lg), &u_bar),
    }
}

/// The six protocol expectation values that ground the modal bridge rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolExpectations {
    /// ⟨Π_ok^{t3} Π_0^{t2}⟩ in the initial state: probability weight of
    /// "c sees ok and g saw 0" — exactly 0.
    pub ok_c_and_zero_g: f64,
    /// ⟨Π_ok^{t4} Π_ok^{t3} Π_1^{t2} Π_1^{t1}⟩: weight of the all-ones
    /// history ending in double ok — exactly 1/12.
    pub joint_ok: f64,
    /// Complement of `joint_ok` — exactly 11/12, strictly below 1, which is
    /// what turns the double-ok history into a possibility rather than a
    /// certainty.
    pub joint_ok_complement: f64,
    /// ⟨Π_1^{t2} Π_0^{t1}⟩: weight of "g sees 1 though the coin was heads"
    /// — exactly 0.
    pub one_g_and_zero_a: f64,
    /// From a's indicated state `|+⟩_l|0⟩_g`: Born weight of `fail` for the
    /// late (l,g) measurement — exactly 1.
    pub fail_d_from_plus_zero: f64,
    /// From the same indicated state: Born weight of `¬ok` — exactly 1.
    pub not_ok_d_from_plus_zero: f64,
}

/// Computes the six expectation values from first principles: build the
/// unitaries, conjugate the projectors, take Born/sequential expectations
/// in the initial state.
pub fn protocol_expectations() -> ProtocolExpectations {
    let tol = DEFAULT_TOLERANCE;
    let init = initial_state();
    let pis = evolved_projectors();

    let ok_c_and_zero_g =
        sequential_expectation(&init, &[&pis.ok_ra_at_t3, &pis.zero_l_at_t2], tol)
            .expect("real within tolerance");
    let joint_ok = sequential_expectation(
        &init,
        &[
            &pis.ok_lg_at_t4,
            &pis.ok_ra_at_t3,
            &pis.one_l_at_t2,
            &pis.one_r_at_t1,
        ],
        tol,
    )
    .expect("real within tolerance");
    let one_g_and_zero_a =
        sequential_expectation(&init, &[&pis.one_l_at_t2, &pis.zero_r_at_t1], tol)
            .expect("real within tolerance");

    // Agent a's indicated state after seeing tails: |+⟩_l|0⟩_g, with the
    // late (l,g) measurement reached through the copy interaction U_a.
    let l = SystemLabel('l');
    let g = SystemLabel('g');
    let indicated = plus_state(l)
        .tensor(&StateVector::basis(vec![g], &[0]).expect("basis state"))
        .expect("disjoint registers");
    let us = protocol_unitaries();
    let pi_fail = DenseOperator::projector_onto(&fail_state(l, g));
    let pi_ok = DenseOperator::projector_onto(&ok_state(l, g));
    let not_ok = DenseOperator::identity(vec![l, g])
        .sub(&pi_ok)
        .expect("same register");
    let fail_evolved = heisenberg(&pi_fail, &us.u_a, tol).expect("U_a is unitary");
    let not_ok_evolved = heisenberg(&not_ok, &us.u_a, tol).expect("U_a is unitary");
    let fail_d_from_plus_zero =
        born(&indicated, &fail_evolved, tol).expect("projector expectation");
    let not_ok_d_from_plus_zero =
        born(&indicated, &not_ok_evolved, tol).expect("projector expectation");

    ProtocolExpectations {
        ok_c_and_zero_g,
        joint_ok,
        joint_ok_complement: 1.0 - joint_ok,
        one_g_and_zero_a,
        fail_d_from_plus_zero,
        not_ok_d_from_plus_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitaries_commute_where_the_construction_needs_it() {
        let us = protocol_unitaries();
        let ab = us.u_t1.mul(&us.u_tprime).unwrap();
        let ba = us.u_tprime.mul(&us.u_t1).unwrap();
        assert!(ab.approx_eq(&ba, 1e-12));
    }

    #[test]
    fn t2_interaction_is_the_embedded_copy_on_the_tails_branch() {
        let us = protocol_unitaries();
        let tails = StateVector::from_amplitudes(
            canonical_register(),
            {
                // |1⟩_r|1⟩_a|1⟩_l|0⟩_g  →  index 0b1110
                let mut v = vec![Complex64::new(0.0, 0.0); 16];
                v[0b1110] = Complex64::new(1.0, 0.0);
                v
            },
        )
        .unwrap();
        let out = us.u_t2.apply(&tails).unwrap();
        // The copy flips g: |1110⟩ → |1111⟩.
        let expected = StateVector::basis(canonical_register(), &[1, 1, 1, 1]).unwrap();
        assert!(out.approx_eq_up_to_phase(&expected, 1e-12));
    }

    #[test]
    fn heads_branch_is_left_alone_by_t2() {
        let us = protocol_unitaries();
        let heads = StateVector::basis(canonical_register(), &[0, 0, 1, 0]).unwrap();
        let out = us.u_t2.apply(&heads).unwrap();
        assert!(out.approx_eq_up_to_phase(&heads, 1e-12));
    }
}
