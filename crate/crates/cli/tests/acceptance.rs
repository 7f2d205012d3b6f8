//! Acceptance suite: one test per criterion, each re-deriving its expected
//! values from scratch at the shared 1e-9 tolerance.  The harness prints one
//! pass/fail line per criterion.

use std::collections::BTreeSet;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use frlab_halpern::{
    certain, certain_prime, false_beliefs, holds, random_structure, soundness_probe,
    t_axiom_falsifier, LogicSystem,
};
use frlab_logic::{
    axiom_validity, check_frame_property, parse, random_formula, random_model_with, satisfies,
    Agent, AxiomSchema, Formula, FrameProperty,
};
use frlab_quantum::{
    fail_state, plus_state, protocol_expectations, protocol_unitaries, StateVector, SystemLabel,
};
use frlab_scenario::{
    ablate, run_consistency_lemma, run_nesting_lemma, run_theorem_fr, run_theorem_fr_star,
    two_world_countermodel, Ablation, FrameChoice, Verdict, DEFAULT_TOLERANCE as TOL,
};

fn corpus_agents() -> Vec<Agent> {
    vec![Agent::new("x"), Agent::new("y")]
}

fn corpus_atoms() -> Vec<String> {
    vec!["p".to_owned(), "q".to_owned()]
}

#[test]
fn criterion_01_expectation_table_matches_the_exact_rationals() {
    let table = protocol_expectations();
    let rows = [
        ("ok_c_and_zero_g", table.ok_c_and_zero_g, 0.0),
        ("joint_ok", table.joint_ok, 1.0 / 12.0),
        ("joint_ok_complement", table.joint_ok_complement, 11.0 / 12.0),
        ("one_g_and_zero_a", table.one_g_and_zero_a, 0.0),
        ("fail_d_from_plus_zero", table.fail_d_from_plus_zero, 1.0),
        ("not_ok_d_from_plus_zero", table.not_ok_d_from_plus_zero, 1.0),
    ];
    for (name, value, exact) in rows {
        assert!(
            (value - exact).abs() <= TOL,
            "{name}: computed {value}, expected {exact}"
        );
    }
}

#[test]
fn criterion_02_protocol_operators_are_unitary_and_self_adjoint() {
    let unitaries = protocol_unitaries();
    for (name, operator) in [
        ("U_t1", &unitaries.u_t1),
        ("U_t'", &unitaries.u_tprime),
        ("U_t2", &unitaries.u_t2),
    ] {
        assert!(operator.is_unitary(TOL), "{name} is not unitary");
        assert!(operator.is_hermitian(TOL), "{name} is not self-adjoint");
    }
    assert!(unitaries.u_a.is_unitary(TOL), "U_a is not unitary");
    let plus_zero = plus_state(SystemLabel('l'))
        .tensor(&StateVector::basis(vec![SystemLabel('g')], &[0]).unwrap())
        .unwrap();
    let mapped = unitaries.u_a.apply(&plus_zero).unwrap();
    assert!(
        mapped.approx_eq_up_to_phase(&fail_state(SystemLabel('l'), SystemLabel('g')), TOL),
        "U_a does not send |+,0> to the fail state"
    );
}

#[test]
fn criterion_03_mass_and_support_certainty_agree_on_a_large_corpus() {
    let agents = corpus_agents();
    let atoms = corpus_atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut structures = 0usize;
    let mut probes_checked = 0usize;
    for round in 0..1000 {
        let structure = random_structure(&mut rng, &agents, 6, &atoms, round % 2 == 0, TOL);
        structures += 1;
        for _ in 0..20 {
            let probe = random_formula(&mut rng, &atoms, &agents, 3);
            probes_checked += 1;
            for agent in &agents {
                let by_mass = certain(&structure, agent, &probe).unwrap();
                let by_support = certain_prime(&structure, agent, &probe).unwrap();
                assert_eq!(
                    by_mass, by_support,
                    "certainty semantics disagree for {agent} on {probe}"
                );
            }
        }
    }
    assert_eq!(structures, 1000);
    assert_eq!(probes_checked, 20_000);
}

#[test]
fn criterion_04_false_belief_sets_carry_no_measure() {
    let agents = corpus_agents();
    let atoms = corpus_atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    for round in 0..1000 {
        let structure = random_structure(&mut rng, &agents, 6, &atoms, round % 2 == 0, TOL);
        let probes: Vec<Formula> = (0..20)
            .map(|_| random_formula(&mut rng, &atoms, &agents, 3))
            .collect();
        for agent in &agents {
            let set = false_beliefs(&structure, agent, &probes).unwrap();
            assert!(
                set.measure <= TOL,
                "false beliefs of {agent} carry measure {}",
                set.measure
            );
        }
    }
}

#[test]
fn criterion_05_soundness_probes_and_the_truth_axiom_falsifier() {
    let agents = corpus_agents();
    let atoms = corpus_atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);

    let arbitrary: Vec<_> = (0..150)
        .map(|i| random_structure(&mut rng, &agents, 6, &atoms, i % 3 == 0, TOL))
        .collect();
    let full_support: Vec<_> = (0..150)
        .map(|_| random_structure(&mut rng, &agents, 6, &atoms, true, TOL))
        .collect();
    let probes: Vec<Formula> = (0..12)
        .map(|_| random_formula(&mut rng, &atoms, &agents, 2))
        .collect();

    let kd45 = soundness_probe(LogicSystem::Kd45, &arbitrary, &probes).unwrap();
    assert!(kd45.all_sound(), "KD45 failures: {:?}", kd45.failures);
    let s5 = soundness_probe(LogicSystem::S5, &full_support, &probes).unwrap();
    assert!(s5.all_sound(), "S5 failures: {:?}", s5.failures);

    let falsifier = t_axiom_falsifier(TOL);
    assert!(!falsifier.has_full_support());
    let world = falsifier.world_index("actual").unwrap();
    let t_instance = parse("[x]p -> p").unwrap();
    assert!(
        !holds(&falsifier, world, &t_instance).unwrap(),
        "the constructed structure fails to falsify the truth axiom"
    );
}

#[test]
fn criterion_06_frame_properties_validate_their_axiom_schemas() {
    let agents = corpus_agents();
    let atoms = corpus_atoms();
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let pairs = [
        (FrameProperty::Reflexive, AxiomSchema::T),
        (FrameProperty::Serial, AxiomSchema::D),
        (FrameProperty::Transitive, AxiomSchema::Four),
        (FrameProperty::Euclidean, AxiomSchema::Five),
    ];
    let mut models_checked = 0usize;
    for (property, schema) in pairs {
        for _ in 0..125 {
            let model =
                random_model_with(&mut rng, &agents, 5, &atoms, &BTreeSet::from([property]));
            let probes: Vec<Formula> = (0..6)
                .map(|_| random_formula(&mut rng, &atoms, &agents, 2))
                .collect();
            let report = axiom_validity(&model, schema, &probes).unwrap();
            assert!(
                report.all_valid(),
                "{property:?} model violates {schema:?}: {:?}",
                report.failures
            );
            models_checked += 1;
        }
    }
    assert!(models_checked >= 500);
}

#[test]
fn criterion_07_lemma_suite_validates_and_separates() {
    let consistency = run_consistency_lemma().unwrap();
    assert_eq!(consistency.verdict, Verdict::Unsat);
    assert!(consistency.all_steps_verified());

    let nesting = run_nesting_lemma().unwrap();
    assert_eq!(nesting.verdict, Verdict::Sat);
    assert!(nesting.all_steps_verified());

    let model = two_world_countermodel().unwrap();
    let point = model.point().unwrap();
    let separation = parse("[x][y]phi & <x>~phi").unwrap();
    assert!(satisfies(&model, point, &separation).unwrap());
    for agent in [Agent::new("x"), Agent::new("y")] {
        for property in [
            FrameProperty::Serial,
            FrameProperty::Transitive,
            FrameProperty::Euclidean,
        ] {
            assert!(
                check_frame_property(model.frame(), property, &agent)
                    .unwrap()
                    .is_none(),
                "{agent} violates {property:?}"
            );
        }
    }
    assert!(
        check_frame_property(model.frame(), FrameProperty::Reflexive, &Agent::new("y"))
            .unwrap()
            .is_some(),
        "the countermodel must not be reflexive"
    );
}

#[test]
fn criterion_08_reflexive_scenario_derives_the_four_step_contradiction() {
    let report = run_theorem_fr(TOL).unwrap();
    assert_eq!(report.verdict, Verdict::Contradiction);
    assert!(report.all_steps_verified(), "{:#?}", report.trace);
    let formulas: Vec<&str> = report.trace.iter().map(|s| s.formula.as_str()).collect();
    for expected in [
        "[a]M[d,t4]=fail",
        "[g]M[d,t4]=fail",
        "[c]M[d,t4]=fail",
        "[d]M[d,t4]=fail",
        "[d]~M[d,t4]=fail",
    ] {
        assert!(formulas.contains(&expected), "missing trace step {expected}");
    }
    assert!(report.certificate.is_some());
}

#[test]
fn criterion_09_serial_scenario_contradicts_the_ok_record() {
    let report = run_theorem_fr_star(TOL).unwrap();
    assert_eq!(report.verdict, Verdict::Contradiction);
    assert!(report.all_steps_verified(), "{:#?}", report.trace);
    assert_eq!(
        report.trace.last().unwrap().formula,
        "M[d,t4]=ok & ~M[d,t4]=ok"
    );
    let witness_weight = report
        .expectations
        .iter()
        .find(|check| check.rule == "c:possibility:double-ok")
        .expect("the 11/12 witness rule is recomputed");
    assert!((witness_weight.recomputed - 11.0 / 12.0).abs() <= TOL);
}

#[test]
fn criterion_10_dropping_the_copy_interaction_rules_flips_to_sat() {
    for frame in [FrameChoice::Reflexive, FrameChoice::Serial] {
        let report = ablate(Ablation::DropCopyInteractionRules, frame, TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Sat, "{} frames", frame.label());
        assert!(report.all_steps_verified(), "{:#?}", report.trace);
        let model = report.model.expect("a concrete model is emitted");
        assert!(!model.worlds.is_empty());
        assert_eq!(model.point.as_deref(), Some("a1g1-cok-dok"));
    }
}

fn full_suite_output() -> Vec<u8> {
    let battery: &[&[&str]] = &[
        &["quantum-verify", "--format", "machine"],
        &["fr-run", "--target", "all", "--format", "machine"],
        &["fr-ablate", "--drop", "none", "--frame", "reflexive", "--format", "machine"],
        &["fr-ablate", "--drop", "none", "--frame", "serial", "--format", "machine"],
        &["fr-ablate", "--drop", "u-for-a", "--frame", "reflexive", "--format", "machine"],
        &["fr-ablate", "--drop", "u-for-a", "--frame", "serial", "--format", "machine"],
        &["fr-ablate", "--drop", "star-necessity", "--frame", "reflexive", "--format", "machine"],
        &["fr-ablate", "--drop", "star-necessity", "--frame", "serial", "--format", "machine"],
        &["fr-ablate", "--drop", "star-witness", "--frame", "reflexive", "--format", "machine"],
        &["fr-ablate", "--drop", "star-witness", "--frame", "serial", "--format", "machine"],
    ];
    let mut all = Vec::new();
    for args in battery {
        let output = Command::new(env!("CARGO_BIN_EXE_frlab"))
            .args(*args)
            .output()
            .expect("the workbench binary runs");
        assert!(
            output.status.success(),
            "{args:?} exited with {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        );
        all.extend_from_slice(&output.stdout);
    }
    all
}

#[test]
fn criterion_11_consecutive_full_suite_runs_are_byte_identical() {
    let first = full_suite_output();
    let second = full_suite_output();
    assert!(!first.is_empty());
    assert_eq!(first, second, "machine reports drifted between runs");
}
