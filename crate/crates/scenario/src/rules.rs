//! The bridge-rule catalogue: quantum expectations turned into modal
//! constraints.
//!
//! Each rule pairs an agent's indicated state (what its records certify)
//! with a projector claim and the recipe that computes the claim's
//! expectation value. The compilation step then applies the certainty
//! bridge in both directions:
//!
//! * expectation 1 — the agent is *certain* of the claim: every
//!   accessible world must satisfy it, so all pairs into claim-violating
//!   worlds are forbidden;
//! * expectation strictly between 0 and 1 — the agent *cannot* be certain
//!   of the claim: some accessible world must violate it, a witness
//!   requirement on the relation.
//!
//! Expectations are never hardcoded: every rule carries its recipe and is
//! recomputed from the protocol unitaries both at catalogue build time
//! and again when a report is assembled.

use crate::atoms::{ind, ind2, ket, measured};
use crate::worlds::{double_ok, extension, ALL_WORLDS};
use crate::{Result, ScenarioError};
use frlab_logic::search::{WitnessConstraint, WitnessScope};
use frlab_logic::{Agent, Formula};
use frlab_quantum::{
    born, evolved_projectors, fail_state, heisenberg, initial_state, ok_state, plus_state,
    protocol_unitaries, sequential_expectation, DenseOperator, StateVector, SystemLabel,
};
use std::collections::{BTreeMap, BTreeSet};

/// How a rule's expectation value is computed from first principles.
#[derive(Debug, Clone)]
pub enum ExpectationRecipe {
    /// `⟨state| operator |state⟩`.
    Born {
        state: StateVector,
        operator: DenseOperator,
    },
    /// `1 − ⟨state| O₁ ⋯ Oₙ |state⟩` — the complement of a sequential
    /// (time-ordered) expectation in the given state.
    SequentialComplement {
        state: StateVector,
        factors: Vec<DenseOperator>,
    },
}

impl ExpectationRecipe {
    /// Recomputes the expectation value; nothing is cached.
    pub fn recompute(&self, tolerance: f64) -> Result<f64> {
        match self {
            ExpectationRecipe::Born { state, operator } => {
                Ok(born(state, operator, tolerance)?)
            }
            ExpectationRecipe::SequentialComplement { state, factors } => {
                let refs: Vec<&DenseOperator> = factors.iter().collect();
                Ok(1.0 - sequential_expectation(state, &refs, tolerance)?)
            }
        }
    }
}

/// Which direction of the certainty bridge a rule exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Expectation 1: accessible worlds must satisfy the claim.
    Certainty,
    /// Expectation strictly between 0 and 1: some accessible world must
    /// violate the claim.
    Possibility,
}

/// One bridge rule, fully self-describing.
#[derive(Debug, Clone)]
pub struct BridgeRule {
    pub id: String,
    pub agent: Agent,
    /// The indicator atom whose worlds the rule applies at.
    pub indicator: String,
    pub recipe: ExpectationRecipe,
    /// The claim whose expectation the recipe computes.
    pub claim: Formula,
    /// Expectation value computed when the catalogue was built.
    pub expectation: f64,
    pub kind: RuleKind,
    /// True when the recipe conjugates by the l→g copy interaction — the
    /// one unitary agent a is permitted to reason through.
    pub uses_copy_interaction: bool,
    /// True for the possibility rules derived from the double-ok history.
    pub double_ok_possibility: bool,
    /// True when the rule leans on the eigenstate link (records certify
    /// the corresponding eigenstate).
    pub eigenstate_link: bool,
    pub note: String,
}

/// Which part of the constraint system to leave out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ablation {
    None,
    /// Drop every rule whose recipe uses the copy interaction — agent a's
    /// reasoning about the late measurement disappears.
    DropCopyInteractionRules,
    /// Drop the certainty direction of the bridge: no forbidden pairs.
    DropCertaintyConstraints,
    /// Drop the possibility direction: no witness requirements.
    DropPossibilityConstraints,
}

impl Ablation {
    /// The name used on the command line and in reports.
    pub fn label(self) -> &'static str {
        match self {
            Ablation::None => "none",
            Ablation::DropCopyInteractionRules => "u-for-a",
            Ablation::DropCertaintyConstraints => "star-necessity",
            Ablation::DropPossibilityConstraints => "star-witness",
        }
    }
}

/// The catalogue compiled into model-finder constraints.
#[derive(Debug, Clone)]
pub struct CompiledConstraints {
    /// Per-agent forbidden pairs, by world name.
    pub forbidden: BTreeMap<Agent, BTreeSet<(String, String)>>,
    pub witnesses: Vec<WitnessConstraint>,
    /// Rule ids that contributed constraints.
    pub kept: Vec<String>,
    /// Rule ids removed by the ablation.
    pub dropped: Vec<String>,
}

fn f_atom(text: String) -> Formula {
    Formula::atom(text)
}

/// Strips one leading negation, or adds one.
fn negated(formula: &Formula) -> Formula {
    if let Formula::Not(inner) = formula {
        (**inner).clone()
    } else {
        formula.clone().not()
    }
}

/// Builds the full bridge-rule catalogue, computing every expectation
/// from the protocol unitaries.
pub fn bridge_rules(tolerance: f64) -> Result<Vec<BridgeRule>> {
    let r = SystemLabel('r');
    let l = SystemLabel('l');
    let g = SystemLabel('g');

    let unitaries = protocol_unitaries();
    let projectors = evolved_projectors();

    let zero_r = StateVector::basis(vec![r], &[0])?;
    let one_r = StateVector::basis(vec![r], &[1])?;
    let zero_l = StateVector::basis(vec![l], &[0])?;
    let one_l = StateVector::basis(vec![l], &[1])?;
    let probe_zero = StateVector::basis(vec![g], &[0])?;
    let plus_zero = plus_state(l).tensor(&probe_zero)?;
    let zero_zero = StateVector::basis(vec![l, g], &[0, 0])?;
    let ok_ra = ok_state(r, SystemLabel('a'));
    let fail_ra = fail_state(r, SystemLabel('a'));
    let ok_lg = ok_state(l, g);
    let fail_lg = fail_state(l, g);

    let pi_ok_ra = DenseOperator::projector_onto(&ok_ra);
    let pi_fail_ra = DenseOperator::projector_onto(&fail_ra);
    let pi_ok_lg = DenseOperator::projector_onto(&ok_lg);
    let pi_fail_lg = DenseOperator::projector_onto(&fail_lg);
    let id_lg = DenseOperator::identity(vec![l, g]);
    let not_ok_lg = id_lg.sub(&pi_ok_lg)?;
    let id_ra = DenseOperator::identity(vec![r, SystemLabel('a')]);
    let not_ok_ra = id_ra.sub(&pi_ok_ra)?;
    let not_fail_ra = id_ra.sub(&pi_fail_ra)?;
    let not_fail_lg = id_lg.sub(&pi_fail_lg)?;
    let id_l = DenseOperator::identity(vec![l]);
    let not_zero_l = id_l.sub(&DenseOperator::proj0(l))?;

    let fail_through_copy = heisenberg(&pi_fail_lg, &unitaries.u_a, tolerance)?;
    let ok_through_copy = heisenberg(&pi_ok_lg, &unitaries.u_a, tolerance)?;
    let not_ok_through_copy = heisenberg(&not_ok_lg, &unitaries.u_a, tolerance)?;

    let init = initial_state();
    let double_ok_factors = vec![
        projectors.ok_lg_at_t4.clone(),
        projectors.ok_ra_at_t3.clone(),
        projectors.one_l_at_t2.clone(),
        projectors.one_r_at_t1.clone(),
    ];
    let ok_with_quiet_g = vec![
        projectors.ok_ra_at_t3.clone(),
        projectors.zero_l_at_t2.clone(),
    ];

    struct Draft {
        id: &'static str,
        agent: &'static str,
        indicator: String,
        recipe: ExpectationRecipe,
        claim: Formula,
        uses_copy_interaction: bool,
        double_ok_possibility: bool,
        eigenstate_link: bool,
        note: &'static str,
    }

    let born_recipe = |state: &StateVector, operator: &DenseOperator| ExpectationRecipe::Born {
        state: state.clone(),
        operator: operator.clone(),
    };

    let drafts = vec![
        Draft {
            id: "a:own:heads",
            agent: "a",
            indicator: ind("a", "0", "r", "t1"),
            recipe: born_recipe(&zero_r, &DenseOperator::proj0(r)),
            claim: f_atom(measured("a", "t1", "0")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "a's heads record certifies the collapsed |0⟩ coin state, which re-reads as heads with certainty",
        },
        Draft {
            id: "a:own:tails",
            agent: "a",
            indicator: ind("a", "1", "r", "t1"),
            recipe: born_recipe(&one_r, &DenseOperator::proj1(r)),
            claim: f_atom(measured("a", "t1", "1")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "a's tails record certifies the collapsed |1⟩ coin state",
        },
        Draft {
            id: "a:copy:fail",
            agent: "a",
            indicator: ind("a", "+0", "lg", "tp"),
            recipe: born_recipe(&plus_zero, &fail_through_copy),
            claim: f_atom(measured("d", "t4", "fail")),
            uses_copy_interaction: true,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "from the tails-indicated |+,0⟩ pair, the copy interaction reaches |fail⟩ with certainty, so a is certain of d's outcome",
        },
        Draft {
            id: "a:copy:not-ok",
            agent: "a",
            indicator: ind("a", "+0", "lg", "tp"),
            recipe: born_recipe(&plus_zero, &not_ok_through_copy),
            claim: negated(&f_atom(measured("d", "t4", "ok"))),
            uses_copy_interaction: true,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "the same indicated state puts zero weight on d reading ok",
        },
        Draft {
            id: "a:copy:heads-fail-open",
            agent: "a",
            indicator: ind("a", "00", "lg", "tp"),
            recipe: born_recipe(&zero_zero, &fail_through_copy),
            claim: f_atom(measured("d", "t4", "fail")),
            uses_copy_interaction: true,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "after heads the indicated |0,0⟩ gives d's fail outcome weight 1/2: a cannot be certain of it",
        },
        Draft {
            id: "a:copy:heads-ok-open",
            agent: "a",
            indicator: ind("a", "00", "lg", "tp"),
            recipe: born_recipe(&zero_zero, &ok_through_copy),
            claim: f_atom(measured("d", "t4", "ok")),
            uses_copy_interaction: true,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "symmetrically, d's ok outcome also has weight 1/2 from |0,0⟩",
        },
        Draft {
            id: "g:own:zero",
            agent: "g",
            indicator: ind("g", "0", "l", "t2"),
            recipe: born_recipe(&zero_l, &DenseOperator::proj0(l)),
            claim: f_atom(measured("g", "t2", "0")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "g's 0 record certifies the collapsed |0⟩ qubit; no inference back to the preparation is made, since a |+⟩ preparation also yields 0 with weight 1/2",
        },
        Draft {
            id: "g:own:one",
            agent: "g",
            indicator: ind("g", "1", "l", "t2"),
            recipe: born_recipe(&one_l, &DenseOperator::proj1(l)),
            claim: f_atom(measured("g", "t2", "1")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "g's 1 record certifies the collapsed |1⟩ qubit",
        },
        Draft {
            id: "g:excludes-prepared-zero",
            agent: "g",
            indicator: ind("g", "1", "l", "t2"),
            recipe: born_recipe(&one_l, &not_zero_l),
            claim: negated(&f_atom(ket("0", "l", "t2"))),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "|0⟩ is an eigenstate of the t2 readout, so a |0⟩ preparation would have persisted and read 0; the indicated |1⟩ is orthogonal to it, excluding the heads-branch preparation",
        },
        Draft {
            id: "c:own:ok",
            agent: "c",
            indicator: ind("c", "ok", "ra", "t3"),
            recipe: born_recipe(&ok_ra, &pi_ok_ra),
            claim: f_atom(measured("c", "t3", "ok")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "c's ok record certifies the collapsed |ok⟩ pair state",
        },
        Draft {
            id: "c:own:ok-excludes-fail",
            agent: "c",
            indicator: ind("c", "ok", "ra", "t3"),
            recipe: born_recipe(&ok_ra, &not_fail_ra),
            claim: negated(&f_atom(measured("c", "t3", "fail"))),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "|ok⟩ and |fail⟩ are orthogonal, so the ok record excludes the fail record",
        },
        Draft {
            id: "c:own:fail",
            agent: "c",
            indicator: ind("c", "fail", "ra", "t3"),
            recipe: born_recipe(&fail_ra, &pi_fail_ra),
            claim: f_atom(measured("c", "t3", "fail")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "c's fail record certifies the collapsed |fail⟩ pair state",
        },
        Draft {
            id: "c:own:fail-excludes-ok",
            agent: "c",
            indicator: ind("c", "fail", "ra", "t3"),
            recipe: born_recipe(&fail_ra, &not_ok_ra),
            claim: negated(&f_atom(measured("c", "t3", "ok"))),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "the fail record excludes the ok record",
        },
        Draft {
            id: "c:init:ok-forces-one",
            agent: "c",
            indicator: ind("c", "init", "ralg", "0"),
            recipe: ExpectationRecipe::SequentialComplement {
                state: init.clone(),
                factors: ok_with_quiet_g.clone(),
            },
            claim: negated(
                &f_atom(measured("c", "t3", "ok")).and(f_atom(measured("g", "t2", "0"))),
            ),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "the evolved initial state carries zero weight on histories where c reads ok while g read 0, so anyone knowing the initial state is certain against them",
        },
        Draft {
            id: "c:possibility:double-ok",
            agent: "c",
            indicator: ind("c", "init", "ralg", "0"),
            recipe: ExpectationRecipe::SequentialComplement {
                state: init.clone(),
                factors: double_ok_factors.clone(),
            },
            claim: negated(&double_ok()),
            uses_copy_interaction: false,
            double_ok_possibility: true,
            eigenstate_link: true,
            note: "the double-ok history keeps weight 1/12, so its complement sits at 11/12 — strictly below certainty: some accessible world must realize the double ok",
        },
        Draft {
            id: "c:halt:d-record",
            agent: "c",
            indicator: ind2("c", "d", "ok", "lg", "5"),
            recipe: born_recipe(&ok_lg, &pi_ok_lg),
            claim: f_atom(ind("d", "ok", "lg", "t4")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "after the halting comparison c holds d's ok record; the nested indicated |ok⟩ state certainly carries it",
        },
        Draft {
            id: "d:own:ok",
            agent: "d",
            indicator: ind("d", "ok", "lg", "t4"),
            recipe: born_recipe(&ok_lg, &pi_ok_lg),
            claim: f_atom(measured("d", "t4", "ok")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "d's ok record certifies the collapsed |ok⟩ pair state",
        },
        Draft {
            id: "d:own:ok-excludes-fail",
            agent: "d",
            indicator: ind("d", "ok", "lg", "t4"),
            recipe: born_recipe(&ok_lg, &not_fail_lg),
            claim: negated(&f_atom(measured("d", "t4", "fail"))),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "the ok record excludes the fail record",
        },
        Draft {
            id: "d:own:fail",
            agent: "d",
            indicator: ind("d", "fail", "lg", "t4"),
            recipe: born_recipe(&fail_lg, &pi_fail_lg),
            claim: f_atom(measured("d", "t4", "fail")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "d's fail record certifies the collapsed |fail⟩ pair state",
        },
        Draft {
            id: "d:own:fail-excludes-ok",
            agent: "d",
            indicator: ind("d", "fail", "lg", "t4"),
            recipe: born_recipe(&fail_lg, &not_ok_lg),
            claim: negated(&f_atom(measured("d", "t4", "ok"))),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "the fail record excludes the ok record",
        },
        Draft {
            id: "d:init:ok-forces-one",
            agent: "d",
            indicator: ind("d", "init", "ralg", "0"),
            recipe: ExpectationRecipe::SequentialComplement {
                state: init.clone(),
                factors: ok_with_quiet_g,
            },
            claim: negated(
                &f_atom(measured("c", "t3", "ok")).and(f_atom(measured("g", "t2", "0"))),
            ),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "d knows the initial state too, and is certain against the same zero-weight histories",
        },
        Draft {
            id: "d:possibility:double-ok",
            agent: "d",
            indicator: ind("d", "init", "ralg", "0"),
            recipe: ExpectationRecipe::SequentialComplement {
                state: init,
                factors: double_ok_factors,
            },
            claim: negated(&double_ok()),
            uses_copy_interaction: false,
            double_ok_possibility: true,
            eigenstate_link: true,
            note: "the same 11/12 bound binds d: the double-ok history stays possible",
        },
        Draft {
            id: "d:halt:c-record",
            agent: "d",
            indicator: ind2("d", "c", "ok", "ra", "5"),
            recipe: born_recipe(&ok_ra, &pi_ok_ra),
            claim: f_atom(ind("c", "ok", "ra", "t3")),
            uses_copy_interaction: false,
            double_ok_possibility: false,
            eigenstate_link: true,
            note: "after the halting comparison d holds c's ok record",
        },
    ];

    let mut rules = Vec::with_capacity(drafts.len());
    for draft in drafts {
        let expectation = draft.recipe.recompute(tolerance)?;
        let kind = if expectation >= 1.0 - tolerance {
            RuleKind::Certainty
        } else if expectation > tolerance {
            RuleKind::Possibility
        } else {
            return Err(ScenarioError::Invariant(format!(
                "rule {} has expectation {expectation}; zero-expectation claims must be stated as their complements",
                draft.id
            )));
        };
        if draft.uses_copy_interaction && draft.agent != "a" {
            return Err(ScenarioError::Invariant(format!(
                "rule {} conjugates by the copy interaction but belongs to agent {}; only a reasons through it",
                draft.id, draft.agent
            )));
        }
        rules.push(BridgeRule {
            id: draft.id.to_string(),
            agent: Agent::new(draft.agent),
            indicator: draft.indicator,
            recipe: draft.recipe,
            claim: draft.claim,
            expectation,
            kind,
            uses_copy_interaction: draft.uses_copy_interaction,
            double_ok_possibility: draft.double_ok_possibility,
            eigenstate_link: draft.eigenstate_link,
            note: draft.note.to_string(),
        });
    }
    Ok(rules)
}

/// Compiles the catalogue into forbidden pairs and witness requirements,
/// applying the requested ablation.
pub fn compile(rules: &[BridgeRule], ablation: Ablation) -> Result<CompiledConstraints> {
    let mut forbidden: BTreeMap<Agent, BTreeSet<(String, String)>> = BTreeMap::new();
    for agent in crate::worlds::agents() {
        forbidden.insert(agent, BTreeSet::new());
    }
    let mut witnesses = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();

    for rule in rules {
        let removed = match ablation {
            Ablation::None => false,
            Ablation::DropCopyInteractionRules => rule.uses_copy_interaction,
            Ablation::DropCertaintyConstraints => rule.kind == RuleKind::Certainty,
            Ablation::DropPossibilityConstraints => rule.kind == RuleKind::Possibility,
        };
        if removed {
            dropped.push(rule.id.clone());
            continue;
        }
        kept.push(rule.id.clone());

        let scope = extension(&Formula::atom(rule.indicator.clone()))?;
        match rule.kind {
            RuleKind::Certainty => {
                let allowed = extension(&rule.claim)?;
                let entry = forbidden
                    .get_mut(&rule.agent)
                    .expect("all agents preseeded");
                for &from in &scope {
                    for (to, world) in ALL_WORLDS.iter().enumerate() {
                        if !allowed.contains(&to) {
                            entry.insert((ALL_WORLDS[from].name(), world.name()));
                        }
                    }
                }
            }
            RuleKind::Possibility => {
                let scope_names: BTreeSet<String> =
                    scope.iter().map(|&i| ALL_WORLDS[i].name()).collect();
                witnesses.push(WitnessConstraint {
                    agent: rule.agent.clone(),
                    scope: WitnessScope::Worlds(scope_names),
                    target: negated(&rule.claim),
                });
            }
        }
    }

    Ok(CompiledConstraints {
        forbidden,
        witnesses,
        kept,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::worlds::W_HAT;
    use crate::DEFAULT_TOLERANCE;

    fn catalogue() -> Vec<BridgeRule> {
        bridge_rules(DEFAULT_TOLERANCE).unwrap()
    }

    #[test]
    fn expectations_match_the_protocol_values() {
        let rules = catalogue();
        let value = |id: &str| {
            rules
                .iter()
                .find(|r| r.id == id)
                .unwrap_or_else(|| panic!("rule {id} missing"))
                .expectation
        };
        assert!((value("a:copy:fail") - 1.0).abs() <= DEFAULT_TOLERANCE);
        assert!((value("a:copy:not-ok") - 1.0).abs() <= DEFAULT_TOLERANCE);
        assert!((value("a:copy:heads-fail-open") - 0.5).abs() <= DEFAULT_TOLERANCE);
        assert!((value("a:copy:heads-ok-open") - 0.5).abs() <= DEFAULT_TOLERANCE);
        assert!((value("c:init:ok-forces-one") - 1.0).abs() <= DEFAULT_TOLERANCE);
        assert!((value("c:possibility:double-ok") - 11.0 / 12.0).abs() <= DEFAULT_TOLERANCE);
        assert!((value("d:possibility:double-ok") - 11.0 / 12.0).abs() <= DEFAULT_TOLERANCE);
    }

    #[test]
    fn kinds_split_into_certainty_and_possibility_as_computed() {
        let rules = catalogue();
        for rule in &rules {
            match rule.kind {
                RuleKind::Certainty => {
                    assert!(rule.expectation >= 1.0 - DEFAULT_TOLERANCE, "{}", rule.id)
                }
                RuleKind::Possibility => assert!(
                    rule.expectation > DEFAULT_TOLERANCE
                        && rule.expectation < 1.0 - DEFAULT_TOLERANCE,
                    "{}",
                    rule.id
                ),
            }
        }
        let possibilities: Vec<&str> = rules
            .iter()
            .filter(|r| r.kind == RuleKind::Possibility)
            .map(|r| r.id.as_str())
            .collect();
        assert_eq!(
            possibilities,
            vec![
                "a:copy:heads-fail-open",
                "a:copy:heads-ok-open",
                "c:possibility:double-ok",
                "d:possibility:double-ok"
            ]
        );
    }

    #[test]
    fn only_agent_a_reasons_through_the_copy_interaction() {
        let rules = catalogue();
        let copy_rules: Vec<&BridgeRule> =
            rules.iter().filter(|r| r.uses_copy_interaction).collect();
        assert_eq!(copy_rules.len(), 4);
        for rule in copy_rules {
            assert_eq!(rule.agent.id(), "a", "{}", rule.id);
        }
    }

    #[test]
    fn full_compilation_poisons_the_double_ok_diagonal() {
        let constraints = compile(&catalogue(), Ablation::None).unwrap();
        let w_hat = W_HAT.name();
        let a_pairs = &constraints.forbidden[&Agent::new("a")];
        assert!(a_pairs.contains(&(w_hat.clone(), w_hat.clone())));
        // Both possibility rules for the double-ok history survive.
        assert_eq!(constraints.witnesses.len(), 4);
    }

    #[test]
    fn dropping_copy_rules_clears_the_diagonal_but_keeps_the_witnesses() {
        let constraints =
            compile(&catalogue(), Ablation::DropCopyInteractionRules).unwrap();
        let w_hat = W_HAT.name();
        for pairs in constraints.forbidden.values() {
            assert!(!pairs.contains(&(w_hat.clone(), w_hat.clone())));
        }
        assert_eq!(constraints.dropped.len(), 4);
        // The two double-ok possibility witnesses remain.
        assert_eq!(constraints.witnesses.len(), 2);
    }

    #[test]
    fn certainty_rules_forbid_exactly_the_claim_violators() {
        let rules = catalogue();
        let rule = rules.iter().find(|r| r.id == "a:copy:fail").unwrap();
        let constraints = compile(std::slice::from_ref(rule), Ablation::None).unwrap();
        let pairs = &constraints.forbidden[&Agent::new("a")];
        // 8 tails worlds × 8 worlds where d did not read fail.
        assert_eq!(pairs.len(), 64);
        for (from, to) in pairs {
            assert!(from.starts_with("a1"), "scope is the tails worlds: {from}");
            assert!(to.ends_with("-dok"), "targets lack the fail record: {to}");
        }
    }
}
