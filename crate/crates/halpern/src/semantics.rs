//! Certainty as probability 1, in both formulations, plus false-belief
//! sets.
//!
//! Satisfaction at a world is classical on connectives; `[x]φ` holds when
//! agent x's distribution puts mass ≥ 1−ε on the φ-worlds. With a single
//! distribution per agent this is world-independent, so `[x]φ` is either
//! true everywhere or false everywhere; in the generalized form the
//! distribution at the evaluation world is used.

use crate::structure::{GeneralizedProbabilityStructure, ProbabilityStructure};
use crate::Result;
use frlab_logic::{Agent, Formula};

/// Satisfaction in a single-distribution structure.
pub fn holds(structure: &ProbabilityStructure, world: usize, formula: &Formula) -> Result<bool> {
    match formula {
        Formula::Atom(name) => structure.atom_true_at(name, world),
        Formula::Not(inner) => Ok(!holds(structure, world, inner)?),
        Formula::And(a, b) => Ok(holds(structure, world, a)? && holds(structure, world, b)?),
        Formula::Or(a, b) => Ok(holds(structure, world, a)? || holds(structure, world, b)?),
        Formula::Implies(a, b) => Ok(!holds(structure, world, a)? || holds(structure, world, b)?),
        Formula::Equiv(a, b) => Ok(holds(structure, world, a)? == holds(structure, world, b)?),
        Formula::Box(agent, inner) => certain(structure, agent, inner),
        Formula::Diamond(agent, inner) => {
            let negated = Formula::Not(Box::new((**inner).clone()));
            Ok(!certain(structure, agent, &negated)?)
        }
    }
}

/// Measure formulation of certainty: the mass of the φ-worlds is 1 within
/// the structure's tolerance.
pub fn certain(
    structure: &ProbabilityStructure,
    agent: &Agent,
    formula: &Formula,
) -> Result<bool> {
    let distribution = structure.distribution(agent)?;
    let mut mass = 0.0;
    for (world, &weight) in distribution.iter().enumerate() {
        if holds(structure, world, formula)? {
            mass += weight;
        }
    }
    Ok(mass >= 1.0 - structure.tolerance())
}

/// Support formulation of certainty: φ holds at every world of strictly
/// positive weight.
pub fn certain_prime(
    structure: &ProbabilityStructure,
    agent: &Agent,
    formula: &Formula,
) -> Result<bool> {
    let distribution = structure.distribution(agent)?;
    for (world, &weight) in distribution.iter().enumerate() {
        if weight > 0.0 && !holds(structure, world, formula)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The worlds where some probe is false although the agent is certain of
/// it, together with their mass under the agent's distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FalseBeliefSet {
    pub agent: Agent,
    pub worlds: Vec<String>,
    pub measure: f64,
}

/// Collects `{w | ∃φ ∈ probes: w ⊨ ¬φ ∧ [x]φ}` and reports its measure.
/// Certainty of each probe is world-independent here, so the set is the
/// union of the ¬φ-extensions of exactly the probes the agent is certain
/// of.
pub fn false_beliefs(
    structure: &ProbabilityStructure,
    agent: &Agent,
    probes: &[Formula],
) -> Result<FalseBeliefSet> {
    let distribution = structure.distribution(agent)?;
    let mut members = vec![false; structure.world_count()];
    for probe in probes {
        if !certain(structure, agent, probe)? {
            continue;
        }
        for (world, member) in members.iter_mut().enumerate() {
            if !holds(structure, world, probe)? {
                *member = true;
            }
        }
    }
    let mut worlds = Vec::new();
    let mut measure = 0.0;
    for (world, &is_member) in members.iter().enumerate() {
        if is_member {
            worlds.push(structure.world_name(world).to_owned());
            measure += distribution[world];
        }
    }
    Ok(FalseBeliefSet {
        agent: agent.clone(),
        worlds,
        measure,
    })
}

/// Satisfaction in a generalized structure: `[x]φ` at w uses the
/// distribution x holds at w.
pub fn holds_generalized(
    structure: &GeneralizedProbabilityStructure,
    world: usize,
    formula: &Formula,
) -> Result<bool> {
    match formula {
        Formula::Atom(name) => structure.atom_true_at(name, world),
        Formula::Not(inner) => Ok(!holds_generalized(structure, world, inner)?),
        Formula::And(a, b) => Ok(holds_generalized(structure, world, a)?
            && holds_generalized(structure, world, b)?),
        Formula::Or(a, b) => Ok(holds_generalized(structure, world, a)?
            || holds_generalized(structure, world, b)?),
        Formula::Implies(a, b) => Ok(!holds_generalized(structure, world, a)?
            || holds_generalized(structure, world, b)?),
        Formula::Equiv(a, b) => Ok(holds_generalized(structure, world, a)?
            == holds_generalized(structure, world, b)?),
        Formula::Box(agent, inner) => {
            let distribution = structure.distribution_at(agent, world)?;
            let mut mass = 0.0;
            for (target, &weight) in distribution.iter().enumerate() {
                if holds_generalized(structure, target, inner)? {
                    mass += weight;
                }
            }
            Ok(mass >= 1.0 - structure.tolerance())
        }
        Formula::Diamond(agent, inner) => {
            let negated = Formula::Box(
                agent.clone(),
                Box::new(Formula::Not(Box::new((**inner).clone()))),
            );
            Ok(!holds_generalized(structure, world, &negated)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOLERANCE;
    use frlab_logic::parse;
    use std::collections::BTreeMap;

    fn x() -> Agent {
        Agent::new("x")
    }

    /// Three worlds; p true at u and v; x's mass sits exactly on {u, v}.
    fn supported_on_extension() -> ProbabilityStructure {
        ProbabilityStructure::new(
            vec!["u".into(), "v".into(), "t".into()],
            BTreeMap::from([("p".to_string(), vec!["u".to_string(), "v".to_string()])]),
            BTreeMap::from([(
                x(),
                BTreeMap::from([("u".to_string(), 0.5), ("v".to_string(), 0.5)]),
            )]),
            DEFAULT_TOLERANCE,
        )
        .unwrap()
    }

    #[test]
    fn mass_on_the_extension_gives_certainty_without_validity() {
        let structure = supported_on_extension();
        let p = parse("p").unwrap();
        assert!(certain(&structure, &x(), &p).unwrap());
        assert!(certain_prime(&structure, &x(), &p).unwrap());
        // p is not valid: it fails at t.
        assert!(!holds(&structure, 2, &p).unwrap());
    }

    #[test]
    fn point_mass_on_a_refuting_world_blocks_certainty() {
        let structure = ProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::from([("p".to_string(), vec!["v".to_string()])]),
            BTreeMap::from([(x(), BTreeMap::from([("u".to_string(), 1.0)]))]),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let p = parse("p").unwrap();
        assert!(!certain(&structure, &x(), &p).unwrap());
        assert!(!certain_prime(&structure, &x(), &p).unwrap());
    }

    #[test]
    fn zero_weight_refuting_worlds_are_invisible_to_both_formulations() {
        let structure = ProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::from([("p".to_string(), vec!["u".to_string()])]),
            BTreeMap::from([(x(), BTreeMap::from([("u".to_string(), 1.0)]))]),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let p = parse("p").unwrap();
        assert!(certain(&structure, &x(), &p).unwrap());
        assert!(certain_prime(&structure, &x(), &p).unwrap());
    }

    #[test]
    fn certainty_is_world_independent_here() {
        let structure = supported_on_extension();
        let boxed = parse("[x]p").unwrap();
        for world in 0..3 {
            assert!(holds(&structure, world, &boxed).unwrap());
        }
    }

    #[test]
    fn false_beliefs_collect_refuting_worlds_with_zero_mass() {
        // x is certain of p (mass on u only), but p fails at v: v is a
        // false belief of measure 0.
        let structure = ProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::from([("p".to_string(), vec!["u".to_string()])]),
            BTreeMap::from([(x(), BTreeMap::from([("u".to_string(), 1.0)]))]),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let probes = vec![parse("p").unwrap()];
        let set = false_beliefs(&structure, &x(), &probes).unwrap();
        assert_eq!(set.worlds, vec!["v".to_string()]);
        assert_eq!(set.measure, 0.0);
    }

    #[test]
    fn empty_probes_give_an_empty_false_belief_set() {
        let structure = supported_on_extension();
        let set = false_beliefs(&structure, &x(), &[]).unwrap();
        assert!(set.worlds.is_empty());
        assert_eq!(set.measure, 0.0);
    }

    #[test]
    fn generalized_certainty_varies_by_world() {
        // At u the agent is sure of u (where p holds); at v sure of v
        // (where p fails): [x]p flips between the two worlds.
        let structure = GeneralizedProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::from([("p".to_string(), vec!["u".to_string()])]),
            BTreeMap::from([(
                x(),
                BTreeMap::from([
                    ("u".to_string(), BTreeMap::from([("u".to_string(), 1.0)])),
                    ("v".to_string(), BTreeMap::from([("v".to_string(), 1.0)])),
                ]),
            )]),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let boxed = parse("[x]p").unwrap();
        assert!(holds_generalized(&structure, 0, &boxed).unwrap());
        assert!(!holds_generalized(&structure, 1, &boxed).unwrap());
    }
}
