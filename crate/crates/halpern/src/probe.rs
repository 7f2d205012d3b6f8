//! Soundness spot-checks: which modal systems do probability structures
//! validate?
//!
//! Arbitrary single-distribution structures validate KD45; structures
//! whose every weight is strictly positive additionally validate the
//! truth axiom, giving S5. These are sampled checks of the soundness
//! directions only — nothing here constitutes a completeness claim. The
//! converse boundary is witnessed constructively: [`t_axiom_falsifier`]
//! builds a structure outside the full-support class on which a T
//! instance fails.

use crate::semantics::holds;
use crate::structure::ProbabilityStructure;
use crate::{HalpernError, Result};
use frlab_logic::{Agent, AxiomSchema, Formula};
use std::collections::BTreeMap;

/// The two systems probed, each with its axiom schemata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicSystem {
    /// Distribution, introspection both ways, no truth axiom.
    Kd45,
    /// KD45 plus the truth axiom; sound for full-support structures.
    S5,
}

impl LogicSystem {
    pub fn name(&self) -> &'static str {
        match self {
            LogicSystem::Kd45 => "KD45",
            LogicSystem::S5 => "S5",
        }
    }

    pub fn schemata(&self) -> &'static [AxiomSchema] {
        match self {
            LogicSystem::Kd45 => &[
                AxiomSchema::K,
                AxiomSchema::D,
                AxiomSchema::Four,
                AxiomSchema::Five,
            ],
            LogicSystem::S5 => &[
                AxiomSchema::K,
                AxiomSchema::T,
                AxiomSchema::D,
                AxiomSchema::Four,
                AxiomSchema::Five,
            ],
        }
    }
}

/// One axiom instance falsified at a world of a sampled structure.
#[derive(Debug, Clone)]
pub struct SoundnessFailure {
    pub structure_index: usize,
    pub agent: Agent,
    pub schema: AxiomSchema,
    pub instance: String,
    pub world: String,
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub system: LogicSystem,
    pub structures_checked: usize,
    pub instances_checked: u64,
    pub failures: Vec<SoundnessFailure>,
}

impl SoundnessReport {
    pub fn all_sound(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates every axiom instance of the system (instantiated with each
/// probe, and probe pairs for K) at every world of every structure, under
/// probability-1 semantics. S5 requires full-support structures — handing
/// it a structure with a zero-weight world is a sampling error, reported
/// as such rather than as a soundness failure.
pub fn soundness_probe(
    system: LogicSystem,
    structures: &[ProbabilityStructure],
    probes: &[Formula],
) -> Result<SoundnessReport> {
    if probes.is_empty() {
        return Err(frlab_logic::LogicError::EmptyProbes.into());
    }
    let mut failures = Vec::new();
    let mut instances_checked = 0u64;
    for (structure_index, structure) in structures.iter().enumerate() {
        if system == LogicSystem::S5 && !structure.has_full_support() {
            return Err(HalpernError::InvalidDistribution {
                agent: "-".into(),
                reason: format!(
                    "structure {structure_index} has a zero-weight world; S5 is probed on the \
                     full-support class only"
                ),
            });
        }
        let agents: Vec<Agent> = structure.agents().cloned().collect();
        for agent in &agents {
            for schema in system.schemata() {
                let instances: Vec<Formula> = if *schema == AxiomSchema::K {
                    probes
                        .iter()
                        .flat_map(|phi| {
                            probes.iter().map(move |psi| schema.instantiate(agent, phi, psi))
                        })
                        .collect()
                } else {
                    probes
                        .iter()
                        .map(|phi| schema.instantiate(agent, phi, phi))
                        .collect()
                };
                for instance in instances {
                    instances_checked += 1;
                    for world in 0..structure.world_count() {
                        if !holds(structure, world, &instance)? {
                            failures.push(SoundnessFailure {
                                structure_index,
                                agent: agent.clone(),
                                schema: *schema,
                                instance: instance.to_string(),
                                world: structure.world_name(world).to_owned(),
                            });
                            break;
                        }
                    }
                }
            }
        }
    }
    Ok(SoundnessReport {
        system,
        structures_checked: structures.len(),
        instances_checked,
        failures,
    })
}

/// A two-world structure outside the full-support class that falsifies
/// the truth axiom: the agent's whole mass sits on the world where `p`
/// holds, so `[x]p` is true everywhere, yet `p` fails at the zero-weight
/// world — `[x]p -> p` is false there.
pub fn t_axiom_falsifier(tolerance: f64) -> ProbabilityStructure {
    ProbabilityStructure::new(
        vec!["believed".into(), "actual".into()],
        BTreeMap::from([("p".to_string(), vec!["believed".to_string()])]),
        BTreeMap::from([(
            Agent::new("x"),
            BTreeMap::from([("believed".to_string(), 1.0)]),
        )]),
        tolerance,
    )
    .expect("hand-built structure is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOLERANCE;
    use frlab_logic::parse;

    #[test]
    fn the_constructed_falsifier_breaks_exactly_the_truth_axiom() {
        let structure = t_axiom_falsifier(DEFAULT_TOLERANCE);
        let probes = vec![parse("p").unwrap()];

        let t_instance = AxiomSchema::T.instantiate(&Agent::new("x"), &probes[0], &probes[0]);
        assert!(holds(&structure, 0, &t_instance).unwrap());
        assert!(!holds(&structure, 1, &t_instance).unwrap());

        // The same structure is fine for KD45.
        let report =
            soundness_probe(LogicSystem::Kd45, std::slice::from_ref(&structure), &probes)
                .unwrap();
        assert!(report.all_sound(), "failures: {:?}", report.failures);

        // And it is rejected outright as an S5 sample.
        assert!(soundness_probe(LogicSystem::S5, &[structure], &probes).is_err());
    }

    #[test]
    fn empty_probe_lists_are_rejected() {
        let structure = t_axiom_falsifier(DEFAULT_TOLERANCE);
        assert!(soundness_probe(LogicSystem::Kd45, &[structure], &[]).is_err());
    }
}
