//! Axiom schemata, per-instance validity reports, and the necessitation
//! guard.

use crate::formula::{Agent, Formula};
use crate::model::KripkeModel;
use crate::semantics::{satisfies, valid_in_model};
use crate::{LogicError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The five schemata in play. `K` distributes certainty over implication
/// and holds on all frames; the others correspond to frame properties
/// (T↔reflexive, D↔serial, 4↔transitive, 5↔Euclidean).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AxiomSchema {
    K,
    T,
    D,
    Four,
    Five,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 5] = [
        AxiomSchema::K,
        AxiomSchema::T,
        AxiomSchema::D,
        AxiomSchema::Four,
        AxiomSchema::Five,
    ];

    /// Conventional name (`K`, `T`, `D`, `4`, `5`).
    pub fn name(&self) -> &'static str {
        match self {
            AxiomSchema::K => "K",
            AxiomSchema::T => "T",
            AxiomSchema::D => "D",
            AxiomSchema::Four => "4",
            AxiomSchema::Five => "5",
        }
    }

    /// Instantiates the schema for one agent. `phi` fills the single slot;
    /// `K` additionally consumes `psi` (other schemata ignore it).
    ///
    /// - K: `[x](φ -> ψ) -> ([x]φ -> [x]ψ)`
    /// - T: `[x]φ -> φ`
    /// - D: `[x]φ -> <x>φ`
    /// - 4: `[x]φ -> [x][x]φ`
    /// - 5: `~[x]φ -> [x]~[x]φ`
    pub fn instantiate(&self, agent: &Agent, phi: &Formula, psi: &Formula) -> Formula {
        let x = agent.clone();
        let boxed = |f: &Formula| Formula::Box(x.clone(), Box::new(f.clone()));
        match self {
            AxiomSchema::K => {
                let premise = Formula::Box(
                    x.clone(),
                    Box::new(phi.clone().implies(psi.clone())),
                );
                premise.implies(boxed(phi).implies(boxed(psi)))
            }
            AxiomSchema::T => boxed(phi).implies(phi.clone()),
            AxiomSchema::D => {
                boxed(phi).implies(Formula::Diamond(x, Box::new(phi.clone())))
            }
            AxiomSchema::Four => {
                let inner = boxed(phi);
                inner.clone().implies(Formula::Box(x, Box::new(inner)))
            }
            AxiomSchema::Five => {
                let not_boxed = boxed(phi).not();
                not_boxed
                    .clone()
                    .implies(Formula::Box(x, Box::new(not_boxed)))
            }
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One schema instance that failed, with the world falsifying it.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomFailure {
    pub agent: String,
    /// The full instantiated formula.
    pub instance: String,
    pub falsifying_world: String,
}

/// Outcome of probing one schema against a model over probe formulas.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub schema: AxiomSchema,
    /// Number of instances evaluated (agents × probe combinations).
    pub instances: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn all_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Instantiates `schema` for every declared agent and every probe formula
/// (ordered probe pairs for `K`) and evaluates validity, reporting each
/// failing instance with a falsifying world.
pub fn axiom_validity(
    model: &KripkeModel,
    schema: AxiomSchema,
    probes: &[Formula],
) -> Result<AxiomReport> {
    if probes.is_empty() {
        return Err(LogicError::EmptyProbes);
    }
    let agents: Vec<Agent> = model.frame().agents().cloned().collect();
    let mut instances = 0;
    let mut failures = Vec::new();
    for agent in &agents {
        let pairs: Vec<(&Formula, &Formula)> = if schema == AxiomSchema::K {
            probes
                .iter()
                .flat_map(|phi| probes.iter().map(move |psi| (phi, psi)))
                .collect()
        } else {
            probes.iter().map(|phi| (phi, phi)).collect()
        };
        for (phi, psi) in pairs {
            let instance = schema.instantiate(agent, phi, psi);
            instances += 1;
            if !valid_in_model(model, &instance)? {
                let falsifying = first_falsifying_world(model, &instance)?;
                failures.push(AxiomFailure {
                    agent: agent.0.clone(),
                    instance: instance.to_string(),
                    falsifying_world: falsifying,
                });
            }
        }
    }
    Ok(AxiomReport {
        schema,
        instances,
        failures,
    })
}

fn first_falsifying_world(model: &KripkeModel, formula: &Formula) -> Result<String> {
    for world in 0..model.frame().world_count() {
        if !satisfies(model, world, formula)? {
            return Ok(model.frame().world_name(world).to_owned());
        }
    }
    Err(LogicError::SelfAuditFailed(
        "formula reported invalid but no falsifying world found".into(),
    ))
}

/// The only form in which necessitation is available: as the *checkable
/// implication* "if φ is valid in the model then [x]φ is valid in the
/// model". The kernel deliberately has no operation inferring `[x]φ` from a
/// premise φ that merely holds at a world.
pub fn necessitation_closure_holds(
    model: &KripkeModel,
    agent: &Agent,
    phi: &Formula,
) -> Result<bool> {
    if !model.frame().has_agent(agent) {
        return Err(LogicError::UnknownAgent(agent.0.clone()));
    }
    if !valid_in_model(model, phi)? {
        return Ok(true);
    }
    valid_in_model(model, &Formula::Box(agent.clone(), Box::new(phi.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::KripkeFrame;
    use crate::parse::parse;
    use std::collections::BTreeMap;

    fn reflexive_singleton() -> KripkeModel {
        let frame = KripkeFrame::new(
            vec!["w0".into()],
            vec![Agent::new("x")],
            BTreeMap::from([(Agent::new("x"), vec![("w0".into(), "w0".into())])]),
        )
        .unwrap();
        KripkeModel::new(
            frame,
            BTreeMap::from([("p".into(), vec!["w0".into()]), ("q".into(), vec![])]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn k_holds_on_arbitrary_models() {
        let model = reflexive_singleton();
        let probes = vec![parse("p").unwrap(), parse("q").unwrap()];
        let report = axiom_validity(&model, AxiomSchema::K, &probes).unwrap();
        assert_eq!(report.instances, 4);
        assert!(report.all_valid());
    }

    #[test]
    fn t_holds_on_reflexive_models() {
        let model = reflexive_singleton();
        let probes = vec![parse("p").unwrap(), parse("~q").unwrap()];
        let report = axiom_validity(&model, AxiomSchema::T, &probes).unwrap();
        assert!(report.all_valid());
    }

    #[test]
    fn t_fails_without_reflexivity_and_names_the_world() {
        let frame = KripkeFrame::new(
            vec!["w0".into(), "w1".into()],
            vec![Agent::new("x")],
            BTreeMap::from([(Agent::new("x"), vec![("w0".into(), "w1".into())])]),
        )
        .unwrap();
        let model = KripkeModel::new(
            frame,
            BTreeMap::from([("p".into(), vec!["w1".into()])]),
            None,
        )
        .unwrap();
        let report = axiom_validity(&model, AxiomSchema::T, &[parse("p").unwrap()]).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].falsifying_world, "w0");
    }

    #[test]
    fn empty_probe_list_is_rejected() {
        let model = reflexive_singleton();
        assert!(matches!(
            axiom_validity(&model, AxiomSchema::T, &[]),
            Err(LogicError::EmptyProbes)
        ));
    }

    #[test]
    fn necessitation_closure_is_an_implication_not_a_rule() {
        let model = reflexive_singleton();
        let x = Agent::new("x");
        // p is valid in this model, so [x]p must be too.
        assert!(necessitation_closure_holds(&model, &x, &parse("p").unwrap()).unwrap());
        // q is invalid, so the implication holds vacuously.
        assert!(necessitation_closure_holds(&model, &x, &parse("q").unwrap()).unwrap());
    }
}
