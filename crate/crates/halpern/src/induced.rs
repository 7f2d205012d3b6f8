//! The Kripke model a probability structure induces: accessibility is
//! distribution support.
//!
//! `w R_x w'` iff the distribution x holds at w gives w' strictly positive
//! weight. Distributions sum to 1, so every row has nonempty support and
//! the induced frame is always serial. When the distribution is
//! world-independent (the single-distribution form), all rows coincide,
//! which forces transitivity and the Euclidean property; if moreover every
//! weight is positive, the relation is total and hence reflexive.

use crate::structure::GeneralizedProbabilityStructure;
use crate::Result;
use frlab_logic::{Agent, KripkeFrame, KripkeModel};
use std::collections::BTreeMap;

/// Builds the support-induced Kripke model. The valuation is copied; no
/// point is set.
pub fn induced_kripke(structure: &GeneralizedProbabilityStructure) -> Result<KripkeModel> {
    let worlds = structure.worlds().to_vec();
    let agents: Vec<Agent> = structure.agents().cloned().collect();
    let mut relations: BTreeMap<Agent, Vec<(String, String)>> = BTreeMap::new();
    for agent in &agents {
        let mut pairs = Vec::new();
        for from in 0..structure.world_count() {
            let row = structure.distribution_at(agent, from)?;
            for (to, &weight) in row.iter().enumerate() {
                if weight > 0.0 {
                    pairs.push((worlds[from].clone(), worlds[to].clone()));
                }
            }
        }
        relations.insert(agent.clone(), pairs);
    }
    let frame = KripkeFrame::new(worlds, agents, relations)?;
    Ok(KripkeModel::from_indexed(
        frame,
        structure.valuation().clone(),
        None,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOLERANCE;
    use frlab_logic::{check_frame_property, FrameProperty};
    use std::collections::BTreeMap;

    fn x() -> Agent {
        Agent::new("x")
    }

    #[test]
    fn point_masses_on_self_induce_the_identity_relation() {
        let structure = GeneralizedProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::new(),
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
        let model = induced_kripke(&structure).unwrap();
        let relation = model.frame().relation(&x()).unwrap();
        assert_eq!(relation.len(), 2);
        assert!(relation.contains(&(0, 0)) && relation.contains(&(1, 1)));
        assert!(
            check_frame_property(model.frame(), FrameProperty::Reflexive, &x())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn strictly_positive_weights_induce_the_total_relation() {
        let half = BTreeMap::from([("u".to_string(), 0.5), ("v".to_string(), 0.5)]);
        let structure = GeneralizedProbabilityStructure::new(
            vec!["u".into(), "v".into()],
            BTreeMap::new(),
            BTreeMap::from([(
                x(),
                BTreeMap::from([
                    ("u".to_string(), half.clone()),
                    ("v".to_string(), half.clone()),
                ]),
            )]),
            DEFAULT_TOLERANCE,
        )
        .unwrap();
        let model = induced_kripke(&structure).unwrap();
        assert_eq!(model.frame().relation(&x()).unwrap().len(), 4);
    }
}
