//! Frame-property checking with violation witnesses.

use crate::formula::Agent;
use crate::model::KripkeFrame;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The five relational properties that characterize the axiom systems in
/// play: T needs reflexivity, D seriality, 4 transitivity, B symmetry, and
/// 5 the Euclidean property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameProperty {
    Reflexive,
    Serial,
    Transitive,
    Symmetric,
    Euclidean,
}

impl FrameProperty {
    /// All five properties in declaration order.
    pub const ALL: [FrameProperty; 5] = [
        FrameProperty::Reflexive,
        FrameProperty::Serial,
        FrameProperty::Transitive,
        FrameProperty::Symmetric,
        FrameProperty::Euclidean,
    ];

    /// Lowercase name, matching the serialized form.
    pub fn name(&self) -> &'static str {
        match self {
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Serial => "serial",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Symmetric => "symmetric",
            FrameProperty::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FrameProperty {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "reflexive" => Ok(FrameProperty::Reflexive),
            "serial" => Ok(FrameProperty::Serial),
            "transitive" => Ok(FrameProperty::Transitive),
            "symmetric" => Ok(FrameProperty::Symmetric),
            "euclidean" => Ok(FrameProperty::Euclidean),
            other => Err(format!(
                "unknown frame property '{other}' (expected reflexive, serial, transitive, symmetric, or euclidean)"
            )),
        }
    }
}

/// A concrete counterexample to a frame property, with world names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyViolation {
    pub agent: String,
    pub property: FrameProperty,
    /// The worlds witnessing the violation, in the order the property's
    /// definition mentions them.
    pub worlds: Vec<String>,
}

impl fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails for agent {} at ({})",
            self.property,
            self.agent,
            self.worlds.join(", ")
        )
    }
}

/// Checks one property of one agent's relation; `Ok(None)` means it holds,
/// `Ok(Some(violation))` carries a concrete witnessing tuple.
pub fn check_frame_property(
    frame: &KripkeFrame,
    property: FrameProperty,
    agent: &Agent,
) -> Result<Option<PropertyViolation>> {
    let relation = frame.relation(agent)?;
    let n = frame.world_count();
    let has = |from: usize, to: usize| relation.contains(&(from, to));
    let violation = |worlds: Vec<usize>| {
        Some(PropertyViolation {
            agent: agent.0.clone(),
            property,
            worlds: worlds
                .into_iter()
                .map(|w| frame.world_name(w).to_owned())
                .collect(),
        })
    };

    match property {
        FrameProperty::Reflexive => {
            for w in 0..n {
                if !has(w, w) {
                    return Ok(violation(vec![w]));
                }
            }
        }
        FrameProperty::Serial => {
            for w in 0..n {
                if frame.successors(agent, w)?.next().is_none() {
                    return Ok(violation(vec![w]));
                }
            }
        }
        FrameProperty::Transitive => {
            for &(w1, w2) in relation {
                for w3 in frame.successors(agent, w2)? {
                    if !has(w1, w3) {
                        return Ok(violation(vec![w1, w2, w3]));
                    }
                }
            }
        }
        FrameProperty::Symmetric => {
            for &(w1, w2) in relation {
                if !has(w2, w1) {
                    return Ok(violation(vec![w1, w2]));
                }
            }
        }
        FrameProperty::Euclidean => {
            // w → w1 and w → w2 require w1 → w2 (and symmetrically w2 → w1,
            // covered by the loop visiting both orders).
            for &(w, w1) in relation {
                for w2 in frame.successors(agent, w)? {
                    if !has(w1, w2) {
                        return Ok(violation(vec![w, w1, w2]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Checks a property for every agent; returns the first violation found
/// (agents in sorted order), or `None` when all relations satisfy it.
pub fn check_frame_property_all(
    frame: &KripkeFrame,
    property: FrameProperty,
) -> Result<Option<PropertyViolation>> {
    let agents: Vec<Agent> = frame.agents().cloned().collect();
    for agent in agents {
        if let Some(violation) = check_frame_property(frame, property, &agent)? {
            return Ok(Some(violation));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn frame_with(pairs: Vec<(&str, &str)>) -> KripkeFrame {
        KripkeFrame::new(
            vec!["w0".into(), "w1".into(), "w2".into()],
            vec![Agent::new("x")],
            BTreeMap::from([(
                Agent::new("x"),
                pairs
                    .into_iter()
                    .map(|(a, b)| (a.to_owned(), b.to_owned()))
                    .collect(),
            )]),
        )
        .unwrap()
    }

    #[test]
    fn empty_relation_is_vacuously_transitive_but_not_serial() {
        let frame = frame_with(vec![]);
        let x = Agent::new("x");
        assert!(check_frame_property(&frame, FrameProperty::Transitive, &x)
            .unwrap()
            .is_none());
        let violation = check_frame_property(&frame, FrameProperty::Serial, &x)
            .unwrap()
            .unwrap();
        assert_eq!(violation.worlds, vec!["w0"]);
    }

    #[test]
    fn identity_relation_satisfies_all_five() {
        let frame = frame_with(vec![("w0", "w0"), ("w1", "w1"), ("w2", "w2")]);
        let x = Agent::new("x");
        for property in FrameProperty::ALL {
            assert!(
                check_frame_property(&frame, property, &x).unwrap().is_none(),
                "{property} should hold for the identity relation"
            );
        }
    }

    #[test]
    fn transitivity_violation_names_the_broken_triple() {
        let frame = frame_with(vec![("w0", "w1"), ("w1", "w2")]);
        let x = Agent::new("x");
        let violation = check_frame_property(&frame, FrameProperty::Transitive, &x)
            .unwrap()
            .unwrap();
        assert_eq!(violation.worlds, vec!["w0", "w1", "w2"]);
    }

    #[test]
    fn euclidean_needs_sibling_links_both_ways() {
        // w0 → w1 and w0 → w2 without w1 ↔ w2 breaks the property.
        let frame = frame_with(vec![("w0", "w1"), ("w0", "w2")]);
        let x = Agent::new("x");
        let violation = check_frame_property(&frame, FrameProperty::Euclidean, &x)
            .unwrap()
            .unwrap();
        assert_eq!(violation.property, FrameProperty::Euclidean);
        // First failing triple in relation order: w0 → w1, w0 → w1 needs
        // w1 → w1.
        assert_eq!(violation.worlds, vec!["w0", "w1", "w1"]);
    }
}
