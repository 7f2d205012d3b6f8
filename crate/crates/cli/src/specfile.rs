//! On-disk format for model-search specifications: a JSON document whose
//! formulas are strings in the kernel grammar, converted here into a
//! [`ModelSearchSpec`] for the bounded model finder.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use frlab_logic::search::{
    FixedUniverse, ModelSearchSpec, Universe, WitnessConstraint, WitnessScope,
};
use frlab_logic::{parse, Agent, Formula, FrameProperty};

/// A search specification as written by hand: agents, a universe, frame
/// properties by name, formulas as grammar strings, and optional
/// forbidden pairs and witness requirements.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    agents: Vec<String>,
    universe: UniverseFile,
    #[serde(default)]
    frame: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    must_hold: Vec<String>,
    #[serde(default)]
    must_hold_at_point: Vec<String>,
    #[serde(default)]
    forbidden_pairs: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    required_witnesses: Vec<WitnessFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum UniverseFile {
    /// Search all universes up to this size over the given atoms.
    Bounded {
        world_count_max: usize,
        #[serde(default)]
        atoms: Vec<String>,
    },
    /// Search subsets of an explicitly supplied world set.
    Fixed {
        worlds: Vec<String>,
        #[serde(default)]
        valuation: BTreeMap<String, Vec<String>>,
        #[serde(default)]
        point: Option<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    agent: String,
    /// Worlds the witness is required from; absent means every world.
    #[serde(default)]
    worlds: Option<Vec<String>>,
    target: String,
}

/// Resolves a frame-property name from a specification or command line.
pub fn property_from_name(name: &str) -> Result<FrameProperty, String> {
    match name {
        "reflexive" => Ok(FrameProperty::Reflexive),
        "serial" => Ok(FrameProperty::Serial),
        "transitive" => Ok(FrameProperty::Transitive),
        "symmetric" => Ok(FrameProperty::Symmetric),
        "euclidean" => Ok(FrameProperty::Euclidean),
        other => Err(format!(
            "unknown frame property {other:?} (expected reflexive, serial, \
             transitive, symmetric, or euclidean)"
        )),
    }
}

fn parse_formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("formula {text:?}: {e}"))
}

impl SpecFile {
    /// Parses the JSON document.
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed search specification: {e}"))
    }

    /// Converts the document into a ready-to-run search specification.
    pub fn into_spec(self) -> Result<ModelSearchSpec, String> {
        let agents: Vec<Agent> = self.agents.iter().map(Agent::new).collect();

        let universe = match self.universe {
            UniverseFile::Bounded {
                world_count_max,
                atoms,
            } => Universe::Bounded {
                world_count_max,
                atoms,
            },
            UniverseFile::Fixed {
                worlds,
                valuation,
                point,
            } => Universe::Fixed(FixedUniverse {
                worlds,
                valuation: valuation
                    .into_iter()
                    .map(|(atom, hold)| (atom, hold.into_iter().collect()))
                    .collect(),
                point,
            }),
        };

        let mut frame: BTreeMap<Agent, BTreeSet<FrameProperty>> = BTreeMap::new();
        for (agent, properties) in self.frame {
            let mut set = BTreeSet::new();
            for name in properties {
                set.insert(property_from_name(&name)?);
            }
            frame.insert(Agent::new(agent), set);
        }

        let must_hold = self
            .must_hold
            .iter()
            .map(|f| parse_formula(f))
            .collect::<Result<Vec<_>, _>>()?;
        let must_hold_at_point = self
            .must_hold_at_point
            .iter()
            .map(|f| parse_formula(f))
            .collect::<Result<Vec<_>, _>>()?;

        let forbidden_pairs = self
            .forbidden_pairs
            .into_iter()
            .map(|(agent, pairs)| (Agent::new(agent), pairs.into_iter().collect()))
            .collect();

        let mut required_witnesses = Vec::new();
        for witness in self.required_witnesses {
            required_witnesses.push(WitnessConstraint {
                agent: Agent::new(&witness.agent),
                scope: match witness.worlds {
                    None => WitnessScope::AllWorlds,
                    Some(worlds) => WitnessScope::Worlds(worlds.into_iter().collect()),
                },
                target: parse_formula(&witness.target)?,
            });
        }

        Ok(ModelSearchSpec {
            agents,
            universe,
            frame,
            must_hold,
            must_hold_at_point,
            forbidden_pairs,
            required_witnesses,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_bounded_specification_round_trips_into_a_search_spec() {
        let text = r#"{
            "agents": ["x", "y"],
            "universe": {"bounded": {"world_count_max": 2, "atoms": ["phi"]}},
            "frame": {"x": ["serial", "transitive", "euclidean"],
                      "y": ["serial", "transitive", "euclidean"]},
            "must_hold_at_point": ["[x][y]phi & <x>~phi"]
        }"#;
        let spec = SpecFile::from_json(text).unwrap().into_spec().unwrap();
        assert_eq!(spec.agents.len(), 2);
        assert_eq!(spec.must_hold_at_point.len(), 1);
        assert_eq!(
            spec.frame[&Agent::new("x")],
            BTreeSet::from([
                FrameProperty::Serial,
                FrameProperty::Transitive,
                FrameProperty::Euclidean
            ])
        );
    }

    #[test]
    fn unknown_fields_and_unknown_properties_are_rejected() {
        assert!(SpecFile::from_json(r#"{"agents": [], "universe": {"bounded": {"world_count_max": 1}}, "extra": 1}"#).is_err());
        let text = r#"{
            "agents": ["x"],
            "universe": {"bounded": {"world_count_max": 1}},
            "frame": {"x": ["dense"]}
        }"#;
        assert!(SpecFile::from_json(text).unwrap().into_spec().is_err());
    }
}
