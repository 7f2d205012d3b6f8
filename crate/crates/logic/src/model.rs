//! Finite Kripke frames and models, with a canonical JSON file format.

use crate::formula::Agent;
use crate::{LogicError, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A finite frame: an ordered world set plus one accessibility relation per
/// agent. Worlds are addressed by index internally and by name externally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    /// Agent id → set of (source, target) world indices.
    relations: BTreeMap<Agent, BTreeSet<(usize, usize)>>,
}

impl KripkeFrame {
    /// Builds a frame from world names, agents, and named relation pairs.
    pub fn new(
        worlds: Vec<String>,
        agents: Vec<Agent>,
        relations: BTreeMap<Agent, Vec<(String, String)>>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for world in &worlds {
            if !seen.insert(world.clone()) {
                return Err(LogicError::DuplicateWorld(world.clone()));
            }
        }
        let mut frame = KripkeFrame {
            worlds,
            relations: BTreeMap::new(),
        };
        let mut agent_seen = BTreeSet::new();
        for agent in agents {
            if !agent_seen.insert(agent.clone()) {
                return Err(LogicError::DuplicateAgent(agent.0));
            }
            frame.relations.insert(agent, BTreeSet::new());
        }
        for (agent, pairs) in relations {
            if !frame.relations.contains_key(&agent) {
                return Err(LogicError::UnknownAgent(agent.0));
            }
            let mut set = BTreeSet::new();
            for (from, to) in pairs {
                let from_idx = frame.world_index(&from)?;
                let to_idx = frame.world_index(&to)?;
                set.insert((from_idx, to_idx));
            }
            frame.relations.insert(agent, set);
        }
        Ok(frame)
    }

    /// World names in declaration order.
    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    /// Number of worlds.
    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    /// Resolves a world name to its index.
    pub fn world_index(&self, name: &str) -> Result<usize> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| LogicError::UnknownWorld(name.to_owned()))
    }

    /// The name of the world at `index`.
    pub fn world_name(&self, index: usize) -> &str {
        &self.worlds[index]
    }

    /// Declared agents in sorted order.
    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.relations.keys()
    }

    /// True when the agent is declared.
    pub fn has_agent(&self, agent: &Agent) -> bool {
        self.relations.contains_key(agent)
    }

    /// The agent's accessibility relation as index pairs.
    pub fn relation(&self, agent: &Agent) -> Result<&BTreeSet<(usize, usize)>> {
        self.relations
            .get(agent)
            .ok_or_else(|| LogicError::UnknownAgent(agent.0.clone()))
    }

    /// Worlds the agent can access from `world`.
    pub fn successors<'a>(
        &'a self,
        agent: &Agent,
        world: usize,
    ) -> Result<impl Iterator<Item = usize> + 'a> {
        Ok(self
            .relation(agent)?
            .range((world, 0)..=(world, usize::MAX))
            .map(|&(_, to)| to))
    }
}

/// A Kripke model: a frame plus an atom valuation and an optional
/// distinguished evaluation world (the point).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    frame: KripkeFrame,
    /// Atom name → set of world indices where the atom is true. An atom
    /// present with an empty set is *declared false everywhere*; an atom
    /// absent from the map is *unknown* and evaluating it is an error.
    valuation: BTreeMap<String, BTreeSet<usize>>,
    point: Option<usize>,
}

impl KripkeModel {
    /// Builds a model over a frame from a named valuation.
    pub fn new(
        frame: KripkeFrame,
        valuation: BTreeMap<String, Vec<String>>,
        point: Option<String>,
    ) -> Result<Self> {
        let mut resolved = BTreeMap::new();
        for (atom, worlds) in valuation {
            let mut set = BTreeSet::new();
            for world in worlds {
                set.insert(frame.world_index(&world)?);
            }
            resolved.insert(atom, set);
        }
        let point = match point {
            Some(name) => Some(frame.world_index(&name)?),
            None => None,
        };
        Ok(KripkeModel {
            frame,
            valuation: resolved,
            point,
        })
    }

    /// Builds a model directly from index-based parts; used by the search
    /// engine, which works in index space throughout.
    pub fn from_indexed(
        frame: KripkeFrame,
        valuation: BTreeMap<String, BTreeSet<usize>>,
        point: Option<usize>,
    ) -> Result<Self> {
        let count = frame.world_count();
        for (atom, worlds) in &valuation {
            if let Some(&bad) = worlds.iter().find(|&&w| w >= count) {
                return Err(LogicError::UnknownWorld(format!(
                    "index {bad} (valuation of '{atom}')"
                )));
            }
        }
        if let Some(p) = point {
            if p >= count {
                return Err(LogicError::UnknownWorld(format!("index {p} (point)")));
            }
        }
        Ok(KripkeModel {
            frame,
            valuation,
            point,
        })
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    /// Atom → world-index valuation map.
    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }

    /// The distinguished world, if any.
    pub fn point(&self) -> Option<usize> {
        self.point
    }

    /// Replaces the distinguished world.
    pub fn with_point(mut self, point: Option<usize>) -> Self {
        self.point = point;
        self
    }

    /// Whether `atom` is true at `world`; unknown atoms are errors.
    pub fn atom_true_at(&self, atom: &str, world: usize) -> Result<bool> {
        self.valuation
            .get(atom)
            .map(|worlds| worlds.contains(&world))
            .ok_or_else(|| LogicError::UnknownAtom(atom.to_owned()))
    }

    /// Declares an atom, truthful at the given world indices.
    pub fn declare_atom(&mut self, atom: impl Into<String>, worlds: BTreeSet<usize>) {
        self.valuation.insert(atom.into(), worlds);
    }

    /// Serializes to the canonical JSON file form.
    pub fn to_file(&self) -> ModelFile {
        let name = |i: &usize| self.frame.worlds[*i].clone();
        ModelFile {
            worlds: self.frame.worlds.clone(),
            agents: self.frame.relations.keys().map(|a| a.0.clone()).collect(),
            relations: self
                .frame
                .relations
                .iter()
                .map(|(agent, pairs)| {
                    (
                        agent.0.clone(),
                        pairs.iter().map(|(f, t)| (name(f), name(t))).collect(),
                    )
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(atom, worlds)| (atom.clone(), worlds.iter().map(name).collect()))
                .collect(),
            point: self.point.map(|p| self.frame.worlds[p].clone()),
            weights: None,
        }
    }

    /// Canonical JSON text (pretty-printed, sorted maps, trailing newline).
    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    /// Parses a model from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        ModelFile::from_json(text)?.into_kripke()
    }
}

/// The on-disk document shared by Kripke models and probability structures.
/// Field order is fixed by declaration order here; maps serialize sorted.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    /// Probability weights, present only for probability structures:
    /// either `{agent: {world: weight}}` or `{agent: {world: {world:
    /// weight}}}`. Interpreted by the probability-structure layer; plain
    /// Kripke loading requires it to be absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<serde_json::Value>,
}

impl ModelFile {
    /// Parses the document from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LogicError::InvalidModelFile(e.to_string()))
    }

    /// Canonical JSON text: two-space indentation, sorted map keys (via
    /// `BTreeMap`), arrays in stored order, trailing newline. Reloading and
    /// re-serializing this text reproduces it byte-for-byte.
    pub fn to_json(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("model files serialize infallibly");
        text.push('\n');
        text
    }

    /// Validates and converts into a Kripke model. Fails if `weights` is
    /// present — such files are probability structures, not plain models.
    pub fn into_kripke(self) -> Result<KripkeModel> {
        if self.weights.is_some() {
            return Err(LogicError::InvalidModelFile(
                "file carries probability weights; load it as a probability structure".into(),
            ));
        }
        self.into_kripke_ignoring_weights()
    }

    /// Validates and converts the Kripke part, ignoring any weights; the
    /// probability-structure layer builds on this.
    pub fn into_kripke_ignoring_weights(self) -> Result<KripkeModel> {
        let agents = self.agents.iter().map(|a| Agent::new(a.clone())).collect();
        let relations = self
            .relations
            .into_iter()
            .map(|(agent, pairs)| (Agent::new(agent), pairs))
            .collect();
        let frame = KripkeFrame::new(self.worlds, agents, relations)?;
        KripkeModel::new(frame, self.valuation, self.point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_model() -> KripkeModel {
        let frame = KripkeFrame::new(
            vec!["w0".into(), "w1".into()],
            vec![Agent::new("x"), Agent::new("y")],
            BTreeMap::from([
                (
                    Agent::new("x"),
                    vec![("w0".into(), "w0".into()), ("w1".into(), "w1".into())],
                ),
                (
                    Agent::new("y"),
                    vec![("w0".into(), "w1".into()), ("w1".into(), "w1".into())],
                ),
            ]),
        )
        .unwrap();
        KripkeModel::new(
            frame,
            BTreeMap::from([("phi".into(), vec!["w1".into()])]),
            Some("w0".into()),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_exact() {
        let model = two_world_model();
        let text = model.to_json();
        let reloaded = KripkeModel::from_json(&text).unwrap();
        assert_eq!(reloaded, model);
        assert_eq!(reloaded.to_json(), text);
    }

    #[test]
    fn rejects_relation_over_unknown_world() {
        let result = KripkeFrame::new(
            vec!["w0".into()],
            vec![Agent::new("x")],
            BTreeMap::from([(Agent::new("x"), vec![("w0".into(), "w9".into())])]),
        );
        assert!(matches!(result, Err(LogicError::UnknownWorld(_))));
    }

    #[test]
    fn rejects_relation_for_undeclared_agent() {
        let result = KripkeFrame::new(
            vec!["w0".into()],
            vec![Agent::new("x")],
            BTreeMap::from([(Agent::new("z"), vec![("w0".into(), "w0".into())])]),
        );
        assert!(matches!(result, Err(LogicError::UnknownAgent(_))));
    }

    #[test]
    fn rejects_duplicate_worlds() {
        let result = KripkeFrame::new(
            vec!["w0".into(), "w0".into()],
            vec![Agent::new("x")],
            BTreeMap::new(),
        );
        assert!(matches!(result, Err(LogicError::DuplicateWorld(_))));
    }

    #[test]
    fn weighted_files_refuse_plain_kripke_loading() {
        let mut file = two_world_model().to_file();
        file.weights = Some(serde_json::json!({"x": {"w0": 1.0}}));
        assert!(matches!(
            file.into_kripke(),
            Err(LogicError::InvalidModelFile(_))
        ));
    }

    #[test]
    fn successors_follow_the_relation() {
        let model = two_world_model();
        let succ: Vec<usize> = model
            .frame()
            .successors(&Agent::new("y"), 0)
            .unwrap()
            .collect();
        assert_eq!(succ, vec![1]);
    }
}
