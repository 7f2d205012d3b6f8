//! Probability structures: worlds, a valuation, and per-agent
//! distributions — one distribution per agent, or one per agent and world
//! in the generalized form.

use crate::{HalpernError, Result};
use frlab_logic::{Agent, LogicError, ModelFile};
use std::collections::{BTreeMap, BTreeSet};

/// A finite world set with one probability distribution per agent.
#[derive(Debug, Clone)]
pub struct ProbabilityStructure {
    worlds: Vec<String>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
    /// Agent → weight per world index; validated to be a distribution.
    weights: BTreeMap<Agent, Vec<f64>>,
    tolerance: f64,
}

impl ProbabilityStructure {
    /// Builds a structure from named parts. Weights omitted for a world
    /// default to zero; each agent's weights must be non-negative and sum
    /// to 1 within the tolerance.
    pub fn new(
        worlds: Vec<String>,
        valuation: BTreeMap<String, Vec<String>>,
        weights: BTreeMap<Agent, BTreeMap<String, f64>>,
        tolerance: f64,
    ) -> Result<Self> {
        let index = index_worlds(&worlds)?;
        let valuation = resolve_valuation(valuation, &index)?;
        let mut resolved = BTreeMap::new();
        for (agent, named) in weights {
            let row = resolve_distribution(&agent, named, &index, worlds.len(), tolerance)?;
            resolved.insert(agent, row);
        }
        Ok(ProbabilityStructure {
            worlds,
            valuation,
            weights: resolved,
            tolerance,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_index(&self, name: &str) -> Result<usize> {
        self.worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| LogicError::UnknownWorld(name.to_owned()).into())
    }

    pub fn world_name(&self, index: usize) -> &str {
        &self.worlds[index]
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.weights.keys()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The agent's weight vector, indexed by world.
    pub fn distribution(&self, agent: &Agent) -> Result<&[f64]> {
        self.weights
            .get(agent)
            .map(Vec::as_slice)
            .ok_or_else(|| LogicError::UnknownAgent(agent.0.clone()).into())
    }

    pub fn atom_true_at(&self, atom: &str, world: usize) -> Result<bool> {
        self.valuation
            .get(atom)
            .map(|set| set.contains(&world))
            .ok_or_else(|| LogicError::UnknownAtom(atom.to_owned()).into())
    }

    /// Atom → world-index extension.
    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }

    /// Lifts to the generalized form by giving every world the agent's
    /// one distribution.
    pub fn generalize(&self) -> GeneralizedProbabilityStructure {
        GeneralizedProbabilityStructure {
            worlds: self.worlds.clone(),
            valuation: self.valuation.clone(),
            weights: self
                .weights
                .iter()
                .map(|(agent, row)| (agent.clone(), vec![row.clone(); self.worlds.len()]))
                .collect(),
            tolerance: self.tolerance,
        }
    }

    /// True when every weight of every agent is strictly positive — the
    /// class of structures whose induced relations are total.
    pub fn has_full_support(&self) -> bool {
        self.weights
            .values()
            .all(|row| row.iter().all(|&w| w > 0.0))
    }
}

/// A structure whose distributions may differ from world to world.
#[derive(Debug, Clone)]
pub struct GeneralizedProbabilityStructure {
    worlds: Vec<String>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
    /// Agent → per-world weight rows (outer index: source world).
    weights: BTreeMap<Agent, Vec<Vec<f64>>>,
    tolerance: f64,
}

impl GeneralizedProbabilityStructure {
    /// Builds from named parts; every world needs a distribution for every
    /// agent.
    pub fn new(
        worlds: Vec<String>,
        valuation: BTreeMap<String, Vec<String>>,
        weights: BTreeMap<Agent, BTreeMap<String, BTreeMap<String, f64>>>,
        tolerance: f64,
    ) -> Result<Self> {
        let index = index_worlds(&worlds)?;
        let valuation = resolve_valuation(valuation, &index)?;
        let mut resolved = BTreeMap::new();
        for (agent, per_world) in weights {
            let mut rows = Vec::with_capacity(worlds.len());
            for world in &worlds {
                let named = per_world.get(world).cloned().ok_or_else(|| {
                    HalpernError::InvalidDistribution {
                        agent: agent.0.clone(),
                        reason: format!("no distribution at world '{world}'"),
                    }
                })?;
                rows.push(resolve_distribution(
                    &agent,
                    named,
                    &index,
                    worlds.len(),
                    tolerance,
                )?);
            }
            resolved.insert(agent, rows);
        }
        Ok(GeneralizedProbabilityStructure {
            worlds,
            valuation,
            weights: resolved,
            tolerance,
        })
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.weights.keys()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// The distribution the agent holds at the given world.
    pub fn distribution_at(&self, agent: &Agent, world: usize) -> Result<&[f64]> {
        self.weights
            .get(agent)
            .map(|rows| rows[world].as_slice())
            .ok_or_else(|| LogicError::UnknownAgent(agent.0.clone()).into())
    }

    pub fn atom_true_at(&self, atom: &str, world: usize) -> Result<bool> {
        self.valuation
            .get(atom)
            .map(|set| set.contains(&world))
            .ok_or_else(|| LogicError::UnknownAtom(atom.to_owned()).into())
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }
}

/// A structure read from a model file: flat weights give the single-
/// distribution form, nested weights the generalized form.
#[derive(Debug, Clone)]
pub enum LoadedStructure {
    Single(ProbabilityStructure),
    PerWorld(GeneralizedProbabilityStructure),
}

/// Interprets a model file's `weights` field as a probability structure.
/// `{agent: {world: number}}` loads as a single distribution per agent,
/// `{agent: {world: {world: number}}}` as per-world distributions.
/// Explicit relation pairs are rejected: accessibility is induced.
pub fn load_structure(file: &ModelFile, tolerance: f64) -> Result<LoadedStructure> {
    let weights = file.weights.as_ref().ok_or(HalpernError::MissingWeights)?;
    if file.relations.values().any(|pairs| !pairs.is_empty()) {
        return Err(HalpernError::ConflictingRelations);
    }
    let map = weights
        .as_object()
        .ok_or_else(|| HalpernError::MalformedWeights("weights must be an object".into()))?;

    // Decide the shape from the first leaf value.
    let mut nested = None;
    for per_agent in map.values() {
        let inner = per_agent.as_object().ok_or_else(|| {
            HalpernError::MalformedWeights("per-agent weights must be an object".into())
        })?;
        if let Some(value) = inner.values().next() {
            nested = Some(value.is_object());
            break;
        }
    }
    let nested = nested.ok_or_else(|| {
        HalpernError::MalformedWeights("weights carry no distributions".into())
    })?;

    let valuation: BTreeMap<String, Vec<String>> = file
        .valuation
        .iter()
        .map(|(atom, worlds)| (atom.clone(), worlds.clone()))
        .collect();

    if nested {
        let mut weights: BTreeMap<Agent, BTreeMap<String, BTreeMap<String, f64>>> =
            BTreeMap::new();
        for (agent, per_agent) in map {
            let mut per_world = BTreeMap::new();
            for (world, row) in object_entries(per_agent)? {
                let mut dist = BTreeMap::new();
                for (target, value) in object_entries(row)? {
                    dist.insert(target.clone(), number(value, agent, world)?);
                }
                per_world.insert(world.clone(), dist);
            }
            weights.insert(Agent::new(agent), per_world);
        }
        Ok(LoadedStructure::PerWorld(
            GeneralizedProbabilityStructure::new(
                file.worlds.clone(),
                valuation,
                weights,
                tolerance,
            )?,
        ))
    } else {
        let mut weights: BTreeMap<Agent, BTreeMap<String, f64>> = BTreeMap::new();
        for (agent, per_agent) in map {
            let mut dist = BTreeMap::new();
            for (world, value) in object_entries(per_agent)? {
                dist.insert(world.clone(), number(value, agent, world)?);
            }
            weights.insert(Agent::new(agent), dist);
        }
        Ok(LoadedStructure::Single(ProbabilityStructure::new(
            file.worlds.clone(),
            valuation,
            weights,
            tolerance,
        )?))
    }
}

fn object_entries(
    value: &serde_json::Value,
) -> Result<impl Iterator<Item = (&String, &serde_json::Value)>> {
    value
        .as_object()
        .map(|map| map.iter())
        .ok_or_else(|| HalpernError::MalformedWeights("expected an object".into()))
}

fn number(value: &serde_json::Value, agent: &str, world: &str) -> Result<f64> {
    value.as_f64().ok_or_else(|| {
        HalpernError::MalformedWeights(format!(
            "weight for agent '{agent}' at world '{world}' is not a number"
        ))
    })
}

fn index_worlds(worlds: &[String]) -> Result<BTreeMap<&str, usize>> {
    let mut index = BTreeMap::new();
    for (i, world) in worlds.iter().enumerate() {
        if index.insert(world.as_str(), i).is_some() {
            return Err(LogicError::DuplicateWorld(world.clone()).into());
        }
    }
    Ok(index)
}

fn resolve_valuation(
    valuation: BTreeMap<String, Vec<String>>,
    index: &BTreeMap<&str, usize>,
) -> Result<BTreeMap<String, BTreeSet<usize>>> {
    let mut resolved = BTreeMap::new();
    for (atom, worlds) in valuation {
        let mut set = BTreeSet::new();
        for world in worlds {
            let &i = index
                .get(world.as_str())
                .ok_or_else(|| LogicError::UnknownWorld(world.clone()))?;
            set.insert(i);
        }
        resolved.insert(atom, set);
    }
    Ok(resolved)
}

fn resolve_distribution(
    agent: &Agent,
    named: BTreeMap<String, f64>,
    index: &BTreeMap<&str, usize>,
    world_count: usize,
    tolerance: f64,
) -> Result<Vec<f64>> {
    let mut row = vec![0.0; world_count];
    for (world, weight) in named {
        let &i = index
            .get(world.as_str())
            .ok_or_else(|| LogicError::UnknownWorld(world.clone()))?;
        if weight < 0.0 {
            return Err(HalpernError::InvalidDistribution {
                agent: agent.0.clone(),
                reason: format!("negative weight {weight} at world '{world}'"),
            });
        }
        row[i] = weight;
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > tolerance {
        return Err(HalpernError::InvalidDistribution {
            agent: agent.0.clone(),
            reason: format!("weights sum to {total}, not 1"),
        });
    }
    Ok(row)
}
