//! Seeded random generation of models and formulas for property testing.
//!
//! Frame properties are enforced constructively: a random relation is
//! closed under the requested properties (diagonal for reflexivity,
//! inverses for symmetry, a joint transitive/Euclidean fixpoint, self-loops
//! for seriality), so samplers yield models that *provably* lie in the
//! requested frame class rather than filtering and retrying.

use crate::formula::{Agent, Formula};
use crate::frames::{check_frame_property, FrameProperty};
use crate::model::{KripkeFrame, KripkeModel};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Random model with `1..=max_worlds` worlds named `w0..`, arbitrary
/// relations for each agent, and an arbitrary valuation for each atom.
pub fn random_model(
    rng: &mut impl Rng,
    agents: &[Agent],
    max_worlds: usize,
    atoms: &[String],
) -> KripkeModel {
    random_model_with(rng, agents, max_worlds, atoms, &BTreeSet::new())
}

/// Random model whose every relation is closed under the given frame
/// properties.
pub fn random_model_with(
    rng: &mut impl Rng,
    agents: &[Agent],
    max_worlds: usize,
    atoms: &[String],
    properties: &BTreeSet<FrameProperty>,
) -> KripkeModel {
    let n = rng.gen_range(1..=max_worlds.max(1));
    let worlds: Vec<String> = (0..n).map(|w| format!("w{w}")).collect();

    let mut unique_agents: Vec<Agent> = Vec::new();
    for agent in agents {
        if !unique_agents.contains(agent) {
            unique_agents.push(agent.clone());
        }
    }

    let mut relations: BTreeMap<Agent, Vec<(String, String)>> = BTreeMap::new();
    for agent in &unique_agents {
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for from in 0..n {
            for to in 0..n {
                if rng.gen_bool(0.4) {
                    pairs.insert((from, to));
                }
            }
        }
        close_under(&mut pairs, n, properties);
        relations.insert(
            agent.clone(),
            pairs
                .into_iter()
                .map(|(f, t)| (worlds[f].clone(), worlds[t].clone()))
                .collect(),
        );
    }

    let mut valuation: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for atom in atoms {
        let extension = (0..n)
            .filter(|_| rng.gen_bool(0.5))
            .map(|w| worlds[w].clone())
            .collect();
        valuation.insert(atom.clone(), extension);
    }

    let point = Some(worlds[rng.gen_range(0..n)].clone());
    let frame = KripkeFrame::new(worlds, unique_agents.clone(), relations)
        .expect("synthesized frame is well-formed");
    let model =
        KripkeModel::new(frame, valuation, point).expect("synthesized model is well-formed");

    for agent in &unique_agents {
        for property in properties {
            let violation = check_frame_property(model.frame(), *property, agent)
                .expect("agent exists in synthesized frame");
            assert!(
                violation.is_none(),
                "closure failed to enforce {property}: {violation:?}"
            );
        }
    }
    model
}

/// Closes a relation under the requested properties. Transitivity and the
/// Euclidean property interact (each can create pairs the other must act
/// on), so they share a fixpoint loop; seriality is patched last with
/// self-loops, which preserve every other property here.
fn close_under(pairs: &mut BTreeSet<(usize, usize)>, n: usize, properties: &BTreeSet<FrameProperty>) {
    if properties.contains(&FrameProperty::Reflexive) {
        for w in 0..n {
            pairs.insert((w, w));
        }
    }
    if properties.contains(&FrameProperty::Symmetric) {
        let snapshot: Vec<_> = pairs.iter().copied().collect();
        for (from, to) in snapshot {
            pairs.insert((to, from));
        }
    }
    let transitive = properties.contains(&FrameProperty::Transitive);
    let euclidean = properties.contains(&FrameProperty::Euclidean);
    let symmetric = properties.contains(&FrameProperty::Symmetric);
    if transitive || euclidean {
        loop {
            let mut added = Vec::new();
            let snapshot: Vec<_> = pairs.iter().copied().collect();
            for &(a, b) in &snapshot {
                for &(c, d) in &snapshot {
                    if transitive && b == c && !pairs.contains(&(a, d)) {
                        added.push((a, d));
                    }
                    if euclidean && a == c && !pairs.contains(&(b, d)) {
                        added.push((b, d));
                    }
                }
            }
            if symmetric {
                for &(from, to) in &added.clone() {
                    added.push((to, from));
                }
            }
            if added.is_empty() {
                break;
            }
            pairs.extend(added);
        }
    }
    if properties.contains(&FrameProperty::Serial) {
        for w in 0..n {
            if !(0..n).any(|v| pairs.contains(&(w, v))) {
                pairs.insert((w, w));
            }
        }
    }
}

/// Random formula of at most the given connective depth over the supplied
/// atoms and agents. Depth 0 yields a bare atom; modal operators are only
/// drawn when agents are available.
pub fn random_formula(
    rng: &mut impl Rng,
    atoms: &[String],
    agents: &[Agent],
    depth: usize,
) -> Formula {
    assert!(!atoms.is_empty(), "formula sampling needs at least one atom");
    if depth == 0 {
        return Formula::Atom(atoms[rng.gen_range(0..atoms.len())].clone());
    }
    let choices = if agents.is_empty() { 6 } else { 8 };
    match rng.gen_range(0..choices) {
        0 => Formula::Atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        1 => Formula::Not(Box::new(random_formula(rng, atoms, agents, depth - 1))),
        2 => Formula::And(
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
        3 => Formula::Or(
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
        4 => Formula::Implies(
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
        5 => Formula::Equiv(
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
        6 => Formula::Box(
            agents[rng.gen_range(0..agents.len())].clone(),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
        _ => Formula::Diamond(
            agents[rng.gen_range(0..agents.len())].clone(),
            Box::new(random_formula(rng, atoms, agents, depth - 1)),
        ),
    }
}
