//! Seeded random probability structures for the equivalence and soundness
//! corpora.
//!
//! Weights are drawn as small integers and normalized by their exact sum,
//! so every positive weight is far above the evaluation tolerance. On such
//! structures "mass ≥ 1−ε on the φ-worlds" and "φ at every positive-weight
//! world" coincide exactly; splitting the two formulations would need a
//! positive weight below ε, which the samplers cannot produce by
//! construction.

use crate::structure::{GeneralizedProbabilityStructure, ProbabilityStructure};
use frlab_logic::Agent;
use rand::Rng;
use std::collections::BTreeMap;

const MAX_UNIT: u32 = 5;

/// Random single-distribution structure with `1..=max_worlds` worlds named
/// `n0..`, integer-derived weights, and an arbitrary valuation for each
/// atom. `full_support` forces every weight to be strictly positive.
pub fn random_structure(
    rng: &mut impl Rng,
    agents: &[Agent],
    max_worlds: usize,
    atoms: &[String],
    full_support: bool,
    tolerance: f64,
) -> ProbabilityStructure {
    let n = rng.gen_range(1..=max_worlds.max(1));
    let worlds: Vec<String> = (0..n).map(|w| format!("n{w}")).collect();
    let valuation = random_valuation(rng, &worlds, atoms);
    let mut weights = BTreeMap::new();
    for agent in agents {
        weights.insert(
            agent.clone(),
            named_weights(&worlds, &random_units(rng, n, full_support)),
        );
    }
    ProbabilityStructure::new(worlds, valuation, weights, tolerance)
        .expect("sampled weights form a distribution")
}

/// Random per-world-distribution structure, for induced-relation checks.
pub fn random_generalized_structure(
    rng: &mut impl Rng,
    agents: &[Agent],
    max_worlds: usize,
    atoms: &[String],
    tolerance: f64,
) -> GeneralizedProbabilityStructure {
    let n = rng.gen_range(1..=max_worlds.max(1));
    let worlds: Vec<String> = (0..n).map(|w| format!("n{w}")).collect();
    let valuation = random_valuation(rng, &worlds, atoms);
    let mut weights = BTreeMap::new();
    for agent in agents {
        let mut per_world = BTreeMap::new();
        for world in &worlds {
            per_world.insert(
                world.clone(),
                named_weights(&worlds, &random_units(rng, n, false)),
            );
        }
        weights.insert(agent.clone(), per_world);
    }
    GeneralizedProbabilityStructure::new(worlds, valuation, weights, tolerance)
        .expect("sampled weights form distributions")
}

/// Deterministic structure from explicit integer weights (normalized by
/// their sum); used to pin down corner cases in tests and example files.
pub fn structure_from_integer_weights(
    worlds: Vec<String>,
    valuation: BTreeMap<String, Vec<String>>,
    units: BTreeMap<Agent, Vec<u32>>,
    tolerance: f64,
) -> ProbabilityStructure {
    let weights = units
        .into_iter()
        .map(|(agent, row)| {
            assert_eq!(row.len(), worlds.len(), "one unit weight per world");
            (agent, named_weights(&worlds, &row))
        })
        .collect();
    ProbabilityStructure::new(worlds, valuation, weights, tolerance)
        .expect("integer weights form a distribution")
}

fn random_units(rng: &mut impl Rng, n: usize, full_support: bool) -> Vec<u32> {
    let low = u32::from(full_support);
    loop {
        let units: Vec<u32> = (0..n).map(|_| rng.gen_range(low..=MAX_UNIT)).collect();
        if units.iter().any(|&u| u > 0) {
            return units;
        }
    }
}

fn named_weights(worlds: &[String], units: &[u32]) -> BTreeMap<String, f64> {
    let total: u32 = units.iter().sum();
    worlds
        .iter()
        .zip(units)
        .map(|(world, &u)| (world.clone(), f64::from(u) / f64::from(total)))
        .collect()
}

fn random_valuation(
    rng: &mut impl Rng,
    worlds: &[String],
    atoms: &[String],
) -> BTreeMap<String, Vec<String>> {
    atoms
        .iter()
        .map(|atom| {
            (
                atom.clone(),
                worlds
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .cloned()
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_support_sampling_never_emits_zero_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let structure = random_structure(
                &mut rng,
                &[Agent::new("x"), Agent::new("y")],
                6,
                &["p".into()],
                true,
                crate::DEFAULT_TOLERANCE,
            );
            assert!(structure.has_full_support());
        }
    }

    #[test]
    fn sampled_weights_always_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let structure = random_structure(
                &mut rng,
                &[Agent::new("x")],
                6,
                &[],
                false,
                crate::DEFAULT_TOLERANCE,
            );
            let total: f64 = structure.distribution(&Agent::new("x")).unwrap().iter().sum();
            assert!((total - 1.0).abs() <= crate::DEFAULT_TOLERANCE);
        }
    }
}
