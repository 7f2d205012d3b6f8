//! Probability-structure semantics for agent certainty.
//!
//! A probability structure equips a finite world set and valuation with
//! one probability distribution per agent. Certainty is probability 1:
//! `□_x φ` holds when the agent's distribution puts (within tolerance)
//! all its mass on the worlds satisfying φ. Two formulations are
//! implemented side by side — measure-theoretic ("the φ-worlds carry mass
//! ≥ 1−ε") and support-theoretic ("φ holds at every positive-weight
//! world") — together with false-belief sets, the Kripke model induced by
//! distribution supports, and samplers plus soundness probes for the
//! modal systems these structures validate.

pub mod induced;
pub mod probe;
pub mod sampling;
pub mod semantics;
pub mod structure;

pub use induced::induced_kripke;
pub use probe::{soundness_probe, t_axiom_falsifier, LogicSystem, SoundnessFailure, SoundnessReport};
pub use sampling::{random_generalized_structure, random_structure, structure_from_integer_weights};
pub use semantics::{
    certain, certain_prime, false_beliefs, holds, holds_generalized, FalseBeliefSet,
};
pub use structure::{
    load_structure, GeneralizedProbabilityStructure, LoadedStructure, ProbabilityStructure,
};

/// Default numeric tolerance; "probability 1" means ≥ 1 − tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Errors from structure construction, file loading, and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum HalpernError {
    #[error("agent '{agent}': {reason}")]
    InvalidDistribution { agent: String, reason: String },

    #[error("structure file has no weights field")]
    MissingWeights,

    #[error("malformed weights: {0}")]
    MalformedWeights(String),

    #[error(
        "structure file declares explicit relation pairs; accessibility is induced from \
         distribution supports and must not be supplied by hand"
    )]
    ConflictingRelations,

    #[error(transparent)]
    Logic(#[from] frlab_logic::LogicError),
}

pub type Result<T> = std::result::Result<T, HalpernError>;
