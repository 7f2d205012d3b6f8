//! The extended Wigner's-friend protocol, encoded as a multi-agent modal
//! constraint system over sixteen outcome worlds.
//!
//! Four agents measure in sequence: `a` reads the coin `r` at t1 and
//! prepares the qubit `l`; `g` reads `l` at t2; `c` measures the pair
//! (r,a) in the ok/fail basis at t3; `d` measures (l,g) at t4. A world is
//! one assignment of the four outcomes, and every atom of the protocol
//! language — outcome records, state assignments, indicator facts — is a
//! pure function of that assignment ([`worlds`]).
//!
//! Each agent's accessibility relation is constrained by *bridge rules*
//! ([`rules`]): quantum expectation values computed from the protocol
//! unitaries. An expectation of exactly 1 forbids accessible worlds that
//! violate the certain claim; an expectation strictly between 0 and 1
//! demands an accessible world where the claim fails. The headline runs
//! ([`runs`]) hand those constraints to the bounded model finder and
//! reconstruct the contradiction derivations step by step, each step
//! re-verified against the frozen sixteen-world model ([`report`]).

pub mod atoms;
pub mod report;
pub mod rules;
pub mod runs;
pub mod worlds;

pub use report::{ExpectationCheck, ScenarioReport, TraceStep, Verdict};
pub use rules::{
    bridge_rules, compile, Ablation, BridgeRule, CompiledConstraints, ExpectationRecipe, RuleKind,
};
pub use runs::{
    ablate, run_consistency_lemma, run_nesting_lemma, run_theorem_fr, run_theorem_fr_star,
    two_world_countermodel,
    FrameChoice,
};
pub use worlds::{
    agents, build_worlds, double_ok, extension, fixed_universe, indexed_valuation,
    permitted_unitaries, protocol_clauses, LabOutcome, OutcomeWorld, ALL_WORLDS, W_HAT,
};

/// Default numeric tolerance, shared with the quantum engine.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Errors from scenario construction and the headline runs.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Quantum(#[from] frlab_quantum::QuantumError),

    #[error(transparent)]
    Logic(#[from] frlab_logic::LogicError),

    /// A structural invariant of the encoding failed — e.g. a recorded
    /// expectation no longer matches its recomputation, or a rule
    /// classified as certainty came out non-extremal.
    #[error("scenario invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;
