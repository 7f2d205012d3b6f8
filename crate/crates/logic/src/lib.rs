//! Multi-agent modal logic kernel.
//!
//! The crate provides the language and semantics used by the scenario
//! encoder: a formula AST with parser and printer, finite Kripke frames and
//! models with a canonical JSON file format, satisfaction evaluation,
//! frame-property checking with violation witnesses, axiom-schema validity
//! probing, seeded random sampling of models and formulas, and a bounded
//! model finder that reports either a re-verified satisfying model or an
//! exhaustion certificate.

pub mod axioms;
pub mod formula;
pub mod frames;
pub mod model;
pub mod parse;
pub mod sampling;
pub mod search;
pub mod semantics;

pub use axioms::{axiom_validity, necessitation_closure_holds, AxiomFailure, AxiomReport, AxiomSchema};
pub use formula::{Agent, Formula};
pub use frames::{check_frame_property, FrameProperty, PropertyViolation};
pub use model::{KripkeFrame, KripkeModel, ModelFile};
pub use parse::parse;
pub use sampling::{random_formula, random_model, random_model_with};
pub use search::{
    find_model, FixedUniverse, ModelSearchSpec, RejectionSignature, SatResult, SearchVerdict,
    UnsatCertificate, Universe, WitnessConstraint, WitnessScope,
};
pub use semantics::{satisfies, satisfies_at, valid_in_model};

use thiserror::Error;

/// Hard upper bound on synthesized-universe searches; beyond it the
/// relation space is intractable without problem structure.
pub const GENERIC_WORLD_LIMIT: usize = 6;

/// Hard upper bound on fixed-universe searches, set by the bitmask width
/// used for sub-universe enumeration.
pub const FIXED_WORLD_LIMIT: usize = 16;

/// Errors raised by the logic kernel.
#[derive(Debug, Error)]
pub enum LogicError {
    /// The formula text violates the grammar.
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    /// A formula mentions an atom the model's valuation does not declare.
    #[error("unknown atom '{0}': every atom must be declared in the valuation")]
    UnknownAtom(String),
    /// A formula or constraint mentions an agent the model does not declare.
    #[error("unknown agent '{0}'")]
    UnknownAgent(String),
    /// A constraint or file referenced a world that does not exist.
    #[error("unknown world '{0}'")]
    UnknownWorld(String),
    /// World names within one model must be distinct.
    #[error("duplicate world '{0}'")]
    DuplicateWorld(String),
    /// Agent ids within one model must be distinct.
    #[error("duplicate agent '{0}'")]
    DuplicateAgent(String),
    /// The model file is malformed.
    #[error("invalid model file: {0}")]
    InvalidModelFile(String),
    /// A synthesized-universe search exceeded the hard world bound.
    #[error("world bound {requested} exceeds the supported maximum {max}")]
    BoundExceeded { requested: usize, max: usize },
    /// The fixed-universe finder was handed a constraint outside the
    /// fragment it can decide soundly and completely.
    #[error("unsupported in fixed-universe search: {0}")]
    UnsupportedInFixedMode(String),
    /// Axiom probing needs at least one probe formula.
    #[error("probe formula list is empty")]
    EmptyProbes,
    /// A search result failed its independent re-verification. This
    /// indicates a kernel bug and is never expected in normal operation.
    #[error("self-audit failed: {0}")]
    SelfAuditFailed(String),
}

/// Convenient result alias for kernel operations.
pub type Result<T> = std::result::Result<T, LogicError>;
