//! Dense complex linear algebra over small tensor products of labeled
//! two-level systems.
//!
//! The crate models exactly what the Frauchiger–Renner protocol needs:
//! state vectors and operators carry an ordered register of [`SystemLabel`]s
//! (canonically `r`, `a`, `l`, `g`), and the operations are the textbook
//! ones — Kronecker products, projectors, Born expectations, Lüders updates
//! and Heisenberg evolution `U† π U`. Everything is immutable and pure;
//! dimensions never exceed 16×16.
//!
//! Modules:
//! - [`label`]: register labels and parsing helpers.
//! - [`state`]: normalized state vectors, inner products, phase-insensitive
//!   comparison.
//! - [`operator`]: dense operators, embedding into larger registers,
//!   unitarity/projector/hermiticity predicates.
//! - [`observable`]: outcome-labeled projector families.
//! - [`expectation`]: Born rule, sequential operator products, Lüders rule,
//!   Heisenberg evolution.
//! - [`protocol`]: the protocol's concrete states, unitaries and the six
//!   checkable expectation values.

pub mod expectation;
pub mod label;
pub mod observable;
pub mod operator;
pub mod protocol;
pub mod state;

pub use expectation::{
    born, born_density, density_from_mixture, heisenberg, lueders_density, lueders_state,
    sequential_expectation, trace,
};
pub use label::{parse_register, SystemLabel};
pub use observable::Observable;
pub use operator::DenseOperator;
pub use protocol::{
    canonical_register, evolved_projectors, fail_state, initial_state, ok_state, plus_state,
    protocol_expectations, protocol_unitaries, state_at_t2, state_at_tprime, EvolvedProjectors,
    ProtocolExpectations, ProtocolUnitaries,
};
pub use state::StateVector;

use thiserror::Error;

/// Comparison tolerance shared by every numeric predicate in the workbench.
///
/// All protocol quantities are small rationals reached through √2/√3
/// intermediates; double precision keeps the error many orders of magnitude
/// below this bound at dimension 16.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Errors raised by register-algebra operations.
#[derive(Debug, Error)]
pub enum QuantumError {
    /// Two operands share a register label, so their tensor product is
    /// ill-formed.
    #[error("register label '{0}' appears in both operands")]
    LabelClash(SystemLabel),
    /// An embed target is missing one of the operator's labels.
    #[error("register label '{0}' is not part of the target register")]
    LabelMissing(SystemLabel),
    /// Two objects that must live on the same register do not.
    #[error("register mismatch: expected '{expected}', found '{found}'")]
    RegisterMismatch { expected: String, found: String },
    /// Raw amplitude or entry data has the wrong length for its register.
    #[error("dimension mismatch: register '{register}' needs {expected} entries, got {found}")]
    DimensionMismatch {
        register: String,
        expected: usize,
        found: usize,
    },
    /// A state vector failed the unit-norm invariant.
    #[error("state is not normalized: squared norm {norm_sq} deviates from 1 beyond tolerance")]
    NotNormalized { norm_sq: f64 },
    /// An operation required a Hermitian operator.
    #[error("operator is not Hermitian within tolerance")]
    NotHermitian,
    /// An operation required a unitary operator.
    #[error("operator is not unitary within tolerance")]
    NotUnitary,
    /// An operation required a projector.
    #[error("operator is not a projector within tolerance")]
    NotProjector,
    /// A Lüders update was requested for an outcome of (near-)zero
    /// probability, which leaves the posterior state undefined.
    #[error("undefined update: outcome probability {probability} is below tolerance")]
    ZeroProbabilityUpdate { probability: f64 },
    /// An expectation value that should be real carried a non-negligible
    /// imaginary part.
    #[error("expectation has non-real residue {imaginary} beyond tolerance")]
    NonRealExpectation { imaginary: f64 },
    /// An observable's projector family failed completeness or orthogonality.
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    /// A parsed register string contained a repeated or empty label set.
    #[error("invalid register '{0}': labels must be distinct and non-empty")]
    InvalidRegister(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, QuantumError>;
