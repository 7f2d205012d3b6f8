//! Projective observables: outcome-labeled complete families of projectors.

use crate::label::{register_string, require_same_register};
use crate::operator::DenseOperator;
use crate::state::StateVector;
use crate::{QuantumError, Result};

/// A projective measurement, given as outcome labels paired with projectors.
///
/// Construction validates that every operator is a projector, that distinct
/// outcomes are orthogonal, and that the family resolves the identity — the
/// three facts the Born rule needs to yield a probability distribution.
#[derive(Debug, Clone)]
pub struct Observable {
    outcomes: Vec<(String, DenseOperator)>,
}

impl Observable {
    /// Validates and wraps an outcome→projector family.
    pub fn new(outcomes: Vec<(String, DenseOperator)>, tolerance: f64) -> Result<Self> {
        let Some((_, first)) = outcomes.first() else {
            return Err(QuantumError::InvalidObservable(
                "an observable needs at least one outcome".into(),
            ));
        };
        let register = first.register().to_vec();
        for (name, op) in &outcomes {
            require_same_register(&register, op.register())?;
            if !op.is_projector(tolerance) {
                return Err(QuantumError::InvalidObservable(format!(
                    "outcome `{name}` is not a projector"
                )));
            }
        }
        for (i, (name_i, op_i)) in outcomes.iter().enumerate() {
            for (name_j, op_j) in outcomes.iter().skip(i + 1) {
                let product = op_i.mul(op_j)?;
                let zero = DenseOperator::identity(register.clone()).scale(0.0.into());
                if !product.approx_eq(&zero, tolerance) {
                    return Err(QuantumError::InvalidObservable(format!(
                        "outcomes `{name_i}` and `{name_j}` are not orthogonal"
                    )));
                }
            }
        }
        let mut sum = DenseOperator::identity(register.clone()).scale(0.0.into());
        for (_, op) in &outcomes {
            sum = sum.add(op)?;
        }
        if !sum.approx_eq(&DenseOperator::identity(register.clone()), tolerance) {
            return Err(QuantumError::InvalidObservable(format!(
                "projectors on `{}` do not sum to the identity",
                register_string(&register)
            )));
        }
        Ok(Observable { outcomes })
    }

    /// Outcome labels in declaration order.
    pub fn outcome_names(&self) -> impl Iterator<Item = &str> {
        self.outcomes.iter().map(|(n, _)| n.as_str())
    }

    /// The projector attached to `name`, if declared.
    pub fn projector(&self, name: &str) -> Option<&DenseOperator> {
        self.outcomes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, op)| op)
    }

    /// All outcome/projector pairs in declaration order.
    pub fn outcomes(&self) -> &[(String, DenseOperator)] {
        &self.outcomes
    }

    /// Born-rule distribution of this observable in `state`; probabilities
    /// are clamped into `[0,1]` and sum to 1 up to `tolerance` by
    /// completeness.
    pub fn distribution(
        &self,
        state: &StateVector,
        tolerance: f64,
    ) -> Result<Vec<(String, f64)>> {
        self.outcomes
            .iter()
            .map(|(name, op)| {
                crate::expectation::born(state, op, tolerance).map(|p| (name.clone(), p))
            })
            .collect()
    }
}
