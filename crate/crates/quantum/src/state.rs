//! Normalized state vectors over labeled qubit registers.

use crate::label::{register_string, require_disjoint, require_same_register, SystemLabel};
use crate::{QuantumError, Result, DEFAULT_TOLERANCE};
use num_complex::Complex64;
use std::fmt;

/// A pure state on an ordered register of two-level systems.
///
/// Amplitudes are stored in the computational basis with the first register
/// label owning the most significant bit, matching the usual Kronecker
/// convention: for register `lg`, index `0b10` is `|1⟩_l|0⟩_g`.
///
/// States are rays: [`StateVector::approx_eq_up_to_phase`] is the equality
/// notion used throughout, since a global unit factor is physically
/// meaningless.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: Vec<SystemLabel>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, enforcing the unit-norm invariant.
    pub fn from_amplitudes(
        register: Vec<SystemLabel>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let dim = 1usize << register.len();
        if amplitudes.len() != dim {
            return Err(QuantumError::DimensionMismatch {
                register: register_string(&register),
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let state = StateVector {
            register,
            amplitudes,
        };
        let norm_sq = state.norm_sq();
        if (norm_sq - 1.0).abs() > DEFAULT_TOLERANCE {
            return Err(QuantumError::NotNormalized { norm_sq });
        }
        Ok(state)
    }

    /// Builds the computational basis state `|bits⟩` on `register`; `bits`
    /// lists one bit per label, in register order.
    pub fn basis(register: Vec<SystemLabel>, bits: &[u8]) -> Result<Self> {
        let dim = 1usize << register.len();
        if bits.len() != register.len() {
            return Err(QuantumError::DimensionMismatch {
                register: register_string(&register),
                expected: register.len(),
                found: bits.len(),
            });
        }
        let mut index = 0usize;
        for &b in bits {
            index = (index << 1) | usize::from(b & 1);
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            register,
            amplitudes,
        })
    }

    /// Builds a single-system state from two amplitudes.
    pub fn qubit(label: SystemLabel, amp0: Complex64, amp1: Complex64) -> Result<Self> {
        StateVector::from_amplitudes(vec![label], vec![amp0, amp1])
    }

    /// The ordered register this state lives on.
    pub fn register(&self) -> &[SystemLabel] {
        &self.register
    }

    /// Amplitudes in computational-basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Number of two-level systems in the register.
    pub fn system_count(&self) -> usize {
        self.register.len()
    }

    /// Squared Euclidean norm.
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`; both states must share a register.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        require_same_register(&self.register, &other.register)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product; registers must be disjoint and are concatenated.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        require_disjoint(&self.register, &other.register)?;
        let mut register = self.register.clone();
        register.extend_from_slice(&other.register);
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector {
            register,
            amplitudes,
        })
    }

    /// Ray equality: true when `other == e^{iφ}·self` for some real φ,
    /// entrywise within `tolerance`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tolerance: f64) -> bool {
        if self.register != other.register {
            return false;
        }
        // Anchor the phase on this state's largest amplitude.
        let (anchor, anchor_amp) = self
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
            .expect("state vectors are never empty");
        if anchor_amp.norm() < tolerance {
            return false;
        }
        let phase = other.amplitudes[anchor] / anchor_amp;
        if (phase.norm() - 1.0).abs() > tolerance {
            return false;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a * phase - b).norm() <= tolerance)
    }

    /// Scales and renormalizes; used internally by the Lüders update.
    pub(crate) fn renormalized(register: Vec<SystemLabel>, raw: Vec<Complex64>) -> Self {
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amplitudes = raw.into_iter().map(|a| a / norm).collect();
        StateVector {
            register,
            amplitudes,
        }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|ψ⟩_{}: [", register_string(&self.register))?;
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}
