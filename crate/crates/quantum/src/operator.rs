//! Dense linear operators on labeled qubit registers.

use crate::label::{register_string, require_disjoint, SystemLabel};
use crate::state::StateVector;
use crate::{QuantumError, Result};
use num_complex::Complex64;

/// A dense square matrix acting on an ordered register of two-level systems.
///
/// Row/column indexing follows the same convention as [`StateVector`]: the
/// first register label owns the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    register: Vec<SystemLabel>,
    /// Row-major, `dim × dim` with `dim = 2^register.len()`.
    entries: Vec<Complex64>,
}

impl DenseOperator {
    /// Builds an operator from row-major entries.
    pub fn from_entries(register: Vec<SystemLabel>, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 1usize << register.len();
        if entries.len() != dim * dim {
            return Err(QuantumError::DimensionMismatch {
                register: register_string(&register),
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(DenseOperator { register, entries })
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real_rows(register: Vec<SystemLabel>, rows: &[&[f64]]) -> Result<Self> {
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        DenseOperator::from_entries(register, entries)
    }

    /// The identity on `register`.
    pub fn identity(register: Vec<SystemLabel>) -> Self {
        let dim = 1usize << register.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        DenseOperator { register, entries }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` onto a pure state.
    pub fn projector_onto(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                entries[i * dim + j] = a * b.conj();
            }
        }
        DenseOperator {
            register: state.register().to_vec(),
            entries,
        }
    }

    /// The ordered register this operator acts on.
    pub fn register(&self) -> &[SystemLabel] {
        &self.register
    }

    /// Matrix dimension (`2^n` for `n` systems).
    pub fn dim(&self) -> usize {
        1usize << self.register.len()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry at `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseOperator {
        let dim = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[j * dim + i] = self.entries[i * dim + j].conj();
            }
        }
        DenseOperator {
            register: self.register.clone(),
            entries,
        }
    }

    /// Matrix product `self · other`; registers must agree exactly.
    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        crate::label::require_same_register(&self.register, &other.register)?;
        let dim = self.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let lhs = self.entries[i * dim + k];
                if lhs.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    entries[i * dim + j] += lhs * other.entries[k * dim + j];
                }
            }
        }
        Ok(DenseOperator {
            register: self.register.clone(),
            entries,
        })
    }

    /// Entrywise sum; registers must agree exactly.
    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        crate::label::require_same_register(&self.register, &other.register)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(DenseOperator {
            register: self.register.clone(),
            entries,
        })
    }

    /// Entrywise difference; registers must agree exactly.
    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        crate::label::require_same_register(&self.register, &other.register)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(DenseOperator {
            register: self.register.clone(),
            entries,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> DenseOperator {
        DenseOperator {
            register: self.register.clone(),
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// Kronecker product; registers must be disjoint and are concatenated,
    /// with `self` contributing the most significant bits.
    pub fn kron(&self, other: &DenseOperator) -> Result<DenseOperator> {
        require_disjoint(&self.register, &other.register)?;
        let mut register = self.register.clone();
        register.extend_from_slice(&other.register);
        let da = self.dim();
        let db = other.dim();
        let dim = da * db;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for ia in 0..da {
            for ja in 0..da {
                let a = self.entries[ia * da + ja];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        let b = other.entries[ib * db + jb];
                        entries[(ia * db + ib) * dim + (ja * db + jb)] = a * b;
                    }
                }
            }
        }
        Ok(DenseOperator { register, entries })
    }

    /// Matrix–vector product on raw amplitudes; no register or norm checks.
    pub(crate) fn apply_to_raw(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &self.entries[i * dim..(i + 1) * dim];
            *slot = row.iter().zip(amps).map(|(entry, amp)| entry * amp).sum();
        }
        out
    }

    /// Applies the operator to a state on the same register. The result is
    /// returned unnormalized as raw amplitudes.
    pub(crate) fn apply_raw(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        crate::label::require_same_register(&self.register, state.register())?;
        Ok(self.apply_to_raw(state.amplitudes()))
    }

    /// Applies a unitary to a state, returning the evolved state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let raw = self.apply_raw(state)?;
        StateVector::from_amplitudes(self.register.clone(), raw)
    }

    /// Maximum entrywise distance from another operator on the same register.
    pub fn max_entry_distance(&self, other: &DenseOperator) -> Result<f64> {
        crate::label::require_same_register(&self.register, &other.register)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True when `‖self − other‖_max ≤ tolerance` on a shared register.
    pub fn approx_eq(&self, other: &DenseOperator, tolerance: f64) -> bool {
        match self.max_entry_distance(other) {
            Ok(d) => d <= tolerance,
            Err(_) => false,
        }
    }

    /// Checks `A = A†` entrywise within `tolerance`.
    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let a = self.entries[i * dim + j];
                let b = self.entries[j * dim + i].conj();
                if (a - b).norm() > tolerance {
                    return false;
                }
            }
        }
        true
    }

    /// Checks `U†U = 𝕀` entrywise within `tolerance`.
    pub fn is_unitary(&self, tolerance: f64) -> bool {
        let product = self
            .adjoint()
            .mul(self)
            .expect("adjoint preserves the register");
        product.approx_eq(&DenseOperator::identity(self.register.clone()), tolerance)
    }

    /// Checks `P² = P` and `P = P†` entrywise within `tolerance`.
    pub fn is_projector(&self, tolerance: f64) -> bool {
        if !self.is_hermitian(tolerance) {
            return false;
        }
        let squared = self.mul(self).expect("same register");
        squared.approx_eq(self, tolerance)
    }

    /// Embeds this operator into a larger register: systems named in
    /// `target` but absent here are extended by the identity, and the
    /// tensor factors are permuted to match `target`’s order. Every label of
    /// `self` must occur in `target`.
    pub fn embed(&self, target: &[SystemLabel]) -> Result<DenseOperator> {
        // Position of each of our labels inside the target register.
        let mut positions = Vec::with_capacity(self.register.len());
        for label in &self.register {
            match target.iter().position(|t| t == label) {
                Some(p) => positions.push(p),
                None => return Err(QuantumError::LabelMissing(*label)),
            }
        }
        let n_target = target.len();
        let n_local = self.register.len();
        let dim_target = 1usize << n_target;
        let dim_local = 1usize << n_local;

        // Bit `k` (MSB-first) of a target index corresponds to target
        // position `k`; extract our systems' bits to form local indices.
        let local_index = |full: usize| -> usize {
            let mut idx = 0usize;
            for &p in &positions {
                let bit = (full >> (n_target - 1 - p)) & 1;
                idx = (idx << 1) | bit;
            }
            idx
        };
        let rest_index = |full: usize| -> usize {
            let mut idx = 0usize;
            for p in 0..n_target {
                if !positions.contains(&p) {
                    let bit = (full >> (n_target - 1 - p)) & 1;
                    idx = (idx << 1) | bit;
                }
            }
            idx
        };

        let mut entries = vec![Complex64::new(0.0, 0.0); dim_target * dim_target];
        for row in 0..dim_target {
            let lr = local_index(row);
            let rr = rest_index(row);
            for col in 0..dim_target {
                if rest_index(col) != rr {
                    continue; // identity on the untouched systems
                }
                let lc = local_index(col);
                entries[row * dim_target + col] = self.entries[lr * dim_local + lc];
            }
        }
        Ok(DenseOperator {
            register: target.to_vec(),
            entries,
        })
    }
}

/// Single-qubit constants used when assembling protocol operators.
impl DenseOperator {
    /// `|0⟩⟨0|` on one labeled system.
    pub fn proj0(label: SystemLabel) -> Self {
        DenseOperator::from_real_rows(vec![label], &[&[1.0, 0.0], &[0.0, 0.0]]).unwrap()
    }

    /// `|1⟩⟨1|` on one labeled system.
    pub fn proj1(label: SystemLabel) -> Self {
        DenseOperator::from_real_rows(vec![label], &[&[0.0, 0.0], &[0.0, 1.0]]).unwrap()
    }

    /// Pauli X on one labeled system.
    pub fn pauli_x(label: SystemLabel) -> Self {
        DenseOperator::from_real_rows(vec![label], &[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    /// Pauli Z on one labeled system.
    pub fn pauli_z(label: SystemLabel) -> Self {
        DenseOperator::from_real_rows(vec![label], &[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    /// Hadamard on one labeled system.
    pub fn hadamard(label: SystemLabel) -> Self {
        let h = (0.5f64).sqrt();
        DenseOperator::from_real_rows(vec![label], &[&[h, h], &[h, -h]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::parse_register;

    #[test]
    fn embed_reorders_tensor_factors() {
        // X on l, embedded into register gl, must flip the low-order... no:
        // in gl the l system owns the least significant bit.
        let x = DenseOperator::pauli_x(SystemLabel('l'));
        let gl = parse_register("gl").unwrap();
        let embedded = x.embed(&gl).unwrap();
        // X_l ⊗ 𝕀 reordered into g-major layout is 𝕀 ⊗ X.
        let expected = DenseOperator::identity(vec![SystemLabel('g')])
            .kron(&DenseOperator::pauli_x(SystemLabel('l')))
            .unwrap();
        assert!(embedded.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn embed_rejects_missing_label() {
        let x = DenseOperator::pauli_x(SystemLabel('l'));
        let err = x.embed(&parse_register("ag").unwrap());
        assert!(matches!(err, Err(QuantumError::LabelMissing(_))));
    }

    #[test]
    fn hadamard_is_unitary_and_hermitian_but_not_a_projector() {
        let h = DenseOperator::hadamard(SystemLabel('l'));
        assert!(h.is_unitary(1e-12));
        assert!(h.is_hermitian(1e-12));
        assert!(!h.is_projector(1e-12));
    }

    #[test]
    fn projector_onto_plus_state_squares_to_itself() {
        let s = (0.5f64).sqrt();
        let plus = StateVector::qubit(
            SystemLabel('l'),
            Complex64::new(s, 0.0),
            Complex64::new(s, 0.0),
        )
        .unwrap();
        let p = DenseOperator::projector_onto(&plus);
        assert!(p.is_projector(1e-12));
        assert!(!p.is_unitary(1e-12));
    }

    #[test]
    fn kron_follows_msb_first_convention() {
        // proj1 ⊗ X on register lg: block structure places X in the lower
        // right 2×2 block (rows/cols 2..4).
        let p1 = DenseOperator::proj1(SystemLabel('l'));
        let x = DenseOperator::pauli_x(SystemLabel('g'));
        let op = p1.kron(&x).unwrap();
        assert_eq!(op.entry(2, 3), Complex64::new(1.0, 0.0));
        assert_eq!(op.entry(3, 2), Complex64::new(1.0, 0.0));
        assert_eq!(op.entry(0, 1), Complex64::new(0.0, 0.0));
    }
}
