//! Born expectations, Lüders updates, and Heisenberg-picture evolution.

use crate::label::require_same_register;
use crate::operator::DenseOperator;
use crate::state::StateVector;
use crate::{QuantumError, Result};
use num_complex::Complex64;

/// Born expectation `⟨v|op|v⟩` of a Hermitian operator in a pure state.
///
/// The imaginary residue must vanish within `tolerance` (it is float noise
/// for Hermitian operators). When `op` is a projector the value is clamped
/// into `[0, 1]`, absorbing residue no larger than `tolerance`.
pub fn born(state: &StateVector, op: &DenseOperator, tolerance: f64) -> Result<f64> {
    require_same_register(state.register(), op.register())?;
    if !op.is_hermitian(tolerance) {
        return Err(QuantumError::NotHermitian);
    }
    let value = raw_expectation(state, op)?;
    if value.im.abs() > tolerance {
        return Err(QuantumError::NonRealExpectation {
            imaginary: value.im,
        });
    }
    let mut real = value.re;
    if op.is_projector(tolerance) && real >= -tolerance && real <= 1.0 + tolerance {
        real = real.clamp(0.0, 1.0);
    }
    Ok(real)
}

/// Born probability `tr(ρ·op)` of a Hermitian operator in a mixed state.
pub fn born_density(density: &DenseOperator, op: &DenseOperator, tolerance: f64) -> Result<f64> {
    require_same_register(density.register(), op.register())?;
    if !op.is_hermitian(tolerance) {
        return Err(QuantumError::NotHermitian);
    }
    let value = trace(&density.mul(op)?);
    if value.im.abs() > tolerance {
        return Err(QuantumError::NonRealExpectation {
            imaginary: value.im,
        });
    }
    let mut real = value.re;
    if op.is_projector(tolerance) && real >= -tolerance && real <= 1.0 + tolerance {
        real = real.clamp(0.0, 1.0);
    }
    Ok(real)
}

/// Expectation `⟨v|O₁O₂⋯Oₙ|v⟩` of an ordered operator product.
///
/// The factors are applied to `state` right-to-left, exactly as the written
/// product acts on a ket. The product of projectors at different times is
/// generally not Hermitian, so no Hermiticity check is made on the product;
/// instead the final scalar's imaginary residue must vanish within
/// `tolerance`.
pub fn sequential_expectation(
    state: &StateVector,
    ops: &[&DenseOperator],
    tolerance: f64,
) -> Result<f64> {
    // Intermediate vectors are generally unnormalized, so the walk happens
    // on raw amplitude vectors rather than on StateVector values.
    let mut current = state.amplitudes().to_vec();
    for op in ops.iter().rev() {
        require_same_register(state.register(), op.register())?;
        current = op.apply_to_raw(&current);
    }
    let value = state
        .amplitudes()
        .iter()
        .zip(&current)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>();
    if value.im.abs() > tolerance {
        return Err(QuantumError::NonRealExpectation {
            imaginary: value.im,
        });
    }
    Ok(value.re)
}

/// Lüders update of a pure state: project, renormalize, and report the
/// outcome probability. Zero-probability outcomes (≤ `tolerance`) error.
pub fn lueders_state(
    state: &StateVector,
    proj: &DenseOperator,
    tolerance: f64,
) -> Result<(StateVector, f64)> {
    require_same_register(state.register(), proj.register())?;
    if !proj.is_projector(tolerance) {
        return Err(QuantumError::NotProjector);
    }
    let probability = born(state, proj, tolerance)?;
    if probability <= tolerance {
        return Err(QuantumError::ZeroProbabilityUpdate { probability });
    }
    let raw = proj.apply_raw(state)?;
    let posterior = StateVector::renormalized(state.register().to_vec(), raw);
    Ok((posterior, probability))
}

/// Lüders update of a density operator: `ρ ↦ π ρ π / tr(ρπ)`, reporting the
/// outcome probability. Zero-probability outcomes (≤ `tolerance`) error.
pub fn lueders_density(
    density: &DenseOperator,
    proj: &DenseOperator,
    tolerance: f64,
) -> Result<(DenseOperator, f64)> {
    require_same_register(density.register(), proj.register())?;
    if !proj.is_projector(tolerance) {
        return Err(QuantumError::NotProjector);
    }
    let probability = born_density(density, proj, tolerance)?;
    if probability <= tolerance {
        return Err(QuantumError::ZeroProbabilityUpdate { probability });
    }
    let updated = proj
        .mul(density)?
        .mul(proj)?
        .scale(Complex64::new(1.0 / probability, 0.0));
    Ok((updated, probability))
}

fn raw_expectation(state: &StateVector, op: &DenseOperator) -> Result<Complex64> {
    let applied = op.apply_raw(state)?;
    Ok(state
        .amplitudes()
        .iter()
        .zip(&applied)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Matrix trace.
pub fn trace(op: &DenseOperator) -> Complex64 {
    let dim = op.dim();
    (0..dim).map(|i| op.entry(i, i)).sum()
}

/// Density operator of a convex mixture of pure states: `Σ p·|v⟩⟨v|`.
/// Weights must be nonnegative and sum to 1 within `tolerance`.
pub fn density_from_mixture(
    mixture: &[(f64, &StateVector)],
    tolerance: f64,
) -> Result<DenseOperator> {
    let Some((_, first)) = mixture.first() else {
        return Err(QuantumError::InvalidObservable(
            "a mixture needs at least one component".into(),
        ));
    };
    let register = first.register().to_vec();
    let mut total = 0.0;
    let mut rho = DenseOperator::identity(register.clone()).scale(0.0.into());
    for (weight, state) in mixture {
        require_same_register(&register, state.register())?;
        if *weight < -tolerance {
            return Err(QuantumError::InvalidObservable(format!(
                "mixture weight {weight} is negative"
            )));
        }
        total += weight;
        rho = rho.add(&DenseOperator::projector_onto(state).scale((*weight).into()))?;
    }
    if (total - 1.0).abs() > tolerance {
        return Err(QuantumError::NotNormalized { norm_sq: total });
    }
    Ok(rho)
}

/// Heisenberg-picture evolution of an operator: `π ↦ U†πU`, so that
/// expectations of the result against the initial state equal expectations
/// of `π` against the evolved state. `u` must be unitary.
pub fn heisenberg(proj: &DenseOperator, u: &DenseOperator, tolerance: f64) -> Result<DenseOperator> {
    require_same_register(proj.register(), u.register())?;
    if !u.is_unitary(tolerance) {
        return Err(QuantumError::NotUnitary);
    }
    u.adjoint().mul(proj)?.mul(u)
}
