//! The convex potential `Φ_ρ(A) = log Tr exp(log ρ + A)` on centered
//! observables and its Legendre structure.

use crate::error::Result;
use crate::manifold::{gibbs, kubo, relative_entropy, CenteredObservable, DensityMatrix, TangentVector};
use crate::spectra::HermitianMatrix;

/// `Φ_ρ(A)` together with its contact point `τ_A`.
#[derive(Clone, Debug)]
pub struct PotentialEvaluation {
    pub value: f64,
    pub contact: DensityMatrix,
    pub base: DensityMatrix,
}

/// `A − (Tr ρA)·𝟙`.
pub fn center(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<CenteredObservable> {
    CenteredObservable::center(rho, a)
}

pub fn potential(rho: &DensityMatrix, a: &CenteredObservable) -> Result<PotentialEvaluation> {
    let a = a.at(rho)?;
    let (value, contact) = gibbs(&(rho.log() + &a));
    Ok(PotentialEvaluation {
        value,
        contact,
        base: rho.clone(),
    })
}

/// `Φ_ρ(A) − Tr σA + D(σ‖ρ)`, nonnegative and zero exactly at `σ = τ_A`.
pub fn legendre_gap(rho: &DensityMatrix, a: &CenteredObservable, sigma: &DensityMatrix) -> Result<f64> {
    let phi = potential(rho, a)?;
    rho.check_dim(sigma.dim())?;
    Ok(phi.value - sigma.expectation(a.matrix()) + relative_entropy(sigma, rho)?)
}

/// Fréchet derivative of `Φ_ρ` at `A` in direction `B`: `Tr τ_A B`.
pub fn potential_derivative(rho: &DensityMatrix, a: &CenteredObservable, b: &HermitianMatrix) -> Result<f64> {
    let phi = potential(rho, a)?;
    rho.check_dim(b.dim())?;
    Ok(phi.contact.expectation(b))
}

/// Fréchet derivative of `A ↦ τ_A` in direction `B`: `[B − Tr τ_A B]_{τ_A}`.
pub fn tau_derivative(rho: &DensityMatrix, a: &CenteredObservable, b: &HermitianMatrix) -> Result<TangentVector> {
    let tau = potential(rho, a)?.contact;
    rho.check_dim(b.dim())?;
    let centered = b.shift(-tau.expectation(b));
    TangentVector::new(kubo(&tau, &centered)?)
}

/// The supporting plane at `A` evaluated at `B`: `Φ_ρ(A) + Tr τ_A (B − A)`.
pub fn tangent_plane_value(rho: &DensityMatrix, a: &CenteredObservable, b: &CenteredObservable) -> Result<f64> {
    let phi = potential(rho, a)?;
    let b = b.at(rho)?;
    Ok(phi.value + phi.contact.expectation(&(&b - a.matrix())))
}
