//! Bogoliubov inner product and the two flat parallel transports.
//!
//! The mixture transport is the identity on traceless matrices. Its dual with
//! respect to the Bogoliubov product, the exponential transport, moves the
//! chart representative `A` of a tangent vector from `A − Tr ρ1 A` to
//! `A − Tr ρ2 A`.

use std::fmt;
use std::str::FromStr;

use crate::error::{QigError, Result};
use crate::manifold::{chart, kubo, kubo_inverse, tangent, DensityMatrix, TangentVector, TRACE_TOL};
use crate::spectra::HermitianMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransportKind {
    /// Identity transport of the m-connection.
    Mixture,
    /// Dual transport of the e-connection.
    Exponential,
}

impl FromStr for TransportKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "m" | "mixture" => Ok(TransportKind::Mixture),
            "e" | "exponential" => Ok(TransportKind::Exponential),
            other => Err(format!("unknown transport kind `{other}` (expected m or e)")),
        }
    }
}

impl fmt::Display for TransportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportKind::Mixture => f.write_str("m"),
            TransportKind::Exponential => f.write_str("e"),
        }
    }
}

/// `∫₀¹ Tr ρ^u X ρ^{1−u} Y du = Tr([X]_ρ Y)`.
pub fn bogoliubov(rho: &DensityMatrix, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    rho.check_dim(y.dim())?;
    Ok(kubo(rho, x)?.trace_product(y))
}

/// `(Y_ρ(σ), Y_ρ(τ))_ρ = Tr Y_ρ(σ) c_ρ(τ)`.
pub fn inner_tangent(rho: &DensityMatrix, sigma: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    let y = tangent(rho, sigma)?;
    let c = chart(rho, tau)?;
    Ok(y.matrix().trace_product(c.matrix()))
}

/// Inner product of two tangent vectors at ρ, `Tr(V · [W]_ρ⁻¹)`.
pub fn pairing(rho: &DensityMatrix, v: &TangentVector, w: &TangentVector) -> Result<f64> {
    rho.check_dim(v.dim())?;
    Ok(v.matrix().trace_product(&kubo_inverse(rho, w.matrix())?))
}

pub fn m_transport(rho1: &DensityMatrix, rho2: &DensityMatrix, v: &TangentVector) -> Result<TangentVector> {
    rho1.check_dim(rho2.dim())?;
    rho1.check_dim(v.dim())?;
    Ok(v.clone())
}

/// `[A]_{ρ1} ↦ [A − Tr ρ2 A]_{ρ2}`.
pub fn e_transport(rho1: &DensityMatrix, rho2: &DensityMatrix, w: &TangentVector) -> Result<TangentVector> {
    rho1.check_dim(rho2.dim())?;
    let a = kubo_inverse(rho1, w.matrix())?;
    let centered = a.shift(-rho2.expectation(&a));
    TangentVector::new(kubo(rho2, &centered)?)
}

pub fn transport(
    kind: TransportKind,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    v: &TangentVector,
) -> Result<TangentVector> {
    match kind {
        TransportKind::Mixture => m_transport(rho1, rho2, v),
        TransportKind::Exponential => e_transport(rho1, rho2, v),
    }
}

/// Mixture geodesic `(1−t)ρ + tσ`, `t ∈ [0, 1]`.
pub fn m_geodesic(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    rho.check_dim(sigma.dim())?;
    if !(0.0..=1.0).contains(&t) {
        return Err(QigError::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let h = &rho.matrix().scale(1.0 - t) + &sigma.matrix().scale(t);
    DensityMatrix::from_hermitian(h, TRACE_TOL)
}
