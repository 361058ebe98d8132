//! Independent numerical oracles.
//!
//! Finite differences of the divergence and of the potential, quadrature of
//! the Kubo integral, and residuals of the transport and geodesic identities.
//! None of these reuse the closed forms they are compared against.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{QigError, Result};
use crate::manifold::{relative_entropy, tangent, DensityMatrix, ExponentialArc, TangentVector};
use crate::metric::{e_transport, m_geodesic, m_transport, pairing};
use crate::spectra::HermitianMatrix;

pub mod quadrature;
mod suite;

pub use suite::{run_suite, CHECK_NAMES};

/// Default step for first derivatives.
pub const FIRST_DERIVATIVE_STEP: f64 = 1e-5;
/// Default step for second mixed derivatives.
pub const SECOND_DERIVATIVE_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FdScheme {
    /// Second-order central difference.
    Central2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdConfig {
    step: f64,
    scheme: FdScheme,
    richardson: bool,
}

impl FdConfig {
    pub fn new(step: f64, richardson: bool) -> Result<Self> {
        if !(1e-8..=1e-2).contains(&step) {
            return Err(QigError::OutOfRange {
                name: "step",
                value: step,
                lo: 1e-8,
                hi: 1e-2,
            });
        }
        Ok(Self {
            step,
            scheme: FdScheme::Central2,
            richardson,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn scheme(&self) -> FdScheme {
        self.scheme
    }

    pub fn richardson(&self) -> bool {
        self.richardson
    }
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            step: FIRST_DERIVATIVE_STEP,
            scheme: FdScheme::Central2,
            richardson: false,
        }
    }
}

/// Outcome of one verification. `passed` holds iff `residual <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub metadata: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            passed: residual <= tolerance,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

/// One line per report: `PASS name [k=v ...] residual=… tolerance=…`.
pub fn format_lines(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let meta: Vec<String> = r.metadata.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            out,
            "{status} {:<32} {:<28} residual={:.3e} tolerance={:.1e}",
            r.name,
            meta.join(" "),
            r.residual,
            r.tolerance
        );
    }
    out
}

/// A fixed-width table for terminals.
pub fn format_table(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<32} {:>3} {:>12} {:>10}  status",
        "check", "n", "residual", "tolerance"
    );
    for r in reports {
        let n = r.metadata.get("n").map(String::as_str).unwrap_or("-");
        let _ = writeln!(
            out,
            "{:<32} {:>3} {:>12.3e} {:>10.1e}  {}",
            r.name,
            n,
            r.residual,
            r.tolerance,
            if r.passed { "ok" } else { "FAIL" }
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", reports.len(), failed);
    out
}

/// Values a finite-difference stencil can combine.
pub trait FdValue: Sized {
    /// `a·self + b·other`.
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self;
}

impl FdValue for f64 {
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        a * self + b * other
    }
}

impl FdValue for HermitianMatrix {
    fn lincomb(&self, a: f64, other: &Self, b: f64) -> Self {
        &self.scale(a) + &other.scale(b)
    }
}

/// Directional derivative `(f(A + hB) − f(A − hB)) / 2h`; with Richardson
/// extrapolation `(4 D(h/2) − D(h)) / 3`.
pub fn frechet_fd<T, F>(map: F, a: &HermitianMatrix, b: &HermitianMatrix, cfg: &FdConfig) -> Result<T>
where
    T: FdValue,
    F: Fn(&HermitianMatrix) -> Result<T>,
{
    let central = |h: f64| -> Result<T> {
        let plus = map(&(a + &b.scale(h)))?;
        let minus = map(&(a - &b.scale(h)))?;
        Ok(plus.lincomb(0.5 / h, &minus, -0.5 / h))
    };
    let coarse = central(cfg.step)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = central(0.5 * cfg.step)?;
    Ok(fine.lincomb(4.0 / 3.0, &coarse, -1.0 / 3.0))
}

/// `−∂s∂t D(σ_s‖τ_t)` at `s = t = 0` by a four-point mixed central stencil,
/// where `σ_s`, `τ_t` are the exponential arcs from ρ towards σ and τ.
pub fn eguchi_fd(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tau: &DensityMatrix,
    cfg: &FdConfig,
) -> Result<f64> {
    let s_arc = ExponentialArc::new(rho, sigma)?;
    let t_arc = ExponentialArc::new(rho, tau)?;
    let stencil = |h: f64| -> Result<f64> {
        let (sp, sm) = (s_arc.point(h), s_arc.point(-h));
        let (tp, tm) = (t_arc.point(h), t_arc.point(-h));
        let mixed = relative_entropy(&sp, &tp)? - relative_entropy(&sp, &tm)?
            - relative_entropy(&sm, &tp)?
            + relative_entropy(&sm, &tm)?;
        Ok(-mixed / (4.0 * h * h))
    };
    let coarse = stencil(cfg.step)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    Ok((4.0 * stencil(0.5 * cfg.step)? - coarse) / 3.0)
}

/// Frobenius norm of `Π*(σ_{t+s} → σ_t) γ̇(t+s) − γ̇(t)` along the
/// exponential arc from ρ to σ.
pub fn e_geodesic_residual(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64, s: f64) -> Result<f64> {
    let arc = ExponentialArc::new(rho, sigma)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let there = arc.point(t + s);
    let here = arc.point(t);
    let moved = e_transport(&there, &here, &arc.velocity(t + s))?;
    Ok(moved.matrix().distance(arc.velocity(t).matrix()))
}

/// Transport of the field `ρ' ↦ Y_{ρ'}(σ)` along the arc from ρ to σ.
///
/// Returns `(measured, predicted)` where `measured` is the coefficient `k`
/// with `Π*(σ_{t+s} → σ_t) Y_{σ_{t+s}}(σ) = k · Y_{σ_t}(σ)` (least squares)
/// and `predicted = (1 − t − s)/(1 − t)`.
pub fn y_field_transport_scale(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64, s: f64) -> Result<(f64, f64)> {
    let arc = ExponentialArc::new(rho, sigma)?;
    let there = arc.point(t + s);
    let here = arc.point(t);
    let moved = e_transport(&there, &here, &tangent(&there, sigma)?)?;
    let local = tangent(&here, sigma)?;
    let denom = local.matrix().trace_product(local.matrix());
    let measured = moved.matrix().trace_product(local.matrix()) / denom;
    Ok((measured, (1.0 - t - s) / (1.0 - t)))
}

/// Frobenius norm of `Π(γ_{t+s} → γ_t)(σ − ρ) − (σ − ρ)` along the mixture
/// geodesic; identically zero.
pub fn m_geodesic_residual(rho: &DensityMatrix, sigma: &DensityMatrix, t: f64, s: f64) -> Result<f64> {
    let there = m_geodesic(rho, sigma, t + s)?;
    let here = m_geodesic(rho, sigma, t)?;
    let velocity = TangentVector::new(sigma.matrix() - rho.matrix())?;
    let moved = m_transport(&there, &here, &velocity)?;
    Ok(moved.matrix().distance(velocity.matrix()))
}

/// `|(ΠV, Π*W)_{ρ2} − (V, W)_{ρ1}|`.
pub fn duality_residual(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    v: &TangentVector,
    w: &TangentVector,
) -> Result<f64> {
    let before = pairing(rho1, v, w)?;
    let after = pairing(rho2, &m_transport(rho1, rho2, v)?, &e_transport(rho1, rho2, w)?)?;
    Ok((after - before).abs())
}
