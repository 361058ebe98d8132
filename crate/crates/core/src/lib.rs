//! Information geometry of the manifold of non-degenerate density matrices.
//!
//! Points are [`DensityMatrix`] values. Each point ρ carries the chart
//! `c_ρ(σ) = log σ − log ρ + D(ρ‖σ)`, the Kubo transform between chart values
//! and tangent vectors, and the Bogoliubov inner product. The mixture and
//! exponential parallel transports are dual for that product, the potential
//! `Φ_ρ(A) = log Tr exp(log ρ + A)` gives the Legendre structure, and
//! [`coords`] expresses everything in an orthonormal Gell-Mann basis.
//!
//! [`numcheck`] holds independent finite-difference and quadrature oracles
//! that verify the geometric identities on seeded random states.

// Negated comparisons are deliberate: NaN must fail every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coords;
pub mod error;
pub mod legendre;
pub mod manifold;
pub mod metric;
pub mod numcheck;
pub mod spectra;

pub use error::{QigError, Result};
pub use manifold::{CenteredObservable, DensityMatrix, ExponentialArc, TangentVector};
pub use spectra::{HermitianMatrix, SpectralDecomposition, C64};
