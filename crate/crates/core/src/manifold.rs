//! The manifold of non-degenerate density matrices.
//!
//! A point is a [`DensityMatrix`]. Tangent vectors at any point are traceless
//! Hermitian matrices ([`TangentVector`]); chart values at a base point ρ are
//! Hermitian matrices with zero ρ-expectation ([`CenteredObservable`]). The
//! Kubo transform at ρ maps the latter onto the former.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{QigError, Result};
use crate::spectra::{
    log_mean_unchecked, spectral_decompose, HermitianMatrix, SpectralDecomposition, C64,
    HERMITICITY_TOL, MAX_DIM, POSITIVITY_FLOOR,
};

/// Accepted |Tr ρ − 1| for inputs; accepted inputs are renormalized.
pub const TRACE_TOL: f64 = 1e-10;
/// Accepted |Tr ρA| for a centered observable.
pub const CENTERING_TOL: f64 = 1e-10;
/// Accepted |Tr V| for a tangent vector.
pub const TRACELESS_TOL: f64 = 1e-10;
/// Trace magnitude treated as exact zero by [`TangentVector::new`].
pub const TRACE_ROUNDOFF: f64 = 1e-12;
/// Default mixing weight of 𝟙/n in [`random_density`].
pub const DEFAULT_REGULARIZATION: f64 = 1e-3;

/// A Hermitian, strictly positive definite, unit-trace matrix.
///
/// The spectrum and the matrix logarithm are computed once at construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
    log: HermitianMatrix,
}

impl DensityMatrix {
    /// Builds a state from an eigendecomposition with positive eigenvalues
    /// summing to one.
    pub(crate) fn from_spectrum(spectrum: SpectralDecomposition) -> Self {
        let matrix = spectrum.reconstruct();
        let log = spectrum.apply(f64::ln);
        Self {
            matrix,
            spectrum,
            log,
        }
    }

    /// Validates a Hermitian matrix as a state with the given trace tolerance.
    pub fn from_hermitian(h: HermitianMatrix, trace_tol: f64) -> Result<Self> {
        let trace = h.trace();
        if !((trace - 1.0).abs() <= trace_tol) {
            return Err(QigError::TraceNotOne(trace));
        }
        let spec = spectral_decompose(&h);
        let floor = POSITIVITY_FLOOR * spec.max_eigenvalue();
        if !(spec.max_eigenvalue() > 0.0 && spec.min_eigenvalue() > floor) {
            return Err(QigError::Degenerate {
                min_eigenvalue: spec.min_eigenvalue(),
                floor,
            });
        }
        let sum: f64 = spec.eigenvalues().iter().sum();
        let normalized = spec.eigenvalues().iter().map(|l| l / sum).collect();
        Ok(Self::from_spectrum(spec.with_eigenvalues(normalized)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// `log ρ`.
    pub fn log(&self) -> &HermitianMatrix {
        &self.log
    }

    /// `Tr ρA`.
    pub fn expectation(&self, a: &HermitianMatrix) -> f64 {
        self.matrix.trace_product(a)
    }

    /// `ρ^u` for `u ∈ [0, 1]`.
    pub fn power(&self, u: f64) -> HermitianMatrix {
        self.spectrum.apply(|x| x.powf(u))
    }

    /// Frobenius distance between the two states.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        self.matrix.distance(&other.matrix)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if self.dim() != found {
            return Err(QigError::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// A traceless Hermitian matrix: an element of every tangent plane.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector(HermitianMatrix);

impl TangentVector {
    /// Accepts `v` if `|Tr v| <= TRACELESS_TOL`. A trace above round-off
    /// level is projected out; otherwise `v` is kept bit for bit.
    pub fn new(v: HermitianMatrix) -> Result<Self> {
        let tr = v.trace();
        if !(tr.abs() <= TRACELESS_TOL) {
            return Err(QigError::NotTraceless(tr));
        }
        if tr.abs() <= TRACE_ROUNDOFF {
            return Ok(Self(v));
        }
        Ok(Self(v.traceless_part()))
    }

    pub(crate) fn from_traceless(v: HermitianMatrix) -> Self {
        Self(v.traceless_part())
    }

    pub fn zero(n: usize) -> Self {
        Self(HermitianMatrix::zeros(n))
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// A Hermitian `A` with `Tr ρA = 0`, tagged with its base point ρ.
#[derive(Clone, Debug)]
pub struct CenteredObservable {
    matrix: HermitianMatrix,
    base: DensityMatrix,
}

impl CenteredObservable {
    /// Accepts `a` if `|Tr ρa| <= CENTERING_TOL`; the residual expectation
    /// is subtracted.
    pub fn new(base: &DensityMatrix, a: HermitianMatrix) -> Result<Self> {
        let matrix = recenter(base, &a)?;
        Ok(Self {
            matrix,
            base: base.clone(),
        })
    }

    /// `A − (Tr ρA)·𝟙`, centered at ρ by construction.
    pub fn center(base: &DensityMatrix, a: &HermitianMatrix) -> Result<Self> {
        base.check_dim(a.dim())?;
        Ok(Self {
            matrix: a.shift(-base.expectation(a)),
            base: base.clone(),
        })
    }

    pub fn zero(base: &DensityMatrix) -> Self {
        Self {
            matrix: HermitianMatrix::zeros(base.dim()),
            base: base.clone(),
        }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    /// The same matrix read as centered at `rho`; fails unless it is.
    pub(crate) fn at(&self, rho: &DensityMatrix) -> Result<HermitianMatrix> {
        recenter(rho, &self.matrix)
    }
}

fn recenter(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    rho.check_dim(a.dim())?;
    let e = rho.expectation(a);
    if !(e.abs() <= CENTERING_TOL) {
        return Err(QigError::NotCentered(e));
    }
    Ok(a.shift(-e))
}

/// `ln Σ exp(x_i)` without overflow.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `(ln Tr e^H, e^H / Tr e^H)`.
pub(crate) fn gibbs(h: &HermitianMatrix) -> (f64, DensityMatrix) {
    let spec = spectral_decompose(h);
    let lse = log_sum_exp(spec.eigenvalues());
    let weights = spec.eigenvalues().iter().map(|x| (x - lse).exp()).collect();
    (lse, DensityMatrix::from_spectrum(spec.with_eigenvalues(weights)))
}

/// Validates a raw complex matrix as a point of the manifold.
pub fn validate_density(m: &DMatrix<C64>) -> Result<DensityMatrix> {
    validate_density_with_tol(m, HERMITICITY_TOL)
}

/// [`validate_density`] with one tolerance for both the Hermiticity and
/// the trace check.
pub fn validate_density_with_tol(m: &DMatrix<C64>, tol: f64) -> Result<DensityMatrix> {
    let h = HermitianMatrix::with_tolerance(m.clone(), tol)?;
    DensityMatrix::from_hermitian(h, tol)
}

/// Seeded random state `(1−ε)·GG†/Tr GG† + ε·𝟙/n` with `G` complex Ginibre.
pub fn random_density(n: usize, seed: u64, regularization: f64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(&mut rng, n, regularization)
}

pub fn random_density_with<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    regularization: f64,
) -> Result<DensityMatrix> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(QigError::InvalidDimension(n));
    }
    if !(0.0..=1.0).contains(&regularization) || regularization == 0.0 {
        return Err(QigError::OutOfRange {
            name: "regularization",
            value: regularization,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    });
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    let mixed = gg.scale((1.0 - regularization) / tr)
        + DMatrix::<C64>::identity(n, n).scale(regularization / n as f64);
    let h = HermitianMatrix::from_nearly_hermitian(mixed);
    DensityMatrix::from_hermitian(h, TRACE_TOL)
}

fn check_pair(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    rho.check_dim(sigma.dim())
}

/// Umegaki relative entropy `D(ρ‖σ) = Tr ρ(log ρ − log σ)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_pair(rho, sigma)?;
    Ok(rho.expectation(&(rho.log() - sigma.log())))
}

/// Kubo transform `[A]_ρ = ∫₀¹ ρ^u A ρ^{1−u} du`.
pub fn kubo(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    rho.check_dim(a.dim())?;
    Ok(rho.spectrum().schur_map(a, log_mean_unchecked))
}

/// Inverse Kubo transform: divides by the logarithmic mean in the eigenbasis.
pub fn kubo_inverse(rho: &DensityMatrix, v: &HermitianMatrix) -> Result<HermitianMatrix> {
    rho.check_dim(v.dim())?;
    Ok(rho
        .spectrum()
        .schur_map(v, |a, b| 1.0 / log_mean_unchecked(a, b)))
}

/// Kubo transform for any positive definite matrix given by its spectrum,
/// e.g. an unnormalized `e^H`.
pub fn kubo_with_spectrum(
    spectrum: &SpectralDecomposition,
    a: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    if spectrum.dim() != a.dim() {
        return Err(QigError::DimensionMismatch {
            expected: spectrum.dim(),
            found: a.dim(),
        });
    }
    let min = spectrum.min_eigenvalue();
    if !(min > 0.0) {
        return Err(QigError::NotPositiveDefinite {
            min_eigenvalue: min,
            floor: 0.0,
        });
    }
    Ok(spectrum.schur_map(a, log_mean_unchecked))
}

/// The chart centered at ρ: `c_ρ(σ) = log σ − log ρ + D(ρ‖σ)·𝟙`.
pub fn chart(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<CenteredObservable> {
    check_pair(rho, sigma)?;
    let d = relative_entropy(rho, sigma)?;
    let a = (sigma.log() - rho.log()).shift(d);
    CenteredObservable::new(rho, a)
}

/// `τ_A = exp(log ρ + A) / Tr exp(log ρ + A)`, the state with `c_ρ(τ_A) = A`.
pub fn chart_inverse(rho: &DensityMatrix, a: &CenteredObservable) -> Result<DensityMatrix> {
    let a = a.at(rho)?;
    Ok(gibbs(&(rho.log() + &a)).1)
}

/// Tangent at ρ of the exponential arc from ρ towards σ: `[c_ρ(σ)]_ρ`.
pub fn tangent(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<TangentVector> {
    let c = chart(rho, sigma)?;
    Ok(TangentVector::from_traceless(kubo(rho, c.matrix())?))
}

/// The point reached from ρ along the exponential arc with initial velocity `v`.
pub fn exp_map(rho: &DensityMatrix, v: &TangentVector) -> Result<DensityMatrix> {
    let a = CenteredObservable::center(rho, &kubo_inverse(rho, v.matrix())?)?;
    chart_inverse(rho, &a)
}

/// Re-expresses a chart value at ρ1 in the chart centered at ρ2.
pub fn transition_chart(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    a1: &CenteredObservable,
) -> Result<CenteredObservable> {
    check_pair(rho1, rho2)?;
    let sigma = chart_inverse(rho1, a1)?;
    let shift = relative_entropy(rho2, &sigma)? - relative_entropy(rho1, &sigma)?;
    let a1 = a1.at(rho1)?;
    let a2 = (&(&a1 + rho1.log()) - rho2.log()).shift(shift);
    CenteredObservable::new(rho2, a2)
}

/// The exponential arc `t ↦ exp((1−t) log ρ + t log σ − α(t))`.
///
/// Defined for every real `t`; `t = 0` gives ρ and `t = 1` gives σ.
#[derive(Clone, Debug)]
pub struct ExponentialArc {
    start: DensityMatrix,
    end: DensityMatrix,
    direction: HermitianMatrix,
}

impl ExponentialArc {
    pub fn new(start: &DensityMatrix, end: &DensityMatrix) -> Result<Self> {
        check_pair(start, end)?;
        Ok(Self {
            start: start.clone(),
            end: end.clone(),
            direction: end.log() - start.log(),
        })
    }

    pub fn start(&self) -> &DensityMatrix {
        &self.start
    }

    pub fn end(&self) -> &DensityMatrix {
        &self.end
    }

    /// `log σ − log ρ`.
    pub fn direction(&self) -> &HermitianMatrix {
        &self.direction
    }

    fn exponent(&self, t: f64) -> HermitianMatrix {
        self.start.log() + &self.direction.scale(t)
    }

    /// Normalization `α(t) = log Tr exp((1−t) log ρ + t log σ)`.
    pub fn alpha(&self, t: f64) -> f64 {
        log_sum_exp(spectral_decompose(&self.exponent(t)).eigenvalues())
    }

    pub fn point(&self, t: f64) -> DensityMatrix {
        gibbs(&self.exponent(t)).1
    }

    /// `d/dt σ_t = [m − Tr σ_t m]_{σ_t}` with `m = log σ − log ρ`.
    pub fn velocity(&self, t: f64) -> TangentVector {
        let sigma_t = self.point(t);
        let centered = self.direction.shift(-sigma_t.expectation(&self.direction));
        let v = sigma_t.spectrum().schur_map(&centered, log_mean_unchecked);
        TangentVector::from_traceless(v)
    }
}
