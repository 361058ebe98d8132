//! Hermitian spectral calculus.
//!
//! Every matrix function in the crate goes through [`SpectralDecomposition`]:
//! decompose once, map the eigenvalues, rotate back. Outputs are hermitized
//! so that round-off in the eigenvectors never leaks an anti-Hermitian part
//! into downstream traces.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QigError, Result};

pub type C64 = Complex64;

/// Relative asymmetry accepted when a raw matrix is taken as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Looser asymmetry bound for [`hermitize`], which symmetrizes explicitly.
pub const HERMITIZE_TOL: f64 = 1e-8;
/// A matrix is positive definite iff `min eig > POSITIVITY_FLOOR * max eig`.
pub const POSITIVITY_FLOOR: f64 = 1e-12;
/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Below this |ln(a/b)| the logarithmic mean uses its Taylor series.
const LOG_MEAN_SERIES_CUTOFF: f64 = 1e-4;

/// An n×n complex matrix equal to its conjugate transpose, n ≥ 2.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(DMatrix<C64>);

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn asymmetry(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn symmetrize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).scale(0.5)
}

fn check_shape(m: &DMatrix<C64>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(QigError::NotSquare { rows, cols });
    }
    if !(2..=MAX_DIM).contains(&rows) {
        return Err(QigError::InvalidDimension(rows));
    }
    Ok(rows)
}

impl HermitianMatrix {
    /// Accepts `m` if its asymmetry is within the default relative tolerance.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(m, HERMITICITY_TOL)
    }

    /// Accepts `m` if `max |m - m†| <= tol * (1 + max |m|)`, then symmetrizes.
    pub fn with_tolerance(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        check_shape(&m)?;
        let bound = tol * (1.0 + max_abs(&m));
        let asym = asymmetry(&m);
        if !(asym <= bound) {
            return Err(QigError::NotHermitian {
                asymmetry: asym,
                bound,
            });
        }
        Ok(Self(symmetrize(&m)))
    }

    /// Symmetrizes without checking. Caller guarantees the input is Hermitian
    /// up to round-off.
    pub(crate) fn from_nearly_hermitian(m: DMatrix<C64>) -> Self {
        debug_assert!(m.is_square());
        Self(symmetrize(&m))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// Row-major real entries; must be symmetric.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0));
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    /// Real trace (the imaginary part of a Hermitian trace is zero).
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// `Re Tr(self · other)`, computed without forming the product.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.0[(i, j)] * other.0[(j, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        Self(self.0.scale(s))
    }

    /// `self + c·𝟙`.
    pub fn shift(&self, c: f64) -> HermitianMatrix {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(c, 0.0);
        }
        Self(m)
    }

    /// Removes the trace: `self − (Tr self / n)·𝟙`.
    pub fn traceless_part(&self) -> HermitianMatrix {
        self.shift(-self.trace() / self.dim() as f64)
    }

    /// The ordinary matrix product; generally not Hermitian.
    pub fn matmul(&self, other: &HermitianMatrix) -> DMatrix<C64> {
        &self.0 * &other.0
    }

    fn same_dim(&self, other: &HermitianMatrix) {
        assert_eq!(self.dim(), other.dim(), "Hermitian matrix dimension mismatch");
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.same_dim(rhs);
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        self.same_dim(rhs);
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Add for HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self + &rhs
    }
}

impl Sub for HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: HermitianMatrix) -> HermitianMatrix {
        &self - &rhs
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        self.scale(-1.0)
    }
}

/// Eigenvalues in non-decreasing order with the matching unitary.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are eigenvectors.
    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Replaces the eigenvalues, keeping the eigenbasis.
    pub(crate) fn with_eigenvalues(&self, eigenvalues: Vec<f64>) -> SpectralDecomposition {
        debug_assert_eq!(eigenvalues.len(), self.eigenvalues.len());
        SpectralDecomposition {
            eigenvalues,
            eigenvectors: self.eigenvectors.clone(),
        }
    }

    /// `U diag(f(λ)) U†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(f(self.eigenvalues[i]), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        self.from_eigenbasis(diag)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|x| x)
    }

    /// `U† H U`.
    pub fn to_eigenbasis(&self, h: &HermitianMatrix) -> DMatrix<C64> {
        self.eigenvectors.adjoint() * h.as_matrix() * &self.eigenvectors
    }

    /// `U M U†`, hermitized.
    pub fn from_eigenbasis(&self, m: DMatrix<C64>) -> HermitianMatrix {
        let u = &self.eigenvectors;
        HermitianMatrix::from_nearly_hermitian(u * m * u.adjoint())
    }

    /// Applies the Schur multiplier `K_ij = kernel(λ_i, λ_j)` in the eigenbasis.
    pub fn schur_map(&self, h: &HermitianMatrix, kernel: impl Fn(f64, f64) -> f64) -> HermitianMatrix {
        let mut m = self.to_eigenbasis(h);
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= kernel(self.eigenvalues[i], self.eigenvalues[j]);
            }
        }
        self.from_eigenbasis(m)
    }

    fn check_positive(&self) -> Result<()> {
        let floor = POSITIVITY_FLOOR * self.max_eigenvalue();
        let min = self.min_eigenvalue();
        if !(self.max_eigenvalue() > 0.0 && min > floor) {
            return Err(QigError::NotPositiveDefinite {
                min_eigenvalue: min,
                floor,
            });
        }
        Ok(())
    }
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues sorted ascending.
pub fn spectral_decompose(h: &HermitianMatrix) -> SpectralDecomposition {
    let eig = h.as_matrix().clone().symmetric_eigen();
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

pub fn matrix_exp(h: &HermitianMatrix) -> HermitianMatrix {
    spectral_decompose(h).apply(f64::exp)
}

pub fn matrix_log(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let spec = spectral_decompose(p);
    spec.check_positive()?;
    Ok(spec.apply(f64::ln))
}

/// `P^u` for positive definite `P` and `u ∈ [0, 1]`.
pub fn frac_power(p: &HermitianMatrix, u: f64) -> Result<HermitianMatrix> {
    if !(0.0..=1.0).contains(&u) {
        return Err(QigError::OutOfRange {
            name: "u",
            value: u,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let spec = spectral_decompose(p);
    spec.check_positive()?;
    Ok(spec.apply(|x| x.powf(u)))
}

/// Logarithmic mean `∫₀¹ a^u b^{1−u} du = (a − b)/(ln a − ln b)`.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(QigError::NonPositiveArgument(a));
    }
    if !(b > 0.0) {
        return Err(QigError::NonPositiveArgument(b));
    }
    Ok(log_mean_unchecked(a, b))
}

/// [`log_mean`] for arguments already known to be positive.
pub(crate) fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    // Ordered arguments make the result exactly symmetric.
    let (a, b) = if a >= b { (a, b) } else { (b, a) };
    let delta = (a / b).ln();
    let geo = (a * b).sqrt();
    if delta.abs() < LOG_MEAN_SERIES_CUTOFF {
        let d2 = delta * delta;
        geo * (1.0 + d2 / 24.0 + d2 * d2 / 1920.0)
    } else {
        let half = 0.5 * delta;
        geo * half.sinh() / half
    }
}

/// `(M + M†)/2`, provided `M` is already Hermitian up to a small asymmetry.
pub fn hermitize(m: &DMatrix<C64>) -> Result<HermitianMatrix> {
    HermitianMatrix::with_tolerance(m.clone(), HERMITIZE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        HermitianMatrix::from_nearly_hermitian(g)
    }

    #[test]
    fn decompose_diagonal() {
        let spec = spectral_decompose(&HermitianMatrix::from_real_diagonal(&[2.0, 1.0]));
        assert_eq!(spec.eigenvalues(), &[1.0, 2.0]);
        let u = spec.eigenvectors();
        assert!((u[(0, 1)].norm() - 1.0).abs() < 1e-15);
        assert!((u[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decompose_pauli_x() {
        let spec = spectral_decompose(&pauli_x());
        assert!((spec.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((spec.eigenvalues()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decompose_random_reconstructs() {
        let h = random_hermitian(4, 42);
        let spec = spectral_decompose(&h);
        let u = spec.eigenvectors();
        let unitarity = (u.adjoint() * u - DMatrix::<C64>::identity(4, 4)).norm();
        assert!(unitarity < 1e-12, "{unitarity}");
        let rel = spec.reconstruct().distance(&h) / h.frobenius_norm();
        assert!(rel < 1e-12, "{rel}");
        assert!(spec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn decompose_is_idempotent_on_spectrum() {
        let h = random_hermitian(5, 3);
        let spec = spectral_decompose(&h);
        let again = spectral_decompose(&spec.reconstruct());
        for (a, b) in spec.eigenvalues().iter().zip(again.eigenvalues()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exp_of_zero_and_diagonal() {
        let id = matrix_exp(&HermitianMatrix::zeros(3));
        assert!(id.distance(&HermitianMatrix::identity(3)) < 1e-15);
        let e = matrix_exp(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0]));
        let want = HermitianMatrix::from_real_diagonal(&[1f64.exp(), 2f64.exp()]);
        assert!(e.distance(&want) < 1e-14);
    }

    #[test]
    fn log_of_identity_and_diagonal() {
        let l = matrix_log(&HermitianMatrix::identity(3)).unwrap();
        assert!(l.frobenius_norm() < 1e-15);
        let l = matrix_log(&HermitianMatrix::from_real_diagonal(&[1f64.exp(), 2f64.exp()])).unwrap();
        assert!(l.distance(&HermitianMatrix::from_real_diagonal(&[1.0, 2.0])) < 1e-14);
    }

    #[test]
    fn log_rejects_singular() {
        let err = matrix_log(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap_err();
        assert_eq!(err.kind(), "NotPositiveDefinite");
        let err = matrix_log(&HermitianMatrix::from_real_diagonal(&[1.0, 1e-13])).unwrap_err();
        assert_eq!(err.kind(), "NotPositiveDefinite");
    }

    #[test]
    fn exp_log_roundtrip() {
        for &n in &[2usize, 3, 4, 8] {
            let h = random_hermitian(n, n as u64);
            let back = matrix_log(&matrix_exp(&h)).unwrap();
            assert!(back.distance(&h) / h.frobenius_norm() < 1e-12);
            let p = matrix_exp(&h);
            let again = matrix_exp(&matrix_log(&p).unwrap());
            assert!(again.distance(&p) / p.frobenius_norm() < 1e-11);
        }
    }

    #[test]
    fn frac_power_cases() {
        let p = HermitianMatrix::from_real_diagonal(&[4.0, 9.0]);
        let half = frac_power(&p, 0.5).unwrap();
        assert!(half.distance(&HermitianMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-14);
        assert!(frac_power(&p, 0.0).unwrap().distance(&HermitianMatrix::identity(2)) < 1e-14);
        assert!(frac_power(&p, 1.0).unwrap().distance(&p) < 1e-13);
        assert_eq!(frac_power(&p, 1.5).unwrap_err().kind(), "OutOfRange");

        let q = matrix_exp(&random_hermitian(4, 11));
        let u = 0.3141;
        let prod = HermitianMatrix::from_nearly_hermitian(
            frac_power(&q, u).unwrap().matmul(&frac_power(&q, 1.0 - u).unwrap()),
        );
        assert!(prod.distance(&q) / q.frobenius_norm() < 1e-12);
    }

    #[test]
    fn log_mean_examples() {
        assert_eq!(log_mean(0.3, 0.3).unwrap(), 0.3);
        // 64-node Gauss–Legendre quadrature of ∫ 0.75^u 0.25^(1-u) du.
        let frozen = 0.455_119_613_313_418_77;
        assert!((log_mean(0.75, 0.25).unwrap() - frozen).abs() < 1e-15);
        assert!((log_mean(0.75, 0.25).unwrap() - 0.5 / 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_mean(0.75, 0.25).unwrap(), log_mean(0.25, 0.75).unwrap());
        assert_eq!(log_mean(0.0, 1.0).unwrap_err().kind(), "NonPositiveArgument");
        assert_eq!(log_mean(1.0, -2.0).unwrap_err().kind(), "NonPositiveArgument");
    }

    #[test]
    fn log_mean_series_branch_is_continuous() {
        let a = 1.0;
        for &d in &[0.99e-4, 1.01e-4] {
            let b = a * f64::exp(d);
            let direct = (b - a) / d;
            assert!((log_mean_unchecked(a, b) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn hermitize_cases() {
        let x = pauli_x();
        assert_eq!(hermitize(x.as_matrix()).unwrap(), x);

        let mut noisy = x.as_matrix().clone();
        noisy[(0, 1)] += c(1e-15, 0.0);
        noisy[(1, 0)] -= c(1e-15, 0.0);
        let h = hermitize(&noisy).unwrap();
        assert_eq!(h.get(0, 1), h.get(1, 0).conj());

        let mut perturbed = x.as_matrix().clone();
        perturbed[(0, 0)] += c(0.0, 1e-12);
        perturbed[(1, 1)] += c(0.0, 1e-12);
        assert!(hermitize(&perturbed).unwrap().distance(&x) < 1e-12);

        let mut bad = x.as_matrix().clone();
        bad[(0, 1)] = c(2.0, 0.0);
        assert_eq!(hermitize(&bad).unwrap_err().kind(), "NotHermitian");
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert_eq!(HermitianMatrix::new(m).unwrap_err().kind(), "NotSquare");
        let m = DMatrix::<C64>::zeros(1, 1);
        assert_eq!(HermitianMatrix::new(m).unwrap_err().kind(), "InvalidDimension");
    }
}
