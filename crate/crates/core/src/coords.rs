//! Affine coordinates in a Hilbert–Schmidt orthonormal basis of traceless
//! Hermitian matrices.
//!
//! With `log σ = Σ x^i(σ) f_i + (Tr log σ / n)·𝟙` the chart `c_ρ(σ)` has
//! components `x(σ) − x(ρ)` on the centered basis `f_i − Tr ρ f_i`, and the
//! metric tensor is the Bogoliubov Gram matrix of that basis.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{QigError, Result};
use crate::manifold::{kubo, DensityMatrix, TangentVector};
use crate::spectra::{HermitianMatrix, C64, MAX_DIM};

const TRACE_TOL: f64 = 1e-14;
const ORTHONORMALITY_TOL: f64 = 1e-12;

/// An ordered orthonormal basis `(f_i)` of the `n² − 1` dimensional space of
/// traceless Hermitian matrices.
#[derive(Clone, Debug)]
pub struct TracelessBasis {
    dim: usize,
    elements: Vec<HermitianMatrix>,
}

/// Generalized Gell-Mann basis.
///
/// Order: symmetric off-diagonal generators `(E_jk + E_kj)/√2`, then
/// antisymmetric `(−i E_jk + i E_kj)/√2`, both lexicographic in `j < k`, then
/// the diagonal generators `diag(1,…,1,−k,0,…)/√(k(k+1))` for `k = 1..n`.
/// For `n = 2` this is `(X, Y, Z)/√2`.
pub fn gellmann_basis(n: usize) -> Result<TracelessBasis> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(QigError::InvalidDimension(n));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect();
    let mut elements = Vec::with_capacity(n * n - 1);
    for &(j, k) in &pairs {
        let mut m = DMatrix::<C64>::zeros(n, n);
        m[(j, k)] = C64::new(s, 0.0);
        m[(k, j)] = C64::new(s, 0.0);
        elements.push(HermitianMatrix::from_nearly_hermitian(m));
    }
    for &(j, k) in &pairs {
        let mut m = DMatrix::<C64>::zeros(n, n);
        m[(j, k)] = C64::new(0.0, -s);
        m[(k, j)] = C64::new(0.0, s);
        elements.push(HermitianMatrix::from_nearly_hermitian(m));
    }
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut d = vec![0.0; n];
        d[..k].fill(1.0 / norm);
        d[k] = -(k as f64) / norm;
        elements.push(HermitianMatrix::from_real_diagonal(&d));
    }
    Ok(TracelessBasis { dim: n, elements })
}

impl TracelessBasis {
    /// Validates a user-supplied basis.
    pub fn from_elements(dim: usize, elements: Vec<HermitianMatrix>) -> Result<Self> {
        if elements.len() != dim * dim - 1 {
            return Err(QigError::DimensionMismatch {
                expected: dim * dim - 1,
                found: elements.len(),
            });
        }
        for f in &elements {
            if f.dim() != dim {
                return Err(QigError::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
            if !(f.trace().abs() <= TRACE_TOL) {
                return Err(QigError::NotTraceless(f.trace()));
            }
        }
        let basis = Self { dim, elements };
        let off = (basis.gram() - DMatrix::<f64>::identity(dim * dim - 1, dim * dim - 1)).amax();
        if !(off <= ORTHONORMALITY_TOL) {
            return Err(QigError::OutOfRange {
                name: "gram deviation",
                value: off,
                lo: 0.0,
                hi: ORTHONORMALITY_TOL,
            });
        }
        Ok(basis)
    }

    /// Matrix dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `n² − 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Result<&HermitianMatrix> {
        self.elements.get(i).ok_or(QigError::IndexOutOfRange {
            index: i,
            len: self.len(),
        })
    }

    /// Hilbert–Schmidt Gram matrix `Tr f_i f_j`.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |i, j| self.elements[i].trace_product(&self.elements[j]))
    }

    /// `Tr(H f_i)` for every basis element.
    pub fn components(&self, h: &HermitianMatrix) -> Result<Vec<f64>> {
        self.check_dim(h.dim())?;
        Ok(self.elements.iter().map(|f| h.trace_product(f)).collect())
    }

    /// `Σ c_i f_i`.
    pub fn combine(&self, coefficients: &[f64]) -> Result<HermitianMatrix> {
        if coefficients.len() != self.len() {
            return Err(QigError::DimensionMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        Ok(self
            .elements
            .iter()
            .zip(coefficients)
            .fold(HermitianMatrix::zeros(self.dim), |acc, (f, c)| &acc + &f.scale(*c)))
    }

    /// `f'_i = Σ_j R_ij f_j` for an orthogonal `R`.
    pub fn rotated(&self, rotation: &DMatrix<f64>) -> Result<Self> {
        let k = self.len();
        if rotation.shape() != (k, k) {
            return Err(QigError::DimensionMismatch {
                expected: k,
                found: rotation.nrows(),
            });
        }
        let elements = (0..k)
            .map(|i| {
                let row: Vec<f64> = (0..k).map(|j| rotation[(i, j)]).collect();
                self.combine(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(self.dim, elements)
    }

    /// The basis rotated by a seeded random orthogonal matrix (QR of a
    /// Gaussian matrix).
    pub fn randomly_rotated(&self, seed: u64) -> Result<Self> {
        let k = self.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::<f64>::from_fn(k, k, |_, _| StandardNormal.sample(&mut rng));
        let q = g.qr().q();
        self.rotated(&q)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(QigError::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// `x^i(σ) = Tr(log σ · f_i)`.
pub fn affine_coords(sigma: &DensityMatrix, basis: &TracelessBasis) -> Result<Vec<f64>> {
    basis.components(sigma.log())
}

fn centered_element(rho: &DensityMatrix, basis: &TracelessBasis, i: usize) -> Result<HermitianMatrix> {
    let f = basis.element(i)?;
    Ok(f.shift(-rho.expectation(f)))
}

/// `[e_i]_ρ = [f_i − Tr ρ f_i]_ρ`, with `i` counted from zero.
pub fn basis_field(rho: &DensityMatrix, i: usize, basis: &TracelessBasis) -> Result<TangentVector> {
    basis.check_dim(rho.dim())?;
    let centered = centered_element(rho, basis, i)?;
    TangentVector::new(kubo(rho, &centered)?)
}

/// `g_ij(ρ) = (e_i, e_j)_ρ` in a given basis.
#[derive(Clone, Debug)]
pub struct MetricTensor {
    pub base: DensityMatrix,
    pub entries: DMatrix<f64>,
}

impl MetricTensor {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `xᵀ g y`.
    pub fn quadratic_form(&self, x: &[f64], y: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        let y = DVector::from_column_slice(y);
        x.dot(&(&self.entries * y))
    }

    /// `g · v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.entries * DVector::from_column_slice(v)).iter().copied().collect()
    }
}

/// Each entry is one Bogoliubov pairing; the lower triangle mirrors the upper.
pub fn metric_tensor(rho: &DensityMatrix, basis: &TracelessBasis) -> Result<MetricTensor> {
    basis.check_dim(rho.dim())?;
    let k = basis.len();
    let centered = (0..k)
        .map(|i| centered_element(rho, basis, i))
        .collect::<Result<Vec<_>>>()?;
    let transformed = centered
        .iter()
        .map(|c| kubo(rho, c))
        .collect::<Result<Vec<_>>>()?;
    let mut g = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = transformed[i].trace_product(&centered[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(MetricTensor {
        base: rho.clone(),
        entries: g,
    })
}
