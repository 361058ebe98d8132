//! Gauss–Legendre quadrature on [0, 1] and the integral forms it checks.
//!
//! These evaluate `∫₀¹ ρ^u A ρ^{1−u} du` node by node with fractional powers
//! and plain matrix products, never touching the logarithmic-mean kernel used
//! by [`crate::manifold::kubo`].

use nalgebra::DMatrix;

use crate::manifold::DensityMatrix;
use crate::spectra::{HermitianMatrix, C64};

/// Node count used by every quadrature oracle.
pub const DEFAULT_NODES: usize = 64;

/// Nodes and weights of the `count`-point rule mapped to [0, 1].
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count >= 1);
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let m = count.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for the i-th root of P_count.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (count as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=count {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if count == 1 { x } else { p1 };
            let prev = if count == 1 { 1.0 } else { p0 };
            dp = count as f64 * (x * p - prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[count - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[count - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

/// `∫₀¹ a^u b^{1−u} du`.
pub fn log_mean_quadrature(a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(DEFAULT_NODES);
    nodes
        .iter()
        .zip(&weights)
        .map(|(u, w)| w * a.powf(*u) * b.powf(1.0 - u))
        .sum()
}

/// `∫₀¹ ρ^u A ρ^{1−u} du`.
pub fn kubo_quadrature(rho: &DensityMatrix, a: &HermitianMatrix) -> HermitianMatrix {
    let (nodes, weights) = gauss_legendre(DEFAULT_NODES);
    let n = rho.dim();
    let mut acc = DMatrix::<C64>::zeros(n, n);
    for (u, w) in nodes.iter().zip(&weights) {
        let left = rho.power(*u);
        let right = rho.power(1.0 - u);
        acc += (left.as_matrix() * a.as_matrix() * right.as_matrix()).scale(*w);
    }
    HermitianMatrix::from_nearly_hermitian(acc)
}

/// `∫₀¹ Tr ρ^u X ρ^{1−u} Y du`.
pub fn bogoliubov_quadrature(rho: &DensityMatrix, x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    let (nodes, weights) = gauss_legendre(DEFAULT_NODES);
    nodes
        .iter()
        .zip(&weights)
        .map(|(u, w)| {
            let left = rho.power(*u);
            let right = rho.power(1.0 - u);
            let m = left.as_matrix() * x.as_matrix() * right.as_matrix() * y.as_matrix();
            w * m.trace().re
        })
        .sum()
}
