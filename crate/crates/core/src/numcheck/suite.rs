//! The seeded verification suite.
//!
//! Each check maps one random instance to a residual. For every dimension the
//! suite keeps the worst residual over all samples; the report is sorted by
//! check name, then dimension.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::quadrature::{bogoliubov_quadrature, kubo_quadrature, log_mean_quadrature};
use super::{
    duality_residual, e_geodesic_residual, eguchi_fd, frechet_fd, m_geodesic_residual,
    y_field_transport_scale, CheckReport, FdConfig, FIRST_DERIVATIVE_STEP,
    SECOND_DERIVATIVE_STEP,
};
use crate::coords::{affine_coords, basis_field, gellmann_basis, metric_tensor, TracelessBasis};
use crate::error::Result;
use crate::legendre::{center, legendre_gap, potential, potential_derivative, tangent_plane_value, tau_derivative};
use crate::manifold::{
    chart, chart_inverse, exp_map, kubo, kubo_inverse, kubo_with_spectrum, log_sum_exp,
    random_density_with, relative_entropy, tangent, transition_chart, DensityMatrix,
    ExponentialArc, TangentVector, DEFAULT_REGULARIZATION,
};
use crate::metric::{bogoliubov, e_transport, inner_tangent, pairing};
use crate::spectra::{log_mean, matrix_exp, matrix_log, spectral_decompose, HermitianMatrix, C64};

/// Random states drawn per sample in the supremum sweep.
const SWEEP_SIZE: usize = 200;

struct Instance {
    n: usize,
    seed: u64,
    sample: u64,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl Instance {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let key = splitmix(splitmix(splitmix(self.seed) ^ self.n as u64) ^ self.sample);
        ChaCha8Rng::seed_from_u64(splitmix(key ^ stream.wrapping_mul(0x2545_f491_4f6c_dd1d)))
    }

    fn density(&self, k: u64) -> Result<DensityMatrix> {
        random_density_with(&mut self.rng(k), self.n, DEFAULT_REGULARIZATION)
    }

    /// Random Hermitian matrix of unit Frobenius norm.
    fn hermitian(&self, k: u64) -> HermitianMatrix {
        let mut rng = self.rng(1000 + k);
        let n = self.n;
        let g = DMatrix::from_fn(n, n, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        });
        let h = HermitianMatrix::from_nearly_hermitian(g);
        let norm = h.frobenius_norm();
        h.scale(1.0 / norm)
    }

    fn traceless(&self, k: u64) -> TangentVector {
        let v = self.hermitian(k).traceless_part();
        let norm = v.frobenius_norm();
        TangentVector::from_traceless(v.scale(1.0 / norm))
    }

    fn uniform(&self, k: u64) -> f64 {
        self.rng(2000 + k).random_range(-2.0..2.0)
    }
}

#[derive(Clone, Copy)]
enum Agg {
    Max,
    Min,
}

#[derive(Default)]
struct Outcome {
    residual: f64,
    notes: Vec<(&'static str, f64, Agg)>,
}

impl Outcome {
    fn of(residual: f64) -> Self {
        Self {
            residual,
            notes: Vec::new(),
        }
    }

    fn note(mut self, key: &'static str, value: f64, agg: Agg) -> Self {
        self.notes.push((key, value, agg));
        self
    }
}

type CheckFn = fn(&Instance) -> Result<Outcome>;

struct Check {
    name: &'static str,
    tolerance: f64,
    run: CheckFn,
}

fn rel(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    a.distance(b) / b.frobenius_norm().max(f64::MIN_POSITIVE)
}

fn fd_first(richardson: bool) -> FdConfig {
    FdConfig::new(FIRST_DERIVATIVE_STEP, richardson).expect("static step is in range")
}

// spectra

fn spectral_reconstruction(inst: &Instance) -> Result<Outcome> {
    let h = inst.hermitian(0);
    let spec = spectral_decompose(&h);
    let u = spec.eigenvectors();
    let unitarity = (u.adjoint() * u - DMatrix::<C64>::identity(inst.n, inst.n)).norm();
    let again = spectral_decompose(&spec.reconstruct());
    let drift = spec
        .eigenvalues()
        .iter()
        .zip(again.eigenvalues())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Outcome::of(rel(&spec.reconstruct(), &h).max(unitarity).max(drift)))
}

fn exp_log_roundtrip(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let back = matrix_exp(&matrix_log(rho.matrix())?);
    let h = inst.hermitian(1).scale(3.0);
    let again = matrix_log(&matrix_exp(&h))?;
    Ok(Outcome::of(rel(&back, rho.matrix()).max(rel(&again, &h))))
}

fn log_mean_pairs(inst: &Instance) -> Vec<(f64, f64)> {
    let mut rng = inst.rng(3000);
    (0..8)
        .map(|_| {
            let a = 10f64.powf(rng.random_range(-6.0..3.0));
            let b = 10f64.powf(rng.random_range(-6.0..3.0));
            (a, b)
        })
        .collect()
}

fn log_mean_vs_quadrature(inst: &Instance) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (a, b) in log_mean_pairs(inst) {
        let q = log_mean_quadrature(a, b);
        worst = worst.max((log_mean(a, b)? - q).abs() / q);
    }
    Ok(Outcome::of(worst))
}

fn log_mean_bounds(inst: &Instance) -> Result<Outcome> {
    let mut violations = 0.0;
    for (a, b) in log_mean_pairs(inst) {
        let m = log_mean(a, b)?;
        let (lo, hi) = (a.min(b), a.max(b));
        if !(lo < m && m < hi) {
            violations += 1.0;
        }
    }
    Ok(Outcome::of(violations))
}

// manifold

fn arc_endpoints(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let arc = ExponentialArc::new(&rho, &sigma)?;
    let r = arc
        .point(0.0)
        .distance(&rho)
        .max(arc.point(1.0).distance(&sigma))
        .max(arc.alpha(0.0).abs())
        .max(arc.alpha(1.0).abs());
    Ok(Outcome::of(r))
}

fn alpha_grid(inst: &Instance) -> Result<Vec<f64>> {
    let arc = ExponentialArc::new(&inst.density(0)?, &inst.density(1)?)?;
    Ok((0..=20).map(|k| arc.alpha(k as f64 / 20.0)).collect())
}

fn alpha_nonpositive(inst: &Instance) -> Result<Outcome> {
    let worst = alpha_grid(inst)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome::of(worst.max(0.0)))
}

fn alpha_convexity(inst: &Instance) -> Result<Outcome> {
    let a = alpha_grid(inst)?;
    let worst = a
        .windows(3)
        .map(|w| -(w[0] - 2.0 * w[1] + w[2]))
        .fold(0.0, f64::max);
    Ok(Outcome::of(worst))
}

fn relative_entropy_nonnegative(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let forward = relative_entropy(&rho, &sigma)?;
    let backward = relative_entropy(&sigma, &rho)?;
    let selfd = relative_entropy(&rho, &rho)?;
    if rho.distance(&sigma) >= 1e-8 && forward.min(backward) <= 1e-10 {
        return Ok(Outcome::of(f64::INFINITY));
    }
    Ok(Outcome::of((-forward).max(-backward).max(selfd.abs()).max(0.0)))
}

fn kubo_roundtrip(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let a = inst.hermitian(0);
    let there = kubo_inverse(&rho, &kubo(&rho, &a)?)?;
    let back = kubo(&rho, &kubo_inverse(&rho, &a)?)?;
    Ok(Outcome::of(there.distance(&a).max(back.distance(&a))))
}

fn kubo_vs_quadrature(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let a = inst.hermitian(0);
    Ok(Outcome::of(kubo(&rho, &a)?.distance(&kubo_quadrature(&rho, &a))))
}

fn kubo_inverse_centering(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let v = inst.traceless(0);
    let a = kubo_inverse(&rho, v.matrix())?;
    Ok(Outcome::of(rho.expectation(&a).abs()))
}

fn kubo_exponential_identity(inst: &Instance) -> Result<Outcome> {
    let h = inst.hermitian(0);
    let a = inst.hermitian(1);
    let step = 1e-4;
    let fd = (&matrix_exp(&(&h + &a.scale(step))) - &matrix_exp(&(&h - &a.scale(step)))).scale(0.5 / step);
    let spec = spectral_decompose(&h);
    let exp_spec = spec.with_eigenvalues(spec.eigenvalues().iter().map(|x| x.exp()).collect());
    Ok(Outcome::of(fd.distance(&kubo_with_spectrum(&exp_spec, &a)?)))
}

fn chart_roundtrip(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let back = chart_inverse(&rho, &chart(&rho, &sigma)?)?;
    Ok(Outcome::of(back.distance(&sigma)))
}

fn chart_centering(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let raw = (sigma.log() - rho.log()).shift(relative_entropy(&rho, &sigma)?);
    Ok(Outcome::of(rho.expectation(&raw).abs()))
}

fn chart_transition(inst: &Instance) -> Result<Outcome> {
    let (r1, sigma, r2) = (inst.density(0)?, inst.density(1)?, inst.density(2)?);
    let moved = transition_chart(&r1, &r2, &chart(&r1, &sigma)?)?;
    Ok(Outcome::of(moved.matrix().distance(chart(&r2, &sigma)?.matrix())))
}

fn chart_transition_roundtrip(inst: &Instance) -> Result<Outcome> {
    let (r1, sigma, r2) = (inst.density(0)?, inst.density(1)?, inst.density(2)?);
    let a1 = chart(&r1, &sigma)?;
    let back = transition_chart(&r2, &r1, &transition_chart(&r1, &r2, &a1)?)?;
    Ok(Outcome::of(back.matrix().distance(a1.matrix())))
}

fn central_arc_difference(arc: &ExponentialArc, t: f64, h: f64) -> HermitianMatrix {
    (arc.point(t + h).matrix() - arc.point(t - h).matrix()).scale(0.5 / h)
}

fn tangent_fd(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let arc = ExponentialArc::new(&rho, &sigma)?;
    let fd = central_arc_difference(&arc, 0.0, FIRST_DERIVATIVE_STEP);
    Ok(Outcome::of(fd.distance(tangent(&rho, &sigma)?.matrix())))
}

fn arc_velocity_fd(inst: &Instance) -> Result<Outcome> {
    let arc = ExponentialArc::new(&inst.density(0)?, &inst.density(1)?)?;
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 0.75] {
        let fd = central_arc_difference(&arc, t, FIRST_DERIVATIVE_STEP);
        worst = worst.max(fd.distance(arc.velocity(t).matrix()));
    }
    Ok(Outcome::of(worst))
}

fn arc_uniqueness(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma, tau) = (inst.density(0)?, inst.density(1)?, inst.density(2)?);
    let ys = tangent(&rho, &sigma)?;
    let yt = tangent(&rho, &tau)?;
    let separation = ys.matrix().distance(yt.matrix());
    let recovered = exp_map(&rho, &ys)?.distance(&sigma);
    let out = if separation > 1e-10 { recovered } else { f64::INFINITY };
    Ok(Outcome::of(out).note("min_tangent_separation", separation, Agg::Min))
}

fn divergence_expression(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let a = inst.hermitian(0);
    let sigma = chart_inverse(&rho, &center(&rho, &a)?)?;
    let lse = log_sum_exp(spectral_decompose(&(rho.log() + &a)).eigenvalues());
    let want = -rho.expectation(&a) + lse;
    Ok(Outcome::of((relative_entropy(&rho, &sigma)? - want).abs()))
}

// metric

fn bogoliubov_symmetry(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let (x, y) = (inst.hermitian(0), inst.hermitian(1));
    Ok(Outcome::of((bogoliubov(&rho, &x, &y)? - bogoliubov(&rho, &y, &x)?).abs()))
}

fn bogoliubov_bilinearity(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let (x1, x2, y) = (inst.hermitian(0), inst.hermitian(1), inst.hermitian(2));
    let (a, b) = (inst.uniform(0), inst.uniform(1));
    let combined = &x1.scale(a) + &x2.scale(b);
    let lhs = bogoliubov(&rho, &combined, &y)?;
    let rhs = a * bogoliubov(&rho, &x1, &y)? + b * bogoliubov(&rho, &x2, &y)?;
    let lhs2 = bogoliubov(&rho, &y, &combined)?;
    let rhs2 = a * bogoliubov(&rho, &y, &x1)? + b * bogoliubov(&rho, &y, &x2)?;
    Ok(Outcome::of((lhs - rhs).abs().max((lhs2 - rhs2).abs())))
}

fn bogoliubov_positivity(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let x = inst.hermitian(0);
    let q = bogoliubov(&rho, &x, &x)?;
    let zero = bogoliubov(&rho, &HermitianMatrix::zeros(inst.n), &HermitianMatrix::zeros(inst.n))?;
    let out = if q > 1e-12 { zero.abs() } else { f64::INFINITY };
    Ok(Outcome::of(out).note("min_norm_ratio", q, Agg::Min))
}

fn bogoliubov_vs_quadrature(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let (x, y) = (inst.hermitian(0), inst.hermitian(1));
    Ok(Outcome::of((bogoliubov(&rho, &x, &y)? - bogoliubov_quadrature(&rho, &x, &y)).abs()))
}

fn eguchi_triple(inst: &Instance) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix)> {
    Ok((inst.density(0)?, inst.density(1)?, inst.density(2)?))
}

fn eguchi_error(rho: &DensityMatrix, sigma: &DensityMatrix, tau: &DensityMatrix, h: f64) -> Result<f64> {
    let cfg = FdConfig::new(h, false)?;
    Ok((eguchi_fd(rho, sigma, tau, &cfg)? - inner_tangent(rho, sigma, tau)?).abs())
}

fn eguchi_match(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma, tau) = eguchi_triple(inst)?;
    Ok(Outcome::of(eguchi_error(&rho, &sigma, &tau, SECOND_DERIVATIVE_STEP)?))
}

/// `σ = τ`: the value must be positive and agree with `inner_tangent` relative
/// to its own size.
fn eguchi_diagonal(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let cfg = FdConfig::new(SECOND_DERIVATIVE_STEP, false)?;
    let fd = eguchi_fd(&rho, &sigma, &sigma, &cfg)?;
    let exact = inner_tangent(&rho, &sigma, &sigma)?;
    let out = if fd > 0.0 { (fd - exact).abs() / exact.max(1.0) } else { f64::INFINITY };
    Ok(Outcome::of(out))
}

fn eguchi_convergence(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma, tau) = eguchi_triple(inst)?;
    let coarse = eguchi_error(&rho, &sigma, &tau, 1e-2)?;
    let fine = eguchi_error(&rho, &sigma, &tau, 1e-3)?;
    if fine <= 1e-9 {
        return Ok(Outcome::of(0.0).note("skipped_samples", 1.0, Agg::Max));
    }
    let ratio = coarse / fine;
    Ok(Outcome::of((ratio / 100.0).log10().abs()).note("min_ratio", ratio, Agg::Min))
}

fn transport_duality(inst: &Instance) -> Result<Outcome> {
    let (r1, r2) = (inst.density(0)?, inst.density(1)?);
    let (v, w) = (inst.traceless(0), inst.traceless(1));
    Ok(Outcome::of(duality_residual(&r1, &r2, &v, &w)?))
}

fn e_transport_flatness(inst: &Instance) -> Result<Outcome> {
    let (r1, r2, r3) = (inst.density(0)?, inst.density(1)?, inst.density(2)?);
    let w = inst.traceless(0);
    let two_step = e_transport(&r2, &r3, &e_transport(&r1, &r2, &w)?)?;
    let direct = e_transport(&r1, &r3, &w)?;
    Ok(Outcome::of(two_step.matrix().distance(direct.matrix())))
}

fn e_transport_representative(inst: &Instance) -> Result<Outcome> {
    let (r1, r2) = (inst.density(0)?, inst.density(1)?);
    let a = inst.hermitian(0);
    let w = TangentVector::new(kubo(&r1, &a.shift(-r1.expectation(&a)))?)?;
    let want = kubo(&r2, &a.shift(-r2.expectation(&a)))?;
    Ok(Outcome::of(e_transport(&r1, &r2, &w)?.matrix().distance(&want)))
}

fn m_geodesic_check(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let mut worst = 0.0f64;
    for (t, s) in [(0.2, 0.3), (0.5, -0.25), (0.0, 1.0), (0.9, 0.05)] {
        worst = worst.max(m_geodesic_residual(&rho, &sigma, t, s)?);
    }
    Ok(Outcome::of(worst))
}

fn e_geodesic_check(inst: &Instance) -> Result<Outcome> {
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let mut worst = 0.0f64;
    let mut y_dev = 0.0f64;
    for t in [0.25, 0.5, 0.75] {
        for s in [-0.1, -0.01, 0.01, 0.1] {
            worst = worst.max(e_geodesic_residual(&rho, &sigma, t, s)?);
            let (measured, predicted) = y_field_transport_scale(&rho, &sigma, t, s)?;
            y_dev = y_dev.max((measured - predicted).abs());
        }
    }
    Ok(Outcome::of(worst).note("y_field_scale_deviation", y_dev, Agg::Max))
}

// legendre

fn centered_pair(inst: &Instance) -> Result<(DensityMatrix, crate::CenteredObservable)> {
    let rho = inst.density(0)?;
    let a = center(&rho, &inst.hermitian(0).scale(2.0))?;
    Ok((rho, a))
}

fn potential_divergence(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let phi = potential(&rho, &a)?;
    Ok(Outcome::of((phi.value - relative_entropy(&rho, &phi.contact)?).abs()))
}

fn legendre_gap_divergence(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let sigma = inst.density(1)?;
    let tau = potential(&rho, &a)?.contact;
    let gap = legendre_gap(&rho, &a, &sigma)?;
    Ok(Outcome::of((gap - relative_entropy(&sigma, &tau)?).abs()))
}

fn legendre_supremum(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let tau = potential(&rho, &a)?.contact;
    let at_contact = legendre_gap(&rho, &a, &tau)?;
    let mut rng = inst.rng(4000);
    let mut min_gap = f64::INFINITY;
    let mut misplaced = false;
    for _ in 0..SWEEP_SIZE {
        let sigma = random_density_with(&mut rng, inst.n, DEFAULT_REGULARIZATION)?;
        let gap = legendre_gap(&rho, &a, &sigma)?;
        min_gap = min_gap.min(gap);
        if gap < 1e-6 && sigma.distance(&tau) > 1.5e-3 {
            misplaced = true;
        }
    }
    let residual = if misplaced {
        f64::INFINITY
    } else {
        at_contact.abs().max(-min_gap).max(0.0)
    };
    Ok(Outcome::of(residual).note("min_sweep_gap", min_gap, Agg::Min))
}

fn potential_convexity(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let a1 = center(&rho, &inst.hermitian(0).scale(2.0))?;
    let a2 = center(&rho, &inst.hermitian(1).scale(2.0))?;
    let p1 = potential(&rho, &a1)?.value;
    let p2 = potential(&rho, &a2)?.value;
    let mut worst = 0.0f64;
    for k in 1..=9 {
        let lam = k as f64 / 10.0;
        let mix = center(&rho, &(&a1.matrix().scale(lam) + &a2.matrix().scale(1.0 - lam)))?;
        let excess = potential(&rho, &mix)?.value - (lam * p1 + (1.0 - lam) * p2);
        worst = worst.max(excess);
    }
    Ok(Outcome::of(worst))
}

fn tangent_plane_bound(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let b = center(&rho, &inst.hermitian(1).scale(2.0))?;
    let below = tangent_plane_value(&rho, &a, &b)? - potential(&rho, &b)?.value;
    let contact = (tangent_plane_value(&rho, &a, &a)? - potential(&rho, &a)?.value).abs();
    Ok(Outcome::of(below.max(contact).max(0.0)))
}

fn extended_potential(rho: &DensityMatrix, x: &HermitianMatrix) -> Result<f64> {
    // Φ_ρ(A + c𝟙) = Φ_ρ(A) + c.
    Ok(potential(rho, &center(rho, x)?)?.value + rho.expectation(x))
}

fn potential_derivative_fd(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let b = inst.hermitian(1);
    let fd = frechet_fd(|x| extended_potential(&rho, x), a.matrix(), &b, &fd_first(true))?;
    Ok(Outcome::of((fd - potential_derivative(&rho, &a, &b)?).abs()))
}

fn tau_derivative_fd(inst: &Instance) -> Result<Outcome> {
    let (rho, a) = centered_pair(inst)?;
    let b = inst.hermitian(1);
    let fd: HermitianMatrix = frechet_fd(
        |x| Ok(chart_inverse(&rho, &center(&rho, x)?)?.matrix().clone()),
        a.matrix(),
        &b,
        &fd_first(true),
    )?;
    Ok(Outcome::of(fd.distance(tau_derivative(&rho, &a, &b)?.matrix())))
}

fn mixed_identity(inst: &Instance) -> Result<Outcome> {
    let (base, a) = centered_pair(inst)?;
    let (rho, sigma) = (inst.density(1)?, inst.density(2)?);
    let tau = potential(&base, &a)?.contact;
    let c = chart(&tau, &rho)?.into_matrix();
    let b = c.shift(-c.trace());
    let lhs = inner_tangent(&tau, &rho, &sigma)?;
    let rhs = chart(&tau, &sigma)?
        .matrix()
        .trace_product(tau_derivative(&base, &a, &b)?.matrix());
    Ok(Outcome::of((lhs - rhs).abs()))
}

// coords

fn delta_coords(basis: &TracelessBasis, p: &DensityMatrix, base: &DensityMatrix) -> Result<Vec<f64>> {
    let xp = affine_coords(p, basis)?;
    let xb = affine_coords(base, basis)?;
    Ok(xp.iter().zip(xb).map(|(a, b)| a - b).collect())
}

fn gellmann_orthonormality(inst: &Instance) -> Result<Outcome> {
    let b = gellmann_basis(inst.n)?;
    let k = b.len();
    let dev = (b.gram() - DMatrix::<f64>::identity(k, k)).amax();
    let trace = b.elements().iter().map(|f| f.trace().abs()).fold(0.0, f64::max);
    let count = if k == inst.n * inst.n - 1 { 0.0 } else { f64::INFINITY };
    Ok(Outcome::of(dev.max(trace).max(count)))
}

fn metric_tensor_maximally_mixed(inst: &Instance) -> Result<Outcome> {
    let n = inst.n;
    let mixed = DensityMatrix::from_hermitian(HermitianMatrix::identity(n).scale(1.0 / n as f64), 1e-12)?;
    let g = metric_tensor(&mixed, &gellmann_basis(n)?)?;
    let k = g.size();
    Ok(Outcome::of((&g.entries - DMatrix::<f64>::identity(k, k).scale(1.0 / n as f64)).amax()))
}

fn metric_tensor_positive(inst: &Instance) -> Result<Outcome> {
    let rho = inst.density(0)?;
    let g = metric_tensor(&rho, &gellmann_basis(inst.n)?)?;
    let asym = (&g.entries - g.entries.transpose()).amax();
    let min = g.min_eigenvalue();
    let r = if min > 0.0 { asym } else { f64::INFINITY };
    Ok(Outcome::of(r).note("min_eigenvalue", min, Agg::Min))
}

fn quadratic_form_in(inst: &Instance, basis: &TracelessBasis) -> Result<f64> {
    let (rho, sigma, tau) = (inst.density(0)?, inst.density(1)?, inst.density(2)?);
    let g = metric_tensor(&rho, basis)?;
    let q = g.quadratic_form(&delta_coords(basis, &sigma, &rho)?, &delta_coords(basis, &tau, &rho)?);
    Ok((q - inner_tangent(&rho, &sigma, &tau)?).abs())
}

fn quadratic_form(inst: &Instance) -> Result<Outcome> {
    Ok(Outcome::of(quadratic_form_in(inst, &gellmann_basis(inst.n)?)?))
}

fn rotated_quadratic_form(inst: &Instance) -> Result<Outcome> {
    let seed = inst.rng(5000).random::<u64>();
    let basis = gellmann_basis(inst.n)?.randomly_rotated(seed)?;
    Ok(Outcome::of(quadratic_form_in(inst, &basis)?))
}

fn dual_pairing(inst: &Instance) -> Result<Outcome> {
    let basis = gellmann_basis(inst.n)?;
    let (rho, a) = centered_pair(inst)?;
    let b = center(&rho, &inst.hermitian(1))?;
    let components = basis.components(b.matrix())?;
    let tau = potential(&rho, &a)?.contact;
    let d = tau_derivative(&rho, &a, b.matrix())?;
    let g_b = metric_tensor(&tau, &basis)?.apply(&components);
    let mut worst = 0.0f64;
    for (i, want) in g_b.iter().enumerate() {
        let e = basis_field(&tau, i, &basis)?;
        worst = worst.max((pairing(&tau, &e, &d)? - want).abs());
    }
    Ok(Outcome::of(worst))
}

fn chart_expansion(inst: &Instance) -> Result<Outcome> {
    let basis = gellmann_basis(inst.n)?;
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let dx = delta_coords(&basis, &sigma, &rho)?;
    let mut acc = HermitianMatrix::zeros(inst.n);
    for (f, d) in basis.elements().iter().zip(&dx) {
        acc = &acc + &f.shift(-rho.expectation(f)).scale(*d);
    }
    Ok(Outcome::of(acc.distance(chart(&rho, &sigma)?.matrix())))
}

fn tangent_expansion(inst: &Instance) -> Result<Outcome> {
    let basis = gellmann_basis(inst.n)?;
    let (rho, sigma) = (inst.density(0)?, inst.density(1)?);
    let dx = delta_coords(&basis, &sigma, &rho)?;
    let mut acc = HermitianMatrix::zeros(inst.n);
    for (i, d) in dx.iter().enumerate() {
        acc = &acc + &basis_field(&rho, i, &basis)?.matrix().scale(*d);
    }
    Ok(Outcome::of(acc.distance(tangent(&rho, &sigma)?.matrix())))
}

fn coords_consistency(inst: &Instance) -> Result<Outcome> {
    let basis = gellmann_basis(inst.n)?;
    let (rho, a) = centered_pair(inst)?;
    let tau = chart_inverse(&rho, &a)?;
    let dx = delta_coords(&basis, &tau, &rho)?;
    let comps = basis.components(a.matrix())?;
    let worst = dx.iter().zip(comps).map(|(x, c)| (x - c).abs()).fold(0.0, f64::max);
    Ok(Outcome::of(worst))
}

fn affine_reconstruction(inst: &Instance) -> Result<Outcome> {
    let basis = gellmann_basis(inst.n)?;
    let sigma = inst.density(0)?;
    let x = affine_coords(&sigma, &basis)?;
    let rebuilt = basis.combine(&x)?.shift(sigma.log().trace() / inst.n as f64);
    Ok(Outcome::of(rebuilt.distance(sigma.log())))
}

macro_rules! checks {
    ($($name:literal, $tol:expr, $f:ident;)*) => {
        const CHECKS: &[Check] = &[$(Check { name: $name, tolerance: $tol, run: $f },)*];
        /// Every check `run_suite` reports, in report order.
        pub const CHECK_NAMES: &[&str] = &[$($name,)*];
    };
}

// Sorted by name.
checks! {
    "affine_reconstruction", 1e-11, affine_reconstruction;
    "alpha_convexity", 1e-9, alpha_convexity;
    "alpha_nonpositive", 1e-12, alpha_nonpositive;
    "arc_endpoints", 1e-11, arc_endpoints;
    "arc_uniqueness", 1e-9, arc_uniqueness;
    "arc_velocity_fd", 1e-8, arc_velocity_fd;
    "bogoliubov_bilinearity", 1e-11, bogoliubov_bilinearity;
    "bogoliubov_positivity", 1e-12, bogoliubov_positivity;
    "bogoliubov_quadrature", 1e-10, bogoliubov_vs_quadrature;
    "bogoliubov_symmetry", 1e-12, bogoliubov_symmetry;
    "chart_centering", 1e-12, chart_centering;
    "chart_expansion", 1e-10, chart_expansion;
    "chart_roundtrip", 1e-10, chart_roundtrip;
    "chart_transition", 1e-10, chart_transition;
    "chart_transition_roundtrip", 1e-10, chart_transition_roundtrip;
    "coords_consistency", 1e-10, coords_consistency;
    "divergence_expression", 1e-11, divergence_expression;
    "dual_pairing", 1e-10, dual_pairing;
    "e_geodesic_residual", 1e-10, e_geodesic_check;
    "e_transport_flatness", 1e-11, e_transport_flatness;
    "e_transport_representative", 1e-11, e_transport_representative;
    "eguchi_convergence", std::f64::consts::LOG10_2, eguchi_convergence;
    "eguchi_fd", 1e-5, eguchi_match;
    "eguchi_fd_diagonal", 1e-5, eguchi_diagonal;
    "exp_log_roundtrip", 1e-11, exp_log_roundtrip;
    "gellmann_orthonormality", 1e-12, gellmann_orthonormality;
    "kubo_exponential_identity", 5e-7, kubo_exponential_identity;
    "kubo_inverse_centering", 1e-12, kubo_inverse_centering;
    "kubo_quadrature", 1e-10, kubo_vs_quadrature;
    "kubo_roundtrip", 1e-11, kubo_roundtrip;
    "legendre_gap_divergence", 1e-10, legendre_gap_divergence;
    "legendre_supremum", 1e-11, legendre_supremum;
    "log_mean_bounds", 0.0, log_mean_bounds;
    "log_mean_quadrature", 1e-12, log_mean_vs_quadrature;
    "m_geodesic_residual", 0.0, m_geodesic_check;
    "metric_tensor_maximally_mixed", 1e-12, metric_tensor_maximally_mixed;
    "metric_tensor_positive", 1e-12, metric_tensor_positive;
    "mixed_identity", 1e-10, mixed_identity;
    "potential_convexity", 1e-11, potential_convexity;
    "potential_derivative_fd", 1e-8, potential_derivative_fd;
    "potential_divergence", 1e-11, potential_divergence;
    "quadratic_form", 1e-10, quadratic_form;
    "relative_entropy_nonnegative", 1e-12, relative_entropy_nonnegative;
    "rotated_quadratic_form", 1e-10, rotated_quadratic_form;
    "spectral_reconstruction", 1e-12, spectral_reconstruction;
    "tangent_expansion", 1e-10, tangent_expansion;
    "tangent_fd", 1e-8, tangent_fd;
    "tangent_plane_bound", 1e-11, tangent_plane_bound;
    "tau_derivative_fd", 1e-8, tau_derivative_fd;
    "transport_duality", 1e-11, transport_duality;
}

fn fmt_value(v: f64) -> String {
    format!("{v:.6e}")
}

fn run_one(check: &Check, n: usize, samples: usize, seed: u64) -> CheckReport {
    let mut worst = 0.0f64;
    let mut worst_sample = 0usize;
    let mut notes: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut error: Option<String> = None;
    for sample in 0..samples {
        let inst = Instance {
            n,
            seed,
            sample: sample as u64,
        };
        let outcome = (check.run)(&inst).unwrap_or_else(|e| {
            error.get_or_insert_with(|| e.to_string());
            Outcome::of(f64::INFINITY)
        });
        let r = if outcome.residual.is_nan() { f64::INFINITY } else { outcome.residual };
        if r > worst {
            worst = r;
            worst_sample = sample;
        }
        for (key, value, agg) in outcome.notes {
            let slot = notes.entry(key).or_insert(value);
            *slot = match agg {
                Agg::Max => slot.max(value),
                Agg::Min => slot.min(value),
            };
        }
    }
    let mut report = CheckReport::new(check.name, worst, check.tolerance)
        .with("n", n)
        .with("samples", samples)
        .with("worst_sample", worst_sample);
    for (key, value) in notes {
        report = report.with(key, fmt_value(value));
    }
    if let Some(e) = error {
        report = report.with("error", e);
    }
    report
}

/// Runs every check on `samples` seeded instances per dimension.
///
/// Deterministic for fixed arguments. Failures are reported, never raised.
pub fn run_suite(n_list: &[usize], samples: usize, seed: u64) -> Vec<CheckReport> {
    if samples == 0 {
        return Vec::new();
    }
    let mut dims: Vec<usize> = n_list.to_vec();
    dims.sort_unstable();
    dims.dedup();
    let mut reports = Vec::with_capacity(CHECKS.len() * dims.len());
    for check in CHECKS {
        for &n in &dims {
            reports.push(run_one(check, n, samples, seed));
        }
    }
    reports
}
