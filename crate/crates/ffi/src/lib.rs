//! C ABI over `qig-core`.
//!
//! States are opaque [`QigDensity`] handles owned by the caller and released
//! with [`qig_density_free`]. Hermitian matrices cross the boundary as
//! row-major buffers of `2·n·n` doubles, real and imaginary parts interleaved.
//! Every fallible function returns a [`QigStatus`]; on failure the message is
//! available from [`qig_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use nalgebra::DMatrix;
use qig_core::coords::{affine_coords, gellmann_basis, metric_tensor};
use qig_core::legendre::potential;
use qig_core::manifold::{
    chart, chart_inverse, kubo, kubo_inverse, random_density, relative_entropy, tangent, DEFAULT_REGULARIZATION,
};
use qig_core::metric::{bogoliubov, inner_tangent, transport, TransportKind};
use qig_core::spectra::HERMITICITY_TOL;
use qig_core::{CenteredObservable, DensityMatrix, ExponentialArc, HermitianMatrix, QigError, TangentVector, C64};

/// Result codes. Values 2 to 4 follow the exit codes of the `qig` tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QigStatus {
    Ok = 0,
    NullPointer = 1,
    /// Wrong shape, size or Hermiticity.
    InvalidMatrix = 2,
    /// Not a unit-trace, strictly positive state.
    InvalidState = 3,
    /// Inputs violate an operation's precondition.
    ContractViolation = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QigTransportKind {
    Mixture = 0,
    Exponential = 1,
}

/// Opaque handle to a validated density matrix.
pub struct QigDensity {
    inner: DensityMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QigStatus, String);

impl From<QigError> for Failure {
    fn from(e: QigError) -> Self {
        let status = match e {
            QigError::NotHermitian { .. } | QigError::NotSquare { .. } | QigError::InvalidDimension(_) => {
                QigStatus::InvalidMatrix
            }
            QigError::TraceNotOne(_) | QigError::Degenerate { .. } | QigError::NotPositiveDefinite { .. } => {
                QigStatus::InvalidState
            }
            _ => QigStatus::ContractViolation,
        };
        Failure(status, e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn guard(f: impl FnOnce() -> Res<()>) -> QigStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QigStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QigStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QigStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(p: *const QigDensity, what: &str) -> Res<&'a DensityMatrix> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn input(data: *const f64, len: usize, n: usize, what: &str) -> Res<HermitianMatrix> {
    matrix_input(data, len, n, what, HERMITICITY_TOL)
}

unsafe fn matrix_input(data: *const f64, len: usize, n: usize, what: &str, tol: f64) -> Res<HermitianMatrix> {
    if data.is_null() {
        return Err(null(what));
    }
    if len != 2 * n * n {
        return Err(Failure(
            QigStatus::InvalidMatrix,
            format!("{what}: expected {} values, got {len}", 2 * n * n),
        ));
    }
    let values = slice::from_raw_parts(data, len);
    let m = DMatrix::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        C64::new(values[k], values[k + 1])
    });
    Ok(HermitianMatrix::with_tolerance(m, tol)?)
}

unsafe fn output(h: &HermitianMatrix, out: *mut f64, len: usize) -> Res<()> {
    let n = h.dim();
    write_values(out, len, 2 * n * n, |k| {
        let c = h.get(k / 2 / n, (k / 2) % n);
        if k % 2 == 0 {
            c.re
        } else {
            c.im
        }
    })
}

unsafe fn write_values(out: *mut f64, len: usize, needed: usize, value: impl Fn(usize) -> f64) -> Res<()> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < needed {
        return Err(Failure(
            QigStatus::BufferTooSmall,
            format!("output buffer holds {len} values, {needed} needed"),
        ));
    }
    let dst = slice::from_raw_parts_mut(out, needed);
    for (k, slot) in dst.iter_mut().enumerate() {
        *slot = value(k);
    }
    Ok(())
}

unsafe fn scalar(out: *mut f64, value: f64) -> Res<()> {
    if out.is_null() {
        return Err(null("output"));
    }
    *out = value;
    Ok(())
}

unsafe fn give(out: *mut *mut QigDensity, inner: DensityMatrix) -> Res<()> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(QigDensity { inner }));
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn qig_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Validates an `n × n` state given as `2·n·n` interleaved doubles.
/// `tol` bounds the asymmetry and the trace error; pass 0 for the default.
///
/// # Safety
/// `entries` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qig_density_new(
    n: usize,
    entries: *const f64,
    len: usize,
    tol: f64,
    out: *mut *mut QigDensity,
) -> QigStatus {
    guard(|| {
        if !(2..=64).contains(&n) {
            return Err(QigError::InvalidDimension(n).into());
        }
        let tol = if tol > 0.0 { tol } else { HERMITICITY_TOL };
        let h = matrix_input(entries, len, n, "entries", tol)?;
        give(out, DensityMatrix::from_hermitian(h, tol)?)
    })
}

/// Seeded random state with the default regularization.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qig_density_random(n: usize, seed: u64, out: *mut *mut QigDensity) -> QigStatus {
    guard(|| give(out, random_density(n, seed, DEFAULT_REGULARIZATION)?))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `rho` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qig_density_free(rho: *mut QigDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Dimension of the state, 0 for null.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qig_density_dim(rho: *const QigDensity) -> usize {
    rho.as_ref().map_or(0, |h| h.inner.dim())
}

/// Copies the matrix entries into `out` (`2·n·n` doubles).
///
/// # Safety
/// `rho` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qig_density_copy_entries(rho: *const QigDensity, out: *mut f64, len: usize) -> QigStatus {
    guard(|| output(handle(rho, "rho")?.matrix(), out, len))
}

/// `D(ρ‖σ)`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qig_relative_entropy(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    out: *mut f64,
) -> QigStatus {
    guard(|| scalar(out, relative_entropy(handle(rho, "rho")?, handle(sigma, "sigma")?)?))
}

/// Point `σ_t` of the exponential arc from ρ to σ.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qig_arc_point(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    t: f64,
    out: *mut *mut QigDensity,
) -> QigStatus {
    guard(|| {
        let arc = ExponentialArc::new(handle(rho, "rho")?, handle(sigma, "sigma")?)?;
        give(out, arc.point(t))
    })
}

/// Normalization `α(t)` of the exponential arc from ρ to σ.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qig_arc_alpha(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    t: f64,
    out: *mut f64,
) -> QigStatus {
    guard(|| {
        let arc = ExponentialArc::new(handle(rho, "rho")?, handle(sigma, "sigma")?)?;
        scalar(out, arc.alpha(t))
    })
}

/// Chart value `c_ρ(σ)` into `out`.
///
/// # Safety
/// Handles must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qig_chart(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    out: *mut f64,
    len: usize,
) -> QigStatus {
    guard(|| output(chart(handle(rho, "rho")?, handle(sigma, "sigma")?)?.matrix(), out, len))
}

/// State with chart value `a` at ρ. `a` must satisfy `Tr ρA = 0`.
///
/// # Safety
/// `rho` must be live, `a` must hold `a_len` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn qig_chart_inverse(
    rho: *const QigDensity,
    a: *const f64,
    a_len: usize,
    out: *mut *mut QigDensity,
) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        let a = CenteredObservable::new(rho, input(a, a_len, rho.dim(), "a")?)?;
        give(out, chart_inverse(rho, &a)?)
    })
}

/// Kubo transform of `a` at ρ.
///
/// # Safety
/// `rho` must be live; `a` and `out` must hold `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn qig_kubo(rho: *const QigDensity, a: *const f64, out: *mut f64, len: usize) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        output(&kubo(rho, &input(a, len, rho.dim(), "a")?)?, out, len)
    })
}

/// Inverse Kubo transform of `v` at ρ.
///
/// # Safety
/// `rho` must be live; `v` and `out` must hold `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn qig_kubo_inverse(
    rho: *const QigDensity,
    v: *const f64,
    out: *mut f64,
    len: usize,
) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        output(&kubo_inverse(rho, &input(v, len, rho.dim(), "v")?)?, out, len)
    })
}

/// Tangent vector `Y_ρ(σ)` into `out`.
///
/// # Safety
/// Handles must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qig_tangent(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    out: *mut f64,
    len: usize,
) -> QigStatus {
    guard(|| output(tangent(handle(rho, "rho")?, handle(sigma, "sigma")?)?.matrix(), out, len))
}

/// Parallel transport of the traceless `v` from ρ1 to ρ2.
///
/// # Safety
/// Handles must be live; `v` and `out` must hold `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn qig_transport(
    kind: QigTransportKind,
    rho1: *const QigDensity,
    rho2: *const QigDensity,
    v: *const f64,
    out: *mut f64,
    len: usize,
) -> QigStatus {
    guard(|| {
        let (r1, r2) = (handle(rho1, "rho1")?, handle(rho2, "rho2")?);
        let v = TangentVector::new(input(v, len, r1.dim(), "v")?)?;
        let kind = match kind {
            QigTransportKind::Mixture => TransportKind::Mixture,
            QigTransportKind::Exponential => TransportKind::Exponential,
        };
        output(transport(kind, r1, r2, &v)?.matrix(), out, len)
    })
}

/// Bogoliubov inner product of `x` and `y` at ρ.
///
/// # Safety
/// `rho` must be live; `x` and `y` must hold `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn qig_bogoliubov(
    rho: *const QigDensity,
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        let (x, y) = (input(x, len, rho.dim(), "x")?, input(y, len, rho.dim(), "y")?);
        scalar(out, bogoliubov(rho, &x, &y)?)
    })
}

/// `(Y_ρ(σ), Y_ρ(τ))_ρ`.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qig_inner_tangent(
    rho: *const QigDensity,
    sigma: *const QigDensity,
    tau: *const QigDensity,
    out: *mut f64,
) -> QigStatus {
    guard(|| {
        let value = inner_tangent(handle(rho, "rho")?, handle(sigma, "sigma")?, handle(tau, "tau")?)?;
        scalar(out, value)
    })
}

/// `Φ_ρ(A)` and, if `contact` is not null, the contact state `τ_A`.
///
/// # Safety
/// `rho` must be live, `a` must hold `a_len` doubles, `value` must be
/// writable and `contact` null or writable.
#[no_mangle]
pub unsafe extern "C" fn qig_potential(
    rho: *const QigDensity,
    a: *const f64,
    a_len: usize,
    value: *mut f64,
    contact: *mut *mut QigDensity,
) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        let a = CenteredObservable::new(rho, input(a, a_len, rho.dim(), "a")?)?;
        let phi = potential(rho, &a)?;
        scalar(value, phi.value)?;
        if !contact.is_null() {
            give(contact, phi.contact)?;
        }
        Ok(())
    })
}

/// Metric tensor in the Gell-Mann basis, row-major, `(n²−1)²` doubles.
///
/// # Safety
/// `rho` must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qig_metric_tensor(rho: *const QigDensity, out: *mut f64, len: usize) -> QigStatus {
    guard(|| {
        let rho = handle(rho, "rho")?;
        let g = metric_tensor(rho, &gellmann_basis(rho.dim())?)?;
        let k = g.size();
        write_values(out, len, k * k, |i| g.entries[(i / k, i % k)])
    })
}

/// Affine coordinates `Tr(log σ f_i)` in the Gell-Mann basis, `n²−1` doubles.
///
/// # Safety
/// `sigma` must be live and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn qig_affine_coords(sigma: *const QigDensity, out: *mut f64, len: usize) -> QigStatus {
    guard(|| {
        let sigma = handle(sigma, "sigma")?;
        let x = affine_coords(sigma, &gellmann_basis(sigma.dim())?)?;
        write_values(out, len, x.len(), |i| x[i])
    })
}
