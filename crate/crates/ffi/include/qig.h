#ifndef QIG_H
#define QIG_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 2 to 4 follow the exit codes of the `qig` tool.
 */
typedef enum QigStatus {
  QIG_STATUS_OK = 0,
  QIG_STATUS_NULL_POINTER = 1,
  /**
   * Wrong shape, size or Hermiticity.
   */
  QIG_STATUS_INVALID_MATRIX = 2,
  /**
   * Not a unit-trace, strictly positive state.
   */
  QIG_STATUS_INVALID_STATE = 3,
  /**
   * Inputs violate an operation's precondition.
   */
  QIG_STATUS_CONTRACT_VIOLATION = 4,
  QIG_STATUS_BUFFER_TOO_SMALL = 5,
  QIG_STATUS_PANIC = 6,
} QigStatus;

typedef enum QigTransportKind {
  QIG_TRANSPORT_KIND_MIXTURE = 0,
  QIG_TRANSPORT_KIND_EXPONENTIAL = 1,
} QigTransportKind;

/**
 * Opaque handle to a validated density matrix.
 */
typedef struct QigDensity QigDensity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *qig_last_error_message(void);

/**
 * Validates an `n × n` state given as `2·n·n` interleaved doubles.
 * `tol` bounds the asymmetry and the trace error; pass 0 for the default.
 *
 * # Safety
 * `entries` must point to `len` readable doubles and `out` must be writable.
 */
enum QigStatus qig_density_new(size_t n,
                               const double *entries,
                               size_t len,
                               double tol,
                               struct QigDensity **out);

/**
 * Seeded random state with the default regularization.
 *
 * # Safety
 * `out` must be writable.
 */
enum QigStatus qig_density_random(size_t n, uint64_t seed, struct QigDensity **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `rho` must come from this library and must not be used afterwards.
 */
void qig_density_free(struct QigDensity *rho);

/**
 * Dimension of the state, 0 for null.
 *
 * # Safety
 * `rho` must be null or a live handle.
 */
size_t qig_density_dim(const struct QigDensity *rho);

/**
 * Copies the matrix entries into `out` (`2·n·n` doubles).
 *
 * # Safety
 * `rho` must be a live handle and `out` must hold `len` doubles.
 */
enum QigStatus qig_density_copy_entries(const struct QigDensity *rho, double *out, size_t len);

/**
 * `D(ρ‖σ)`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum QigStatus qig_relative_entropy(const struct QigDensity *rho,
                                    const struct QigDensity *sigma,
                                    double *out);

/**
 * Point `σ_t` of the exponential arc from ρ to σ.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum QigStatus qig_arc_point(const struct QigDensity *rho,
                             const struct QigDensity *sigma,
                             double t,
                             struct QigDensity **out);

/**
 * Normalization `α(t)` of the exponential arc from ρ to σ.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum QigStatus qig_arc_alpha(const struct QigDensity *rho,
                             const struct QigDensity *sigma,
                             double t,
                             double *out);

/**
 * Chart value `c_ρ(σ)` into `out`.
 *
 * # Safety
 * Handles must be live and `out` must hold `len` doubles.
 */
enum QigStatus qig_chart(const struct QigDensity *rho,
                         const struct QigDensity *sigma,
                         double *out,
                         size_t len);

/**
 * State with chart value `a` at ρ. `a` must satisfy `Tr ρA = 0`.
 *
 * # Safety
 * `rho` must be live, `a` must hold `a_len` doubles and `out` be writable.
 */
enum QigStatus qig_chart_inverse(const struct QigDensity *rho,
                                 const double *a,
                                 size_t a_len,
                                 struct QigDensity **out);

/**
 * Kubo transform of `a` at ρ.
 *
 * # Safety
 * `rho` must be live; `a` and `out` must hold `len` doubles each.
 */
enum QigStatus qig_kubo(const struct QigDensity *rho, const double *a, double *out, size_t len);

/**
 * Inverse Kubo transform of `v` at ρ.
 *
 * # Safety
 * `rho` must be live; `v` and `out` must hold `len` doubles each.
 */
enum QigStatus qig_kubo_inverse(const struct QigDensity *rho,
                                const double *v,
                                double *out,
                                size_t len);

/**
 * Tangent vector `Y_ρ(σ)` into `out`.
 *
 * # Safety
 * Handles must be live and `out` must hold `len` doubles.
 */
enum QigStatus qig_tangent(const struct QigDensity *rho,
                           const struct QigDensity *sigma,
                           double *out,
                           size_t len);

/**
 * Parallel transport of the traceless `v` from ρ1 to ρ2.
 *
 * # Safety
 * Handles must be live; `v` and `out` must hold `len` doubles each.
 */
enum QigStatus qig_transport(enum QigTransportKind kind,
                             const struct QigDensity *rho1,
                             const struct QigDensity *rho2,
                             const double *v,
                             double *out,
                             size_t len);

/**
 * Bogoliubov inner product of `x` and `y` at ρ.
 *
 * # Safety
 * `rho` must be live; `x` and `y` must hold `len` doubles each.
 */
enum QigStatus qig_bogoliubov(const struct QigDensity *rho,
                              const double *x,
                              const double *y,
                              size_t len,
                              double *out);

/**
 * `(Y_ρ(σ), Y_ρ(τ))_ρ`.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum QigStatus qig_inner_tangent(const struct QigDensity *rho,
                                 const struct QigDensity *sigma,
                                 const struct QigDensity *tau,
                                 double *out);

/**
 * `Φ_ρ(A)` and, if `contact` is not null, the contact state `τ_A`.
 *
 * # Safety
 * `rho` must be live, `a` must hold `a_len` doubles, `value` must be
 * writable and `contact` null or writable.
 */
enum QigStatus qig_potential(const struct QigDensity *rho,
                             const double *a,
                             size_t a_len,
                             double *value,
                             struct QigDensity **contact);

/**
 * Metric tensor in the Gell-Mann basis, row-major, `(n²−1)²` doubles.
 *
 * # Safety
 * `rho` must be live and `out` must hold `len` doubles.
 */
enum QigStatus qig_metric_tensor(const struct QigDensity *rho, double *out, size_t len);

/**
 * Affine coordinates `Tr(log σ f_i)` in the Gell-Mann basis, `n²−1` doubles.
 *
 * # Safety
 * `sigma` must be live and `out` must hold `len` doubles.
 */
enum QigStatus qig_affine_coords(const struct QigDensity *sigma, double *out, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QIG_H */
