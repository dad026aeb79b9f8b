#ifndef TOROID_H
#define TOROID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TOROID_PARITY_EVEN 0

#define TOROID_PARITY_ODD 1

typedef enum ToroidStatus {
  TOROID_STATUS_OK = 0,
  TOROID_STATUS_NULL_POINTER = 1,
  TOROID_STATUS_INVALID_ARGUMENT = 2,
  TOROID_STATUS_INVALID_ALPHA = 3,
  TOROID_STATUS_INVALID_TRUNCATION = 4,
  TOROID_STATUS_DOMAIN = 5,
  TOROID_STATUS_NON_FINITE = 6,
  TOROID_STATUS_NON_REAL_SPECTRUM = 7,
  TOROID_STATUS_SOLVER_FAILURE = 8,
  TOROID_STATUS_ZERO_VECTOR = 9,
  TOROID_STATUS_OUT_OF_RANGE = 10,
  TOROID_STATUS_PANIC = 11,
} ToroidStatus;

// Opaque bound-state table.
typedef struct ToroidBoundTable ToroidBoundTable;

// Opaque solved sector.
typedef struct ToroidSpectrum ToroidSpectrum;

// Curvatures at a surface point, in units of the input lengths.
typedef struct ToroidCurvature {
  double k1;
  double k2;
  double mean;
  double gaussian;
  double potential;
} ToroidCurvature;

// Real-valued callback `f(rho, user_data)` used to describe a Monge profile.
typedef double (*ToroidProfileFn)(double rho, void *user_data);

// Summary of one eigenstate; coefficients are read separately.
typedef struct ToroidStateInfo {
  double beta;
  double norm_constant;
  uint32_t m;
  uint32_t parity;
  size_t n_index;
  uint32_t degeneracy;
  size_t node_count;
  size_t coeff_count;
} ToroidStateInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code; unknown codes get a generic
// message. Never null.
const char *toroid_status_message(int32_t status);

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `cap`). Returns the full message length, 0 if none.
size_t toroid_last_error(char *buf, size_t cap);

// Closed-form curvatures of a torus with radii `minor < major` at angle `theta`.
enum ToroidStatus toroid_torus_curvatures(double minor,
                                          double major,
                                          double theta,
                                          struct ToroidCurvature *out);

// Curvatures of the surface of revolution with profile derivatives
// `shape_d1 = S'(ρ)` and `shape_d2 = S''(ρ)` at radius `rho`.
enum ToroidStatus toroid_monge_curvatures(ToroidProfileFn shape_d1,
                                          ToroidProfileFn shape_d2,
                                          void *user_data,
                                          double rho,
                                          struct ToroidCurvature *out);

// `W = 1 + 2qH + q²K`; returns NaN for a null bundle.
double toroid_norm_weight(double q, const struct ToroidCurvature *bundle);

// Largest `m` with `2mα < 1`.
enum ToroidStatus toroid_cutoff_m(double alpha, uint32_t *out);

// Solves one sector at truncation `n_basis`. On success `*out` owns a new
// handle.
enum ToroidStatus toroid_spectrum_solve(double alpha,
                                        uint32_t m,
                                        uint32_t parity,
                                        bool include_vc,
                                        size_t n_basis,
                                        struct ToroidSpectrum **out);

// Doubles the truncation from `n_start` until the lowest eigenvalues settle
// to `tol`.
enum ToroidStatus toroid_spectrum_converge(double alpha,
                                           uint32_t m,
                                           uint32_t parity,
                                           bool include_vc,
                                           double tol,
                                           size_t n_start,
                                           struct ToroidSpectrum **out);

void toroid_spectrum_free(struct ToroidSpectrum *handle);

// Number of states; 0 for a null handle.
size_t toroid_spectrum_len(const struct ToroidSpectrum *handle);

size_t toroid_spectrum_truncation(const struct ToroidSpectrum *handle);

bool toroid_spectrum_converged(const struct ToroidSpectrum *handle);

enum ToroidStatus toroid_spectrum_state(const struct ToroidSpectrum *handle,
                                        size_t index,
                                        struct ToroidStateInfo *out);

// Copies up to `cap` normalized coefficients of state `index` into `buf`
// and stores the total count in `*written` (may be null).
enum ToroidStatus toroid_spectrum_coeffs(const struct ToroidSpectrum *handle,
                                         size_t index,
                                         double *buf,
                                         size_t cap,
                                         size_t *written);

// `ψ(θ)` of state `index`.
enum ToroidStatus toroid_spectrum_eval(const struct ToroidSpectrum *handle,
                                       size_t index,
                                       double theta,
                                       double *out);

// All `β < 0` states for `m = 0..=m_max`.
enum ToroidStatus toroid_bound_state_scan(double alpha,
                                          uint32_t m_max,
                                          struct ToroidBoundTable **out);

void toroid_bound_table_free(struct ToroidBoundTable *handle);

size_t toroid_bound_table_len(const struct ToroidBoundTable *handle);

// Bound-state count weighting `m > 0` entries by two.
size_t toroid_bound_table_degenerate_count(const struct ToroidBoundTable *handle);

enum ToroidStatus toroid_bound_table_entry(const struct ToroidBoundTable *handle,
                                           size_t index,
                                           struct ToroidStateInfo *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOROID_H */
