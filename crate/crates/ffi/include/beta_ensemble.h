#ifndef BETA_ENSEMBLE_H
#define BETA_ENSEMBLE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BE_NORMALIZATION_THEOREM 0

#define BE_NORMALIZATION_SECTION4 1

// Result of a call.
typedef enum BeStatus {
  BE_STATUS_OK = 0,
  BE_STATUS_NULL_POINTER = 1,
  BE_STATUS_INVALID_ARGUMENT = 2,
  BE_STATUS_DOMAIN = 3,
  BE_STATUS_NUMERICAL = 4,
  BE_STATUS_BUFFER_TOO_SMALL = 5,
  BE_STATUS_PANIC = 6,
} BeStatus;

// An ensemble specification.
typedef struct BeEnsemble BeEnsemble;

// The per-trial output of a fluctuation experiment.
typedef struct BeFluctuations BeFluctuations;

// One coefficient path together with the ensemble it was drawn from.
typedef struct BePath BePath;

// Raw moments and variance of a symmetric Beta law on (-1, 1).
typedef struct BeSymBetaMoments {
  double m1;
  double m2;
  double m3;
  double m4;
  double var;
} BeSymBetaMoments;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into this library on the same thread.
const char *be_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *be_version(void);

// Seed of the random stream `index` under master seed `seed`.
uint64_t be_mix64(uint64_t seed, uint64_t index);

// `E|X|²` and `E|X|⁴` for `X ~ Θ_ν`.
//
// # Safety
// `m2` and `m4` must be valid for writes.
enum BeStatus be_theta_moments(double nu, double *m2, double *m4);

// Moments of the symmetric Beta law `B(s, t)`.
//
// # Safety
// `moments` must be valid for writes.
enum BeStatus be_sym_beta_moments(double s, double t, struct BeSymBetaMoments *moments);

// `E[-X² log((1 - X)(1 + X))]` for `X ~ B(s, t)`, in closed form.
//
// # Safety
// `value` must be valid for writes.
enum BeStatus be_expected_neg_x2log(double s, double t, double *value);

// The digamma function.
//
// # Safety
// `value` must be valid for writes.
enum BeStatus be_digamma(double x, double *value);

// A circular ensemble of `n` points.
//
// # Safety
// `ensemble` must be valid for writes.
enum BeStatus be_ensemble_circular_new(size_t n, double beta, struct BeEnsemble **ensemble);

// A Jacobi ensemble of `n` points with edge exponents `a` (at 2) and `b`
// (at -2).
//
// # Safety
// `ensemble` must be valid for writes.
enum BeStatus be_ensemble_jacobi_new(size_t n,
                                     double beta,
                                     double a,
                                     double b,
                                     struct BeEnsemble **ensemble);

// # Safety
// `ensemble` must be null or come from a `be_ensemble_*_new` call and not
// have been freed.
void be_ensemble_free(struct BeEnsemble *ensemble);

// Draws a coefficient path from random stream `index` of `seed`, the same
// stream trial `index` of a fluctuation run uses.
//
// # Safety
// `ensemble` must be a live handle and `path` valid for writes.
enum BeStatus be_path_draw(const struct BeEnsemble *ensemble,
                           uint64_t seed,
                           uint64_t index,
                           struct BePath **path);

// # Safety
// `path` must be null or a live handle from [`be_path_draw`].
void be_path_free(struct BePath *path);

// Number of coefficients in the path.
//
// # Safety
// `path` must be a live handle and `len` valid for writes.
enum BeStatus be_path_len(const struct BePath *path, size_t *len);

// Points of a circular path in the arc `(lo, hi]`.
//
// # Safety
// `path` must be a live handle and `count` valid for writes.
enum BeStatus be_path_count_arc(const struct BePath *path, double lo, double hi, size_t *count);

// Points of a Jacobi path in `[2 cos θ, 2]`.
//
// # Safety
// `path` must be a live handle and `count` valid for writes.
enum BeStatus be_path_count_cap(const struct BePath *path, double theta, size_t *count);

// The sorted points encoded by the path: angles in (-π, π) for a circular
// path, values in (-2, 2) for a Jacobi path. Array convention as above.
//
// # Safety
// `path` must be a live handle, `buf` valid for `cap` writes (or null
// with `cap = 0`), and `len` valid for writes.
enum BeStatus be_path_points(const struct BePath *path, double *buf, size_t cap, size_t *len);

// 1 for a circular ensemble, 0 for Jacobi.
//
// # Safety
// `ensemble` must be a live handle and `is_circular` valid for writes.
enum BeStatus be_ensemble_is_circular(const struct BeEnsemble *ensemble, int32_t *is_circular);

// Runs `trials` trials and evaluates every window at the sorted angles
// `thetas[0..n_thetas]`: all arcs between pairs of angles for a circular
// ensemble, one cap per angle for Jacobi. `workers = 0` uses the default
// pool; results do not depend on it.
//
// # Safety
// `ensemble` must be a live handle, `thetas` valid for `n_thetas` reads,
// and `result` valid for writes.
enum BeStatus be_fluctuations_run(const struct BeEnsemble *ensemble,
                                  const double *thetas,
                                  size_t n_thetas,
                                  size_t trials,
                                  uint64_t seed,
                                  uint32_t normalization,
                                  size_t workers,
                                  struct BeFluctuations **result);

// # Safety
// `result` must be null or a live handle from [`be_fluctuations_run`].
void be_fluctuations_free(struct BeFluctuations *result);

// Number of trials (rows) and windows (columns).
//
// # Safety
// `result` must be a live handle; `trials` and `windows` valid for writes.
enum BeStatus be_fluctuations_shape(const struct BeFluctuations *result,
                                    size_t *trials,
                                    size_t *windows);

// Normalized statistics, row-major (trial, window).
//
// # Safety
// As for [`be_path_points`].
enum BeStatus be_fluctuations_values(const struct BeFluctuations *result,
                                     double *buf,
                                     size_t cap,
                                     size_t *len);

// Raw counts, row-major (trial, window).
//
// # Safety
// As for [`be_path_points`].
enum BeStatus be_fluctuations_counts(const struct BeFluctuations *result,
                                     uint64_t *buf,
                                     size_t cap,
                                     size_t *len);

// Summary (means, covariance, KS fit, shape moments) as JSON. `len`
// receives the byte length excluding the terminating NUL, and `cap` must
// leave room for it.
//
// # Safety
// As for [`be_path_points`], with `buf` a byte buffer.
enum BeStatus be_fluctuations_summary_json(const struct BeFluctuations *result,
                                           char *buf,
                                           size_t cap,
                                           size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETA_ENSEMBLE_H */
