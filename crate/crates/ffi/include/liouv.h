#ifndef LIOUV_H
#define LIOUV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LiouvStatus {
  LIOUV_STATUS_OK = 0,
  LIOUV_STATUS_NULL_POINTER = 1,
  LIOUV_STATUS_INVALID_PARAM = 2,
  LIOUV_STATUS_INDEX = 3,
  LIOUV_STATUS_DOMAIN = 4,
  LIOUV_STATUS_NO_CONVERGENCE = 5,
  LIOUV_STATUS_NUMERICAL = 6,
  LIOUV_STATUS_PANIC = 7,
} LiouvStatus;

/**
 * Validated model parameters.
 */
typedef struct LiouvParams LiouvParams;

/**
 * Eigenvalues of all sectors, ordered by `q` then real part descending.
 */
typedef struct LiouvSpectrum LiouvSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty if none.
 * Valid until the next failing call on the same thread.
 */
const char *liouv_last_error(void);

/**
 * Library version as a static string.
 */
const char *liouv_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to a `LiouvParams*`.
 */
enum LiouvStatus liouv_params_new(double h,
                                  double gamma,
                                  double gamma0,
                                  double p,
                                  uint32_t two_s,
                                  struct LiouvParams **out);

/**
 * # Safety
 * `params` must come from `liouv_params_new` and not be used afterwards.
 */
void liouv_params_free(struct LiouvParams *params);

/**
 * Eigenvalues of every charge sector.
 *
 * # Safety
 * `params` must be a live handle and `out` a valid pointer.
 */
enum LiouvStatus liouv_spectrum_compute(const struct LiouvParams *params,
                                        struct LiouvSpectrum **out);

/**
 * # Safety
 * `spec` must be a live handle and `len` a valid pointer.
 */
enum LiouvStatus liouv_spectrum_len(const struct LiouvSpectrum *spec, size_t *len);

/**
 * # Safety
 * `spec` must be a live handle; out-pointers must be valid.
 */
enum LiouvStatus liouv_spectrum_get(const struct LiouvSpectrum *spec,
                                    size_t index,
                                    int32_t *q,
                                    double *re,
                                    double *im);

/**
 * Smallest `|Re λ|` among non-stationary modes.
 *
 * # Safety
 * `spec` must be a live handle and `gap` a valid pointer.
 */
enum LiouvStatus liouv_spectrum_gap(const struct LiouvSpectrum *spec, double *gap);

/**
 * # Safety
 * `spec` must come from `liouv_spectrum_compute` and not be used afterwards.
 */
void liouv_spectrum_free(struct LiouvSpectrum *spec);

/**
 * Steady-state magnetization and von Neumann entropy.
 *
 * # Safety
 * `params` must be a live handle; out-pointers must be valid.
 */
enum LiouvStatus liouv_steady_state(const struct LiouvParams *params,
                                    double *mean_sz,
                                    double *entropy);

/**
 * Large-`s` edges of `Re Λ/s` at `x = |q|/2s`. `separator` is NaN where
 * region I is absent.
 *
 * # Safety
 * `params` must be a live handle; out-pointers must be valid.
 */
enum LiouvStatus liouv_spectral_edges(const struct LiouvParams *params,
                                      double x,
                                      double *top,
                                      double *separator,
                                      double *bottom);

/**
 * Exact eigenvalue `n` of sector `q` (`|q| <= 1`) for an unpolarized bath.
 *
 * # Safety
 * `params` must be a live handle; out-pointers must be valid.
 */
enum LiouvStatus liouv_p0_eigenvalue(const struct LiouvParams *params,
                                     uint32_t n,
                                     int32_t q,
                                     double *re,
                                     double *im);

/**
 * Relaxation times of an unpolarized bath; infinite when a rate vanishes.
 *
 * # Safety
 * `params` must be a live handle; out-pointers must be valid.
 */
enum LiouvStatus liouv_relaxation_times(const struct LiouvParams *params, double *t1, double *t2);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIOUV_H */
