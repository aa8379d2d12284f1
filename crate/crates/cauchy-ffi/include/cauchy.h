#ifndef CAUCHY_H
#define CAUCHY_H

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every FFI entry point.
typedef enum CauchyStatus {
  CAUCHY_STATUS_OK = 0,
  CAUCHY_STATUS_NULL_ARGUMENT = 1,
  CAUCHY_STATUS_INVALID_UTF8 = 2,
  CAUCHY_STATUS_INVALID_JSON = 3,
  CAUCHY_STATUS_CONFIG_ERROR = 4,
  CAUCHY_STATUS_SIZE_ERROR = 5,
  CAUCHY_STATUS_NOT_CONFORMAL = 6,
  CAUCHY_STATUS_NOT_INJECTIVE = 7,
  CAUCHY_STATUS_BOUNDARY_NOT_ANALYTIC = 8,
  CAUCHY_STATUS_INVERSION_DIVERGED = 9,
  CAUCHY_STATUS_NEAR_BOUNDARY = 10,
  CAUCHY_STATUS_KERNEL_SINGULAR = 11,
  CAUCHY_STATUS_RADII_ERROR = 12,
  CAUCHY_STATUS_PROVENANCE_MISMATCH = 13,
  CAUCHY_STATUS_TOLERANCE_BREACH = 14,
  CAUCHY_STATUS_INTERNAL_ERROR = 15,
} CauchyStatus;

// Opaque handle to a validated analytic domain.
typedef struct CauchyDomain CauchyDomain;

// Opaque handle to an extracted kernel expansion.
typedef struct CauchyExpansion CauchyExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the underlying library (static storage, do not free).
const char *cauchy_version(void);

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *cauchy_last_error_message(void);

// Frees a string returned through an out-pointer.
//
// # Safety
// `s` must come from this library and must not be used afterwards.
void cauchy_string_free(char *s);

// Builds a domain from spec JSON:
// `{ "name": ..., "psi": [[re,im],...], "R": number|null }`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum CauchyStatus cauchy_domain_from_json(const char *json, struct CauchyDomain **out);

// Builds a shipped preset domain by name (`disk`,
// `perturbed-disk[-eps]`, `cubic-blob[-eps]`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum CauchyStatus cauchy_domain_preset(const char *name, struct CauchyDomain **out);

// Releases a domain handle.
//
// # Safety
// `dom` must come from this library and must not be used afterwards.
void cauchy_domain_free(struct CauchyDomain *dom);

// Certified radius of analyticity and injectivity.
//
// # Safety
// Both pointers must be valid.
enum CauchyStatus cauchy_domain_radius(const struct CauchyDomain *dom, double *out);

// Conformality/injectivity evidence as a JSON document. `r_check <= 0`
// uses the certified radius.
//
// # Safety
// `dom` and `out_json` must be valid pointers.
enum CauchyStatus cauchy_domain_validate_json(const struct CauchyDomain *dom,
                                              double r_check,
                                              char **out_json);

// Extracts kernel coefficients. `m < 0` selects the automatic
// tail-driven truncation; `grid_n = 0` selects the matching default
// grid. Explicit values use the default contour radii.
//
// # Safety
// `dom` and `out` must be valid pointers.
enum CauchyStatus cauchy_expansion_compute(const struct CauchyDomain *dom,
                                           int64_t m,
                                           uint64_t grid_n,
                                           struct CauchyExpansion **out);

// Releases an expansion handle.
//
// # Safety
// `exp` must come from this library and must not be used afterwards.
void cauchy_expansion_free(struct CauchyExpansion *exp);

// Truncation degree M of the expansion.
//
// # Safety
// Both pointers must be valid.
enum CauchyStatus cauchy_expansion_truncation(const struct CauchyExpansion *exp, uint64_t *out);

// Coefficient `a_mn` of the expansion.
//
// # Safety
// All pointers must be valid.
enum CauchyStatus cauchy_expansion_coefficient(const struct CauchyExpansion *exp,
                                               uint64_t m,
                                               uint64_t n,
                                               double *out_re,
                                               double *out_im);

// Norm-bound data: the sampled kernel sup, the contour radii, the
// absolute coefficient sum, the geometric tail bound, and their total —
// the upper bound for the operator norm. Null out-pointers are skipped.
//
// # Safety
// `exp` must be valid; out-pointers must each be valid or null.
enum CauchyStatus cauchy_expansion_bounds(const struct CauchyExpansion *exp,
                                          double *out_sup_h,
                                          double *out_r,
                                          double *out_s,
                                          double *out_abs_sum,
                                          double *out_tail_bound,
                                          double *out_norm_upper);

// Applies the series operator to boundary samples on the unit circle
// (`n_samples` a power of two, at least 8) and writes the Taylor
// coefficients of the Hardy-space image. `capacity` is the room
// available in `out_re`/`out_im`; the full coefficient count
// (`n_samples/2 + M`) is stored in `written` and the leading
// `min(capacity, written)` coefficients are copied.
//
// # Safety
// Arrays must match the stated lengths; all pointers must be valid.
enum CauchyStatus cauchy_apply(const struct CauchyDomain *dom,
                               const struct CauchyExpansion *exp,
                               const double *in_re,
                               const double *in_im,
                               size_t n_samples,
                               double *out_re,
                               double *out_im,
                               size_t capacity,
                               size_t *written);

// Runs the full verification pipeline and returns the report JSON.
// Returns `ToleranceBreach` (with the JSON still written) when any
// suite fails its tolerance.
//
// # Safety
// `dom` and `out_json` must be valid pointers.
enum CauchyStatus cauchy_report_json(const struct CauchyDomain *dom,
                                     uint64_t seed,
                                     char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAUCHY_H */
