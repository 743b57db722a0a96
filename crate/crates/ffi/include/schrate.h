#ifndef SCHRATE_H
#define SCHRATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SchrateCurveKind {
  SCHRATE_CURVE_KIND_MINUS_SHIFT = 0,
  SCHRATE_CURVE_KIND_PLUS_SHIFT = 1,
  SCHRATE_CURVE_KIND_STRAIGHT = 2,
} SchrateCurveKind;

typedef enum SchrateFamily {
  SCHRATE_FAMILY_BUMP_DILATED = 0,
  SCHRATE_FAMILY_BUMP_MODULATED = 1,
  SCHRATE_FAMILY_BUMP_TENSOR = 2,
  SCHRATE_FAMILY_INDICATOR_BAND = 3,
  SCHRATE_FAMILY_BOURGAIN = 4,
  SCHRATE_FAMILY_ANNULUS_BUMP = 5,
  SCHRATE_FAMILY_GAUSSIAN_LIKE = 6,
} SchrateFamily;

typedef enum SchrateSmoothness {
  SCHRATE_SMOOTHNESS_LIPSCHITZ = 0,
  SCHRATE_SMOOTHNESS_HOLDER = 1,
} SchrateSmoothness;

typedef enum SchrateStatus {
  SCHRATE_STATUS_OK = 0,
  SCHRATE_STATUS_NULL_POINTER = 1,
  SCHRATE_STATUS_INVALID_ARGUMENT = 2,
  SCHRATE_STATUS_RANGE = 3,
  SCHRATE_STATUS_UNSUPPORTED = 4,
  SCHRATE_STATUS_ACCURACY = 5,
  SCHRATE_STATUS_WINDOW = 6,
  SCHRATE_STATUS_RESOLUTION = 7,
  SCHRATE_STATUS_INTERNAL = 8,
} SchrateStatus;

/**
 * Opaque curve.
 */
typedef struct SchrateCurve SchrateCurve;

/**
 * Opaque initial-data profile.
 */
typedef struct SchrateProfile SchrateProfile;

typedef struct SchrateComplex {
  double re;
  double im;
} SchrateComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *schrate_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *schrate_version(void);

/**
 * Critical Sobolev exponent s(δ) of the regime.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SchrateStatus schrate_threshold(uint32_t d,
                                     double alpha,
                                     double m,
                                     enum SchrateSmoothness smooth,
                                     double delta,
                                     double *out);

/**
 * Writes −1 (below threshold), 0 (on the boundary) or 1 (above).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SchrateStatus schrate_classify(uint32_t d,
                                    double alpha,
                                    double m,
                                    enum SchrateSmoothness smooth,
                                    double delta,
                                    double s,
                                    int32_t *out);

/**
 * New profile of a scaling family at scale `r`.
 *
 * # Safety
 * `out` must be valid for writes. Release the handle with [`schrate_profile_free`].
 */
enum SchrateStatus schrate_profile_new(enum SchrateFamily fam,
                                       double r,
                                       double epsilon,
                                       uintptr_t d,
                                       struct SchrateProfile **out);

/**
 * Unit-norm annulus bump at dyadic scale `k`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SchrateStatus schrate_profile_annulus(int32_t k, struct SchrateProfile **out);

/**
 * Gaussian-like profile amplitude·e^{−(ξ−center)²} per coordinate.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SchrateStatus schrate_profile_gaussian(uintptr_t d,
                                            double center,
                                            double amplitude,
                                            struct SchrateProfile **out);

/**
 * # Safety
 * `p` must come from a `schrate_profile_*` constructor and not be used afterwards.
 */
void schrate_profile_free(struct SchrateProfile *p);

/**
 * ‖f‖_{H^s}.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writes.
 */
enum SchrateStatus schrate_profile_sobolev(const struct SchrateProfile *p, double s, double *out);

/**
 * f̂(η) for η of length `len` (the profile dimension).
 *
 * # Safety
 * `p` must be a live handle, `eta` valid for `len` reads, `out` valid for writes.
 */
enum SchrateStatus schrate_profile_fourier_eval(const struct SchrateProfile *p,
                                                const double *eta,
                                                uintptr_t len,
                                                struct SchrateComplex *out);

/**
 * New translation curve.
 *
 * # Safety
 * `out` must be valid for writes. Release the handle with [`schrate_curve_free`].
 */
enum SchrateStatus schrate_curve_new(enum SchrateCurveKind kind,
                                     double alpha,
                                     uintptr_t d,
                                     struct SchrateCurve **out);

/**
 * # Safety
 * `c` must come from [`schrate_curve_new`] and not be used afterwards.
 */
void schrate_curve_free(struct SchrateCurve *c);

/**
 * γ(x, t) written to `out` (same length as `x`).
 *
 * # Safety
 * `x` valid for `len` reads and `out` for `len` writes.
 */
enum SchrateStatus schrate_curve_gamma(const struct SchrateCurve *c,
                                       const double *x,
                                       uintptr_t len,
                                       double t,
                                       double *out);

/**
 * U_γ^m f(x, t).
 *
 * # Safety
 * Handles must be live, `x` valid for `len` reads, `out` valid for writes.
 */
enum SchrateStatus schrate_evaluate(const struct SchrateProfile *p,
                                    const struct SchrateCurve *c,
                                    double m,
                                    const double *x,
                                    uintptr_t len,
                                    double t,
                                    struct SchrateComplex *out);

/**
 * The family's critical time at x for window constant `c`.
 *
 * # Safety
 * `curve` must be live, `x` valid for `len` reads, `out` valid for writes.
 */
enum SchrateStatus schrate_critical_time(enum SchrateFamily fam,
                                         const struct SchrateCurve *curve,
                                         double r,
                                         double epsilon,
                                         const double *x,
                                         uintptr_t len,
                                         double c,
                                         double *out);

/**
 * Predicted R-exponent of the family's maximal/Sobolev ratio (m = 2).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SchrateStatus schrate_predicted_slope(enum SchrateFamily fam,
                                           uint32_t d,
                                           double alpha,
                                           double delta,
                                           double s,
                                           double epsilon,
                                           double *out);

/**
 * Runs a JSON experiment plan and returns the JSON scaling report.
 *
 * # Safety
 * `plan` must be a NUL-terminated string and `out` valid for writes. The
 * returned string must be released with [`schrate_string_free`].
 */
enum SchrateStatus schrate_run_plan_json(const char *plan, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void schrate_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHRATE_H */
