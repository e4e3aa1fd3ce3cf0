#ifndef PSLAB_H
#define PSLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PslabStatus {
  PSLAB_STATUS_OK = 0,
  PSLAB_STATUS_NULL_POINTER = 1,
  PSLAB_STATUS_INVALID_UTF8 = 2,
  PSLAB_STATUS_PARSE = 3,
  PSLAB_STATUS_UNKNOWN_BUILTIN = 4,
  PSLAB_STATUS_INVALID_CURVE = 5,
  PSLAB_STATUS_INVALID_ARGUMENT = 6,
  PSLAB_STATUS_OUTSIDE_DOMAIN = 7,
  PSLAB_STATUS_DEGENERATE = 8,
  PSLAB_STATUS_NUMERIC = 9,
  PSLAB_STATUS_PANIC = 10,
} PslabStatus;

typedef enum PslabVerdict {
  PSLAB_VERDICT_VERONESE_CONGRUENT = 0,
  PSLAB_VERDICT_NOT_CONGRUENT = 1,
  PSLAB_VERDICT_INCONCLUSIVE = 2,
} PslabVerdict;

/**
 * Opaque null curve in the light cone.
 */
typedef struct PslabCurve PslabCurve;

/**
 * Opaque surface built from a validated null curve.
 */
typedef struct PslabSurface PslabSurface;

typedef struct PslabValidation {
  int passed;
  /**
   * `|<a,a>|`, `|<a',a'>|`, `|<a'',a''> - 4/9|` (scale-relative maxima).
   */
  double residuals[3];
  double worst_t[3];
} PslabValidation;

typedef struct PslabCurvature {
  double k;
  double k_normal;
  double k_normal_abs;
  double mean_curvature_max;
  double sphere_residual;
  double gauss_residual;
  double codazzi_residual;
  double ricci_residual;
} PslabCurvature;

typedef struct PslabCongruence {
  enum PslabVerdict verdict;
  double max_abs_c;
  double worst_s;
  double worst_t;
  double c4_residual;
  size_t evaluated;
  size_t failures;
} PslabCongruence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next `pslab_*` call on the same thread.
 */
const char *pslab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pslab_version(void);

/**
 * Parses a curve spec (`c1:` .. `c5:`, `domain:`, optional `label:`).
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out_curve` a valid pointer.
 */
enum PslabStatus pslab_curve_from_spec(const char *spec, struct PslabCurve **out_curve);

/**
 * Loads a builtin curve by name (`veronese-generator`, `alpha0`).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out_curve` a valid pointer.
 */
enum PslabStatus pslab_curve_builtin(const char *name, struct PslabCurve **out_curve);

/**
 * Checks the null-curve constraints at `samples` points. A curve that fails
 * the constraints still returns `PSLAB_STATUS_OK` with `passed == 0`.
 *
 * # Safety
 * `curve` must come from this library; `out_report` must be valid.
 */
enum PslabStatus pslab_curve_validate(const struct PslabCurve *curve,
                                      size_t samples,
                                      double tol,
                                      struct PslabValidation *out_report);

/**
 * # Safety
 * `curve` must come from this library and not be used afterwards.
 */
void pslab_curve_free(struct PslabCurve *curve);

/**
 * Builds the surface of a curve over `s_min < s < s_max`. The curve is
 * validated first and may be freed afterwards.
 *
 * # Safety
 * `curve` must come from this library; `out_surface` must be valid.
 */
enum PslabStatus pslab_surface_new(const struct PslabCurve *curve,
                                   double s_min,
                                   double s_max,
                                   struct PslabSurface **out_surface);

/**
 * Writes the point `x(s, t)` of E^5_2 to `out_xyz[0..5]`.
 *
 * # Safety
 * `surface` must come from this library; `out_xyz` must hold 5 doubles.
 */
enum PslabStatus pslab_surface_position(const struct PslabSurface *surface,
                                        double s,
                                        double t,
                                        double *out_xyz);

/**
 * Curvatures and fundamental-equation residuals at `(s, t)`.
 *
 * # Safety
 * `surface` must come from this library; `out_report` must be valid.
 */
enum PslabStatus pslab_surface_curvature(const struct PslabSurface *surface,
                                         double s,
                                         double t,
                                         struct PslabCurvature *out_report);

/**
 * The f3- and f4-coefficients `c`, `c4` of h(f2~, f2~) in the canonical
 * frame; the surface is congruent to the Veronese surface iff `c` vanishes.
 *
 * # Safety
 * `surface` must come from this library; `c` and `c4` must be valid.
 */
enum PslabStatus pslab_surface_congruence_coefficient(const struct PslabSurface *surface,
                                                      double s,
                                                      double t,
                                                      double *c,
                                                      double *c4);

/**
 * Grid test of the congruence coefficient over the surface's s-range and
 * `t_min <= t <= t_max`.
 *
 * # Safety
 * `surface` must come from this library; `out_result` must be valid.
 */
enum PslabStatus pslab_surface_congruence_test(const struct PslabSurface *surface,
                                               double t_min,
                                               double t_max,
                                               size_t ns,
                                               size_t nt,
                                               double tol,
                                               struct PslabCongruence *out_result);

/**
 * # Safety
 * `surface` must come from this library and not be used afterwards.
 */
void pslab_surface_free(struct PslabSurface *surface);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSLAB_H */
