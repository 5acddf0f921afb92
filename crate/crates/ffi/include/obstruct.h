#ifndef OBSTRUCT_H
#define OBSTRUCT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Check identifiers, in the order of the report schema.
 */
typedef enum ObstructCheck {
  OBSTRUCT_CHECK_JACOBI = 0,
  OBSTRUCT_CHECK_DIVERGENCE = 1,
  OBSTRUCT_CHECK_TORSION = 2,
  OBSTRUCT_CHECK_METRIC_COMPAT = 3,
  OBSTRUCT_CHECK_CURVATURE = 4,
  OBSTRUCT_CHECK_GPRIME_FLAT = 5,
  OBSTRUCT_CHECK_CYBE = 6,
  OBSTRUCT_CHECK_QG_DIVERGENCE = 7,
} ObstructCheck;

/*
 Result of an API call.
 */
typedef enum ObstructStatus {
  OBSTRUCT_STATUS_OK = 0,
  OBSTRUCT_STATUS_NULL_ARGUMENT = 1,
  OBSTRUCT_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed config, unknown check or bad run settings.
   */
  OBSTRUCT_STATUS_CONFIG = 3,
  /*
   The scene or presentation violates a structural invariant.
   */
  OBSTRUCT_STATUS_INVALID_SCENE = 4,
  /*
   An expression could not be evaluated at the requested point.
   */
  OBSTRUCT_STATUS_EVALUATION = 5,
  OBSTRUCT_STATUS_UNKNOWN_EXAMPLE = 6,
  /*
   Wrong point dimension, index out of range or output buffer too small.
   */
  OBSTRUCT_STATUS_INVALID_ARGUMENT = 7,
  OBSTRUCT_STATUS_PANIC = 99,
} ObstructStatus;

typedef enum ObstructCheckStatus {
  OBSTRUCT_CHECK_STATUS_PASS = 0,
  OBSTRUCT_CHECK_STATUS_FAIL = 1,
  OBSTRUCT_CHECK_STATUS_SKIPPED = 2,
  OBSTRUCT_CHECK_STATUS_ERROR = 3,
} ObstructCheckStatus;

typedef enum ObstructFormat {
  OBSTRUCT_FORMAT_JSON = 0,
  OBSTRUCT_FORMAT_TEXT = 1,
  OBSTRUCT_FORMAT_CSV_POINTS = 2,
} ObstructFormat;

typedef struct ObstructReport ObstructReport;

/*
 A scene or Lie-algebra presentation with the check settings of its config.
 */
typedef struct ObstructSubject ObstructSubject;

/*
 One row of a report. `max_defect` is NaN when the check produced no value.
 */
typedef struct ObstructCheckSummary {
  enum ObstructCheck check;
  enum ObstructCheckStatus status;
  double tolerance;
  double max_defect;
} ObstructCheckSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *obstruct_version(void);

/*
 Message of the last failing call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *obstruct_last_error(void);

/*
 Name of a check as used in configs and reports (static string).
 */
const char *obstruct_check_name(enum ObstructCheck check);

/*
 Parses a JSON config document (`"kind": "scene"` or `"lie_algebra"`).

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObstructStatus obstruct_subject_from_json(const char *json, struct ObstructSubject **out);

/*
 Loads a built-in catalog entry by name.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ObstructStatus obstruct_subject_from_example(const char *name, struct ObstructSubject **out);

/*
 # Safety
 `subject` must be NULL or a handle from this library not yet freed.
 */
void obstruct_subject_free(struct ObstructSubject *subject);

/*
 Chart dimension of a scene, or the dimension of a Lie algebra; 0 for NULL.

 # Safety
 `subject` must be NULL or a live handle.
 */
size_t obstruct_subject_dimension(const struct ObstructSubject *subject);

/*
 Runs the subject's checks. `grid` overrides the samples per axis when
 nonzero; `workers` is the thread count, 0 for automatic.

 # Safety
 `subject` must be a live handle and `out` a valid pointer.
 */
enum ObstructStatus obstruct_run(const struct ObstructSubject *subject,
                                 size_t grid,
                                 size_t workers,
                                 struct ObstructReport **out);

/*
 # Safety
 `report` must be NULL or a handle from this library not yet freed.
 */
void obstruct_report_free(struct ObstructReport *report);

/*
 0 if every check passed or was skipped, 1 on any failure, 2 on any
 evaluation error; -1 for NULL.

 # Safety
 `report` must be NULL or a live handle.
 */
int32_t obstruct_report_exit_code(const struct ObstructReport *report);

/*
 # Safety
 `report` must be NULL or a live handle.
 */
size_t obstruct_report_check_count(const struct ObstructReport *report);

/*
 # Safety
 `report` must be a live handle and `out` a valid pointer.
 */
enum ObstructStatus obstruct_report_check(const struct ObstructReport *report,
                                          size_t index,
                                          struct ObstructCheckSummary *out);

/*
 Renders a report. The string is owned by the caller and released with
 [`obstruct_string_free`].

 # Safety
 `report` must be a live handle and `out` a valid pointer.
 */
enum ObstructStatus obstruct_report_render(const struct ObstructReport *report,
                                           enum ObstructFormat format,
                                           char **out);

/*
 # Safety
 `s` must be NULL or a string returned by this library not yet freed.
 */
void obstruct_string_free(char *s);

/*
 Writes the `n` components of the divergence `∇_j π^ij` at `point`.

 # Safety
 `point` must hold `n` doubles and `out` room for `n` doubles.
 */
enum ObstructStatus obstruct_divergence(const struct ObstructSubject *subject,
                                        const double *point,
                                        size_t n,
                                        double *out);

/*
 Writes the `n⁴` components `K^ijk_l` of the contravariant curvature at
 `point`, row-major in `(i, j, k, l)`. `out_len` is the capacity of `out`.

 # Safety
 `point` must hold `n` doubles and `out` room for `out_len` doubles.
 */
enum ObstructStatus obstruct_curvature(const struct ObstructSubject *subject,
                                       const double *point,
                                       size_t n,
                                       double *out,
                                       size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OBSTRUCT_H */
