#ifndef UIMPL_H
#define UIMPL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum UimplStatus {
  UIMPL_STATUS_OK = 0,
  UIMPL_STATUS_NULL_POINTER = 1,
  UIMPL_STATUS_INVALID_ARGUMENT = 2,
  UIMPL_STATUS_PARSE = 3,
  UIMPL_STATUS_VALIDATION = 4,
  UIMPL_STATUS_NUMERICAL = 5,
  UIMPL_STATUS_IO = 6,
  UIMPL_STATUS_PANIC = 7,
} UimplStatus;

/**
 * Verdict of one inequality check.
 */
typedef enum UimplCheckStatus {
  UIMPL_CHECK_STATUS_SATISFIED = 0,
  UIMPL_CHECK_STATUS_VIOLATED = 1,
  UIMPL_CHECK_STATUS_NOT_APPLICABLE = 2,
  UIMPL_CHECK_STATUS_EXTENDED_REGIME = 3,
  UIMPL_CHECK_STATUS_VACUOUS = 4,
} UimplCheckStatus;

/**
 * A system together with its implementation set and target gate.
 */
typedef struct UimplModel UimplModel;

/**
 * Metrics and checks of an evaluated model.
 */
typedef struct UimplReport UimplReport;

typedef struct UimplMetrics {
  double delta_u;
  double delta_e;
  double delta_eq;
  double delta_ue;
  double chi;
  double comm_norm;
  double h_s_norm;
  /**
   * Fock truncation, or 0 for models without one.
   */
  uint64_t fock_dim;
  double truncation_tail;
} UimplMetrics;

typedef struct UimplCheck {
  /**
   * Borrowed from the report; valid until it is freed.
   */
  const char *name;
  double lhs;
  double rhs;
  double margin;
  bool satisfied;
  enum UimplCheckStatus status;
  /**
   * 1 in regime, 0 outside it, -1 when the check has no regime condition.
   */
  int32_t in_regime;
} UimplCheck;

typedef struct UimplSweepRow {
  double alpha;
  double lambda;
  uint64_t fock_dim;
  double delta_u;
  double delta_e;
  double product;
  double bound;
  bool in_regime;
  uint64_t seed;
} UimplSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *uimpl_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from this thread.
 */
const char *uimpl_last_error_message(void);

/**
 * Builds a model from the JSON model-spec format.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UimplStatus uimpl_model_from_json(const char *json, struct UimplModel **out);

/**
 * Reads a model-spec file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum UimplStatus uimpl_model_load(const char *path, struct UimplModel **out);

/**
 * The Jaynes–Cummings model. `fock_dim` 0 picks the truncation
 * automatically.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum UimplStatus uimpl_model_jaynes_cummings(double epsilon,
                                             double lambda,
                                             double alpha,
                                             double tau,
                                             uint64_t fock_dim,
                                             struct UimplModel **out);

/**
 * # Safety
 * `model` must come from this library and not be used afterwards. NULL is
 * ignored.
 */
void uimpl_model_free(struct UimplModel *model);

/**
 * # Safety
 * All pointers must be valid.
 */
enum UimplStatus uimpl_model_dims(const struct UimplModel *model, uint64_t *dim_s, uint64_t *dim_e);

/**
 * Computes every metric and check, with the same budget escalation as the
 * command line.
 *
 * # Safety
 * `model` and `out` must be valid pointers.
 */
enum UimplStatus uimpl_model_evaluate(const struct UimplModel *model,
                                      uint64_t samples,
                                      uint64_t seed,
                                      struct UimplReport **out);

/**
 * # Safety
 * Both pointers must be valid.
 */
enum UimplStatus uimpl_report_metrics(const struct UimplReport *report, struct UimplMetrics *out);

/**
 * Whether no applicable check was violated.
 *
 * # Safety
 * Both pointers must be valid.
 */
enum UimplStatus uimpl_report_passed(const struct UimplReport *report, bool *out);

/**
 * # Safety
 * Both pointers must be valid.
 */
enum UimplStatus uimpl_report_check_count(const struct UimplReport *report, size_t *out);

/**
 * # Safety
 * Both pointers must be valid.
 */
enum UimplStatus uimpl_report_check(const struct UimplReport *report,
                                    size_t index,
                                    struct UimplCheck *out);

/**
 * The JSON report, as written by `uimpl verify`. Release it with
 * [`uimpl_string_free`].
 *
 * # Safety
 * Both pointers must be valid.
 */
enum UimplStatus uimpl_report_to_json(const struct UimplReport *report, char **out);

/**
 * # Safety
 * `report` must come from this library and not be used afterwards. NULL
 * is ignored.
 */
void uimpl_report_free(struct UimplReport *report);

/**
 * # Safety
 * `s` must be a string returned by this library. NULL is ignored.
 */
void uimpl_string_free(char *s);

/**
 * The Jaynes–Cummings spin-flip sweep with `ε = 10`, `τ = 1` and
 * `λ = π/(2α)`. Fills up to `capacity` rows and stores the row count in
 * `written`. If the buffer is too small nothing is computed, `written`
 * receives the required size and the call fails with
 * `UIMPL_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * `rows` must point to `capacity` writable rows (it may be NULL when
 * `capacity` is 0) and `written` must be valid.
 */
enum UimplStatus uimpl_sweep(double alpha_min,
                             double alpha_max,
                             size_t steps,
                             uint64_t samples,
                             uint64_t seed,
                             struct UimplSweepRow *rows,
                             size_t capacity,
                             size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UIMPL_H */
