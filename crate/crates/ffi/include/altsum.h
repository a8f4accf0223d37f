#ifndef ALTSUM_H
#define ALTSUM_H

/* This file is generated by cbindgen from altsum-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible entry point.
 */
typedef enum AltsumStatus {
  /**
   * The computation ran and every check passed.
   */
  ALTSUM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ALTSUM_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument failed validation (bad syntax, zero entries, ...).
   */
  ALTSUM_STATUS_INVALID_ARGUMENT = 2,
  /**
   * `k` exceeds the configured budget.
   */
  ALTSUM_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * The computation ran but the checked equality failed; the report is
   * still written so the witness can be inspected.
   */
  ALTSUM_STATUS_DISAGREEMENT = 4,
  /**
   * An internal panic was caught at the boundary.
   */
  ALTSUM_STATUS_INTERNAL_ERROR = 5,
} AltsumStatus;

/**
 * Opaque result handle.
 */
typedef struct AltsumReport AltsumReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *altsum_version(void);

/**
 * Symbolic identity verification at a given `k` (exact polynomial equality
 * after cross-multiplication). `max_symbolic_k` bounds the construction;
 * pass 5 for the default budget.
 *
 * # Safety
 * `out` must be a valid pointer to a report-handle slot.
 */
enum AltsumStatus altsum_verify_symbolic(uint32_t k,
                                         uint32_t max_symbolic_k,
                                         struct AltsumReport **out);

/**
 * Numeric identity verification: `trials` random rational points, exact
 * equality of both sides at every pole-free point.
 *
 * # Safety
 * `out` must be a valid pointer to a report-handle slot.
 */
enum AltsumStatus altsum_verify_numeric(uint32_t k,
                                        uint64_t trials,
                                        uint64_t seed,
                                        struct AltsumReport **out);

/**
 * Exact `q -> 1` limit comparison for the exponent list `a`, a
 * NUL-terminated string of comma-separated positive integers (`"1,2,3"`).
 *
 * # Safety
 * `a` must be a valid NUL-terminated string and `out` a valid pointer to a
 * report-handle slot.
 */
enum AltsumStatus altsum_limit_check(const char *a, struct AltsumReport **out);

/**
 * Four-way integral cross-check for the exponent list `a`, a NUL-terminated
 * string of comma-separated positive integers or slash rationals
 * (`"1,2"`, `"1/2,3/2"`). The exact integration and Monte Carlo paths run
 * only for integer entries.
 *
 * # Safety
 * `a` must be a valid NUL-terminated string and `out` a valid pointer to a
 * report-handle slot.
 */
enum AltsumStatus altsum_integral_cross_check(const char *a,
                                              uint64_t samples,
                                              uint64_t seed,
                                              struct AltsumReport **out);

/**
 * 1 when every check in the report passed, 0 when some check failed,
 * -1 for a null report.
 *
 * # Safety
 * `report` must be null or a live handle from this library.
 */
int altsum_report_equal(const struct AltsumReport *report);

/**
 * The report as a NUL-terminated JSON document. Borrowed from the report:
 * valid until `altsum_report_free`. Null for a null report.
 *
 * # Safety
 * `report` must be null or a live handle from this library.
 */
const char *altsum_report_json(const struct AltsumReport *report);

/**
 * Releases a report handle. Null is a no-op.
 *
 * # Safety
 * `report` must be null or a live handle from this library, not yet freed.
 */
void altsum_report_free(struct AltsumReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALTSUM_H */
