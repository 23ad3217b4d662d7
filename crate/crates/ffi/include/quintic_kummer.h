#ifndef QUINTIC_KUMMER_H
#define QUINTIC_KUMMER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QkStatus {
  QK_STATUS_OK = 0,
  QK_STATUS_NULL_POINTER = 1,
  QK_STATUS_INVALID_RADICAND = 2,
  QK_STATUS_COMPUTATION = 3,
  QK_STATUS_BUFFER_TOO_SMALL = 4,
  QK_STATUS_PANIC = 5,
} QkStatus;

/*
 Opaque report handle.
 */
typedef struct QkReport QkReport;

/*
 Fields copied out of a report.
 */
typedef struct QkSummary {
  uint64_t n;
  uint32_t t;
  uint32_t qstar;
  uint32_t s1;
  bool lambda_ramifies;
  uint32_t rank_lo;
  uint32_t rank_hi;
  uint32_t rank_lo_nonstrong;
  uint32_t rank_hi_nonstrong;
  uint32_t sl_lo;
  uint32_t sl_hi;
  /*
   Trivial-or-cyclic family 1-10, or 0.
   */
  uint32_t cyclic_family;
} QkSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Computes the report for radicand `n`. On success `*out` owns a new handle.

 # Safety
 `out` must be null or valid for writes.
 */
enum QkStatus qk_report_new(uint64_t n, bool assume_strong, struct QkReport **out);

/*
 # Safety
 `report` must be null or a handle from `qk_report_new` that has not been freed.
 */
void qk_report_free(struct QkReport *report);

/*
 # Safety
 `report` must be a live handle or null; `out` must be null or valid for writes.
 */
enum QkStatus qk_report_summary(const struct QkReport *report, struct QkSummary *out);

/*
 Copies the JSON document, NUL-terminated, into `buf`. `*needed` receives the size
 including the terminator; a short buffer gives `BUFFER_TOO_SMALL` and writes nothing.

 # Safety
 `report` must be a live handle; `buf` must be valid for `len` bytes when non-null;
 `needed` must be null or valid for writes.
 */
enum QkStatus qk_report_json(const struct QkReport *report, char *buf, size_t len, size_t *needed);

/*
 The trivial-or-cyclic family (1-10) that `n` belongs to, or 0.
 */
uint32_t qk_trivial_or_cyclic_family(uint64_t n);

/*
 Static description of a status code.
 */
const char *qk_status_message(enum QkStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUINTIC_KUMMER_H */
