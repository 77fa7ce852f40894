#ifndef SCLDPC_H
#define SCLDPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes mirroring the CLI exit codes.
 */
typedef enum ScldpcStatus {
  SCLDPC_STATUS_OK = 0,
  SCLDPC_STATUS_NULL_ARGUMENT = 1,
  SCLDPC_STATUS_PARSE_ERROR = 2,
  SCLDPC_STATUS_BUDGET_EXCEEDED = 3,
  SCLDPC_STATUS_INVALID_INPUT = 4,
} ScldpcStatus;

/**
 * Opaque exponent matrix handle.
 */
typedef struct ScldpcMatrix ScldpcMatrix;

/**
 * Opaque spreading matrix handle.
 */
typedef struct ScldpcSpreading ScldpcSpreading;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *scldpc_last_error(void);

/**
 * Parses an exponent matrix from its text format.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ScldpcStatus scldpc_matrix_parse(const char *text, struct ScldpcMatrix **out);

/**
 * Releases a matrix handle; null is ignored.
 *
 * # Safety
 * `m` must come from `scldpc_matrix_parse` and not be freed twice.
 */
void scldpc_matrix_free(struct ScldpcMatrix *m);

/**
 * Block-row count, block-column count, and lifting degree of a matrix.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScldpcStatus scldpc_matrix_dims(const struct ScldpcMatrix *m,
                                     int *rows,
                                     int *cols,
                                     int *lifting);

/**
 * Girth of the expanded binary graph; 0 means no cycles.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScldpcStatus scldpc_matrix_girth(const struct ScldpcMatrix *m, int *girth);

/**
 * Parses a spreading matrix from either text form.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ScldpcStatus scldpc_spreading_parse(const char *text, struct ScldpcSpreading **out);

/**
 * Releases a spreading handle; null is ignored.
 *
 * # Safety
 * `b` must come from this library and not be freed twice.
 */
void scldpc_spreading_free(struct ScldpcSpreading *b);

/**
 * Per-node average block-cycle spectrum for lengths 4, 6, ..., max_len.
 * `values` must have room for (max_len - 2) / 2 doubles.
 *
 * # Safety
 * All pointers must be valid and `values` sized as documented.
 */
enum ScldpcStatus scldpc_spectrum(const struct ScldpcMatrix *m,
                                  const struct ScldpcSpreading *b,
                                  int max_len,
                                  double *values);

/**
 * Number of surviving block-cycles per period of lengths up to `max_len`
 * under the given spreading.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScldpcStatus scldpc_score(const struct ScldpcMatrix *m,
                               const struct ScldpcSpreading *b,
                               int max_len,
                               uint64_t *score);

/**
 * Greedy search for a spreading of the given memory minimizing block-cycles
 * of lengths up to `max_len`; returns the result as a new handle.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScldpcStatus scldpc_optimize(const struct ScldpcMatrix *m,
                                  int memory,
                                  int max_len,
                                  uint64_t seed,
                                  uint64_t max_evaluations,
                                  struct ScldpcSpreading **out);

/**
 * Serializes the terminated exponent matrix of a spread code. Returns a
 * NUL-terminated string the caller must release with `scldpc_string_free`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScldpcStatus scldpc_terminate(const struct ScldpcMatrix *m,
                                   const struct ScldpcSpreading *b,
                                   int sections,
                                   char **out);

/**
 * Releases a string produced by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void scldpc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCLDPC_H */
