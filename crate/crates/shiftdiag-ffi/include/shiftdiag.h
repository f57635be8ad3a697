#ifndef SHIFTDIAG_H
#define SHIFTDIAG_H

/* Generated by cbindgen from shiftdiag-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum SdStatus {
  /**
   * The call succeeded.
   */
  SD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SD_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SD_STATUS_UTF8_ERROR = 2,
  /**
   * Arguments were understood but invalid (unknown system, bad directive, …).
   */
  SD_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Arguments were out of range for the requested computation.
   */
  SD_STATUS_RANGE_ERROR = 4,
  /**
   * The computation itself failed.
   */
  SD_STATUS_COMPUTE_ERROR = 5,
  /**
   * A panic was caught at the boundary; state may be incomplete.
   */
  SD_STATUS_PANIC = 6,
} SdStatus;

/**
 * Opaque handle to a constructed Markov diagram.
 */
typedef struct SdDiagram SdDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Generates the first `len` letters of a system's one-sided word into a
 * newly allocated NUL-terminated string. `directive` may be null except for
 * sturmian systems. Free the result with `sd_string_free`.
 *
 * # Safety
 * `system` and (when non-null) `directive` must be NUL-terminated strings;
 * `out` must be a valid pointer.
 */
enum SdStatus sd_prefix_generate(const char *system, const char *directive, size_t len, char **out);

/**
 * Builds the depth-bounded Markov diagram of a system. Pass a negative
 * `horizon` for the default `2(depth+1)+8`. On success `*out` owns the
 * diagram; release it with `sd_diagram_free`.
 *
 * # Safety
 * `system` and (when non-null) `directive` must be NUL-terminated strings;
 * `out` must be a valid pointer.
 */
enum SdStatus sd_diagram_build(const char *system,
                               const char *directive,
                               size_t depth,
                               ptrdiff_t horizon,
                               struct SdDiagram **out);

/**
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_vertex_count(const struct SdDiagram *diagram, size_t *out);

/**
 * Number of arrows within the diagram (frontier arrows excluded).
 *
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_arrow_count(const struct SdDiagram *diagram, size_t *out);

/**
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_frontier_count(const struct SdDiagram *diagram, size_t *out);

/**
 * Counts rooted paths with exactly `n` vertices; fails with a range error
 * when the diagram's depth bound is too small for an exact count.
 *
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_rooted_path_count(const struct SdDiagram *diagram,
                                           size_t n,
                                           uint64_t *out);

/**
 * Renders the diagram as pretty-printed JSON into a newly allocated string.
 * Free the result with `sd_string_free`.
 *
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_to_json(const struct SdDiagram *diagram, char **out);

/**
 * Renders the diagram in Graphviz DOT into a newly allocated string.
 * Free the result with `sd_string_free`.
 *
 * # Safety
 * `diagram` must come from `sd_diagram_build`; `out` must be valid.
 */
enum SdStatus sd_diagram_to_dot(const struct SdDiagram *diagram, char **out);

/**
 * Releases a diagram handle. Null is ignored.
 *
 * # Safety
 * `diagram` must be null or an unreleased handle from `sd_diagram_build`.
 */
void sd_diagram_free(struct SdDiagram *diagram);

/**
 * Releases a string allocated by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or an unreleased string returned by this library.
 */
void sd_string_free(char *s);

/**
 * Static description of a status code; never null, do not free.
 */
const char *sd_status_message(enum SdStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHIFTDIAG_H */
