#ifndef MSDIAG_H
#define MSDIAG_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsdStatus {
  MSD_STATUS_OK = 0,
  /**
   * The input was well formed but the diagram is not valid.
   */
  MSD_STATUS_VALIDATION_FAILED = 1,
  MSD_STATUS_PARSE_ERROR = 2,
  MSD_STATUS_NULL_POINTER = 3,
  MSD_STATUS_INVALID_ARGUMENT = 4,
  /**
   * An internal error was caught at the boundary.
   */
  MSD_STATUS_PANIC = 5,
} MsdStatus;

/**
 * Opaque diagram handle.
 */
typedef struct MsdDiagram MsdDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next library call on the same thread; do not free.
 */
const char *msd_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void msd_string_free(char *s);

/**
 * Parses a diagram file. On success `*out` holds a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_parse(const char *text, struct MsdDiagram **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `d` must come from [`msd_diagram_parse`] and must not be used afterwards.
 */
void msd_diagram_free(struct MsdDiagram *d);

/**
 * Number of systems in the diagram.
 *
 * # Safety
 * Pointers must be valid or NULL.
 */
enum MsdStatus msd_diagram_sector_count(const struct MsdDiagram *d, size_t *out);

/**
 * Runs the full diagram check. Returns `MSD_STATUS_OK` when it passes and
 * `MSD_STATUS_VALIDATION_FAILED` otherwise; `*report` (if not NULL)
 * receives the failure list, one per line.
 *
 * # Safety
 * `d` must be a valid handle; `report` may be NULL.
 */
enum MsdStatus msd_diagram_validate(const struct MsdDiagram *d, char **report);

/**
 * Euler characteristic of the 4-manifold of a valid diagram.
 *
 * # Safety
 * `d` must be a valid handle and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_euler_characteristic(const struct MsdDiagram *d, int64_t *out);

/**
 * First homology of the 4-manifold of a valid diagram, e.g. `"Z + Z/2"`.
 *
 * # Safety
 * `d` must be a valid handle and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_first_homology(const struct MsdDiagram *d, char **out);

/**
 * Writes the diagram back out in the text file format.
 *
 * # Safety
 * `d` must be a valid handle and `out` a valid pointer.
 */
enum MsdStatus msd_diagram_serialize(const struct MsdDiagram *d, char **out);

/**
 * `H_degree` of the X_n complex for `degree` in 0..=2.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsdStatus msd_xn_homology(uint64_t n, uint32_t degree, char **out);

/**
 * Invariant factors of a row-major `rows x cols` matrix, space separated.
 *
 * # Safety
 * `entries` must point at `rows * cols` values (it may be NULL when that
 * product is 0) and `out` must be a valid pointer.
 */
enum MsdStatus msd_smith_invariant_factors(size_t rows,
                                           size_t cols,
                                           const int64_t *entries,
                                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MSDIAG_H */
