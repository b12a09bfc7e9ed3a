#ifndef ATLAS_H
#define ATLAS_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which map builds the image system: 0 = F, 1 = F^-1 (default).
 */
typedef enum {
  ATLAS_CONVENTION_DIRECT = 0,
  ATLAS_CONVENTION_INVERSE = 1,
} AtlasConvention;

typedef enum {
  ATLAS_STATUS_OK = 0,
  ATLAS_STATUS_NULL_POINTER = 1,
  ATLAS_STATUS_INVALID_ARGUMENT = 2,
  ATLAS_STATUS_NOT_COPRIME = 3,
  ATLAS_STATUS_NOT_CLOSED_SURFACE = 4,
  ATLAS_STATUS_DEGENERATE = 5,
  ATLAS_STATUS_TOO_LARGE = 6,
  ATLAS_STATUS_TIMEOUT = 7,
  ATLAS_STATUS_BUDGET_EXCEEDED = 8,
  ATLAS_STATUS_INTERNAL = 9,
  ATLAS_STATUS_PANIC = 10,
} AtlasStatus;

/**
 * Opaque finite-field handle.
 */
typedef struct AtlasField AtlasField;

/**
 * Invariants of x^t at point 1.
 */
typedef struct {
  uint64_t v;
  bool apn;
  bool closed_surface;
  /**
   * Number of rotation lines at point 1.
   */
  uint64_t lines;
} AtlasInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates GF(2^m). `poly = 0` selects the default primitive polynomial.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
AtlasStatus atlas_field_new(uint32_t m, uint64_t poly, AtlasField **out);

/**
 * Releases a field handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle from [`atlas_field_new`] not yet freed.
 */
void atlas_field_free(AtlasField *f);

/**
 * 2^m - 1 for the field, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint32_t atlas_field_order(const AtlasField *f);

/**
 * The primitive polynomial bitmask, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint64_t atlas_field_poly(const AtlasField *f);

/**
 * Writes the reduced spectrum string, e.g. `(2; 10, 20)`, for x^t at `point`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_spectrum(const AtlasField *f,
                           uint64_t t,
                           uint32_t point,
                           uint32_t conv,
                           char **out);

/**
 * Fills `out` with v, APN status, closed-surface status and line count.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_invariants(const AtlasField *f, uint64_t t, uint32_t conv, AtlasInvariants *out);

/**
 * Writes V* in the form `{1^42, 3^7}`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_vstar(const AtlasField *f, uint64_t t, uint32_t conv, char **out);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_is_closed_surface(const AtlasField *f, uint64_t t, uint32_t conv, bool *out);

/**
 * Fails with `NotClosedSurface` when x^t has pinch points.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_orientable(const AtlasField *f, uint64_t t, uint32_t conv, bool *out);

/**
 * Surveys every class of the field and writes the JSONL archive.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
AtlasStatus atlas_survey_jsonl(const AtlasField *f, uint32_t conv, char **out);

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * call on the same thread.
 */
const char *atlas_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string produced by this library, not yet freed.
 */
void atlas_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *atlas_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATLAS_H */
