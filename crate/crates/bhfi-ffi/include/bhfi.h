#ifndef BHFI_H
#define BHFI_H

#pragma once

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2 to 5 match the CLI exit codes.
 */
typedef enum BhfiStatus {
  /**
   * Success.
   */
  BHFI_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  BHFI_STATUS_BAD_ARGUMENT = 1,
  /**
   * Malformed input.
   */
  BHFI_STATUS_PARSE = 2,
  /**
   * Structure relations or chain map conditions fail.
   */
  BHFI_STATUS_RELATION = 3,
  /**
   * An equivalence search failed.
   */
  BHFI_STATUS_SEARCH = 4,
  /**
   * A size cap was exceeded.
   */
  BHFI_STATUS_DIVERGENCE = 5,
  /**
   * Internal error.
   */
  BHFI_STATUS_PANIC = 6,
} BhfiStatus;

/**
 * Opaque bordered structure.
 */
typedef struct BhfiStructure BhfiStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next call.
 */
const char *bhfi_last_error(void);

/**
 * Parses a structure file's contents and checks its relations.
 */
enum BhfiStatus bhfi_structure_from_json(const char *json, struct BhfiStructure **out);

/**
 * Builds a named standard object (`cfd0`, `cfa0_k2`, `az_k1`, ...).
 */
enum BhfiStatus bhfi_structure_builtin(const char *name, struct BhfiStructure **out);

/**
 * Releases a structure. Null is ignored.
 */
void bhfi_structure_free(struct BhfiStructure *s);

/**
 * Number of generators.
 */
enum BhfiStatus bhfi_structure_len(const struct BhfiStructure *s, uintptr_t *out);

/**
 * Serializes a structure to the file format.
 */
enum BhfiStatus bhfi_structure_to_json(const struct BhfiStructure *s, char **out);

/**
 * Number of structure relation violations (0 means valid).
 */
enum BhfiStatus bhfi_structure_check(const struct BhfiStructure *s, uintptr_t *violations);

/**
 * Homology dimension of the gluing: type D with type D through morphisms,
 * or type A with type D through the box tensor product.
 */
enum BhfiStatus bhfi_hfhat(const struct BhfiStructure *a,
                           const struct BhfiStructure *d,
                           uintptr_t *out);

/**
 * Involutive report for two type D structures, as a JSON string.
 */
enum BhfiStatus bhfi_hfihat(const struct BhfiStructure *p0,
                            const struct BhfiStructure *p1,
                            uintptr_t max_sum,
                            char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void bhfi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BHFI_H */
