#ifndef SHIFTLAB_H
#define SHIFTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShiftlabStatus {
  SHIFTLAB_STATUS_OK = 0,
  SHIFTLAB_STATUS_NULL_POINTER = 1,
  SHIFTLAB_STATUS_INVALID_UTF8 = 2,
  SHIFTLAB_STATUS_ALPHABET_MISMATCH = 3,
  SHIFTLAB_STATUS_BUDGET_EXCEEDED = 4,
  SHIFTLAB_STATUS_BOUND_EXCEEDED = 5,
  SHIFTLAB_STATUS_EMPTY_SET = 6,
  SHIFTLAB_STATUS_ALPHABET_TOO_SMALL = 7,
  SHIFTLAB_STATUS_SIZE_EXCEEDED = 8,
  SHIFTLAB_STATUS_DEPTH_MISMATCH = 9,
  SHIFTLAB_STATUS_INVALID_ALPHABET = 10,
  SHIFTLAB_STATUS_UNKNOWN_SYMBOL = 11,
  SHIFTLAB_STATUS_WORD_SYNTAX = 12,
  SHIFTLAB_STATUS_MALFORMED_PRESENTATION = 13,
  SHIFTLAB_STATUS_INVALID_ARGUMENT = 14,
  SHIFTLAB_STATUS_INCONSISTENT = 15,
  SHIFTLAB_STATUS_PANIC = 16,
} ShiftlabStatus;

/**
 * Opaque closed set.
 */
typedef struct ShiftlabSet ShiftlabSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *shiftlab_last_error(void);

/**
 * Static name of a status code, or NULL for an unknown code.
 */
const char *shiftlab_status_name(int32_t code);

/**
 * Parse a JSON presentation and normalize it.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum ShiftlabStatus shiftlab_set_from_json(const char *json, struct ShiftlabSet **out);

/**
 * The full shift over `alphabet` (a string of one-character symbols, or a
 * comma-separated list).
 *
 * # Safety
 * `alphabet` must be a nul-terminated string and `out` a writable pointer.
 */
enum ShiftlabStatus shiftlab_set_full(const char *alphabet, struct ShiftlabSet **out);

/**
 * The finite set of `count` eventually periodic words written `u(v)`.
 *
 * # Safety
 * `alphabet` must be a nul-terminated string, `literals` must point to
 * `count` nul-terminated strings and `out` must be writable.
 */
enum ShiftlabStatus shiftlab_set_from_words(const char *alphabet,
                                            const char *const *literals,
                                            size_t count,
                                            struct ShiftlabSet **out);

/**
 * Words avoiding every block; `blocks` holds `count` finite word literals.
 *
 * # Safety
 * As for `shiftlab_set_from_words`.
 */
enum ShiftlabStatus shiftlab_set_from_forbidden_blocks(const char *alphabet,
                                                       const char *const *blocks,
                                                       size_t count,
                                                       struct ShiftlabSet **out);

/**
 * Release a handle. NULL is ignored.
 *
 * # Safety
 * `set` must be NULL or a handle from this library not yet freed.
 */
void shiftlab_set_free(struct ShiftlabSet *set);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void shiftlab_string_free(char *s);

/**
 * Number of states of the canonical automaton, or 0 for a NULL handle.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t shiftlab_set_state_count(const struct ShiftlabSet *set);

/**
 * Canonical presentation as JSON.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_set_to_json(const struct ShiftlabSet *set, char **out);

/**
 * `ψ_{offset,modulus}(X)`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_decimate(const struct ShiftlabSet *set,
                                      size_t offset,
                                      size_t modulus,
                                      struct ShiftlabSet **out);

/**
 * Interleaving of `count` sets in order.
 *
 * # Safety
 * `parts` must point to `count` live handles and `out` must be writable.
 */
enum ShiftlabStatus shiftlab_interleave(const struct ShiftlabSet *const *parts,
                                        size_t count,
                                        struct ShiftlabSet **out);

/**
 * `X^[modulus]`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_closure(const struct ShiftlabSet *set,
                                     size_t modulus,
                                     struct ShiftlabSet **out);

/**
 * `S^steps X`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_shift(const struct ShiftlabSet *set,
                                   size_t steps,
                                   struct ShiftlabSet **out);

/**
 * Set equality.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum ShiftlabStatus shiftlab_equal(const struct ShiftlabSet *a,
                                   const struct ShiftlabSet *b,
                                   bool *out);

/**
 * Set inclusion `a ⊆ b`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum ShiftlabStatus shiftlab_subset(const struct ShiftlabSet *a,
                                    const struct ShiftlabSet *b,
                                    bool *out);

/**
 * Interleaving closure spectrum report as JSON; `cap` 0 means the default.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_spectrum_json(const struct ShiftlabSet *set, size_t cap, char **out);

/**
 * Stability report as JSON; `bound` 0 means the default.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum ShiftlabStatus shiftlab_stability_json(const struct ShiftlabSet *set,
                                            size_t bound,
                                            char **out);

/**
 * Topological and prefix entropy in natural-log units.
 *
 * # Safety
 * `set` must be a live handle; the out-parameters must be writable.
 */
enum ShiftlabStatus shiftlab_entropy(const struct ShiftlabSet *set,
                                     double *h_top,
                                     double *h_prefix);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHIFTLAB_H */
