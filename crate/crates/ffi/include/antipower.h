#ifndef ANTIPOWER_H
#define ANTIPOWER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Reason reported by [`ap_morphism_classify`].
 */
typedef enum ApReason {
  AP_REASON_NONE = 0,
  AP_REASON_EQUAL_IMAGES = 1,
  AP_REASON_EXCEPTIONAL_WORD0000 = 2,
  AP_REASON_EXCEPTIONAL_WORD0111 = 3,
  AP_REASON_EXCEPTIONAL_WORD0101 = 4,
  AP_REASON_ALL_ONES_IMAGE = 5,
} ApReason;

/**
 * Result code of every fallible call.
 */
typedef enum ApStatus {
  AP_STATUS_OK = 0,
  /**
   * Malformed input or invalid argument.
   */
  AP_STATUS_USAGE = 1,
  /**
   * A search needed more letters than the horizon allows.
   */
  AP_STATUS_HORIZON = 2,
  /**
   * No block length up to the cap works.
   */
  AP_STATUS_CAP_EXCEEDED = 3,
  /**
   * The morphism is outside the supported class.
   */
  AP_STATUS_UNSUPPORTED = 4,
  /**
   * A construction failed a postcondition; indicates a bug.
   */
  AP_STATUS_THEOREM_VIOLATION = 5,
  AP_STATUS_NULL_POINTER = 6,
  AP_STATUS_BUFFER_TOO_SMALL = 7,
  AP_STATUS_PANIC = 8,
} ApStatus;

/**
 * A parsed uniform binary morphism.
 */
typedef struct ApMorphism ApMorphism;

/**
 * A k-anti-power witness.
 */
typedef struct ApWitness ApWitness;

typedef struct ApClassification {
  bool aperiodic;
  bool uniformly_recurrent;
  enum ApReason reason;
} ApClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *ap_last_error_message(void);

/**
 * Parses `"0:A,1:B"`. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be writable.
 */
enum ApStatus ap_morphism_parse(const char *text, struct ApMorphism **out_m);

/**
 * # Safety
 * `m` must be null or a handle from [`ap_morphism_parse`] not yet freed.
 */
void ap_morphism_free(struct ApMorphism *m);

/**
 * Uniformity parameter `r`, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t ap_morphism_r(const struct ApMorphism *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_morphism_classify(const struct ApMorphism *m, struct ApClassification *out_c);

/**
 * Writes the first `len` letters of the fixed point (bytes 0 or 1) to
 * `buf`, which must hold at least `len` bytes.
 *
 * # Safety
 * `m` must be a live handle; `buf` must be valid for `buf_len` writes.
 */
enum ApStatus ap_morphism_prefix(const struct ApMorphism *m,
                                 size_t len,
                                 uint8_t *buf,
                                 size_t buf_len);

/**
 * The recurrence constant `c1` and `C = (c1 + 2)·r`. Either output may be
 * null.
 *
 * # Safety
 * `m` must be a live handle; non-null outputs must be writable.
 */
enum ApStatus ap_recurrence_constant(const struct ApMorphism *m, size_t *c1, size_t *big_c);

/**
 * Least block length `m <= m_cap` such that `k` blocks starting at the
 * 1-based position `start` are pairwise distinct.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_gamma(const struct ApMorphism *m,
                       size_t start,
                       size_t k,
                       size_t m_cap,
                       size_t *out_gamma);

/**
 * A `k`-anti-power at position `i` with blocks shorter than `C·k`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_build_morphic_anti_power(const struct ApMorphism *m,
                                          size_t i,
                                          size_t k,
                                          struct ApWitness **out_w);

/**
 * A 5-anti-power from the anchored five-block construction.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_build_five_anti_power(const struct ApMorphism *m, struct ApWitness **out_w);

/**
 * Replays a witness against the fixed point of `m`.
 *
 * # Safety
 * `m` and `w` must be live handles; `out` must be writable.
 */
enum ApStatus ap_witness_verify(const struct ApMorphism *m,
                                const struct ApWitness *w,
                                bool *out_ok);

/**
 * # Safety
 * `w` must be null or a live witness handle.
 */
void ap_witness_free(struct ApWitness *w);

/**
 * 1-based start position, or 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t ap_witness_start(const struct ApWitness *w);

/**
 * Number of blocks, or 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t ap_witness_k(const struct ApWitness *w);

/**
 * Block length, or 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t ap_witness_block_length(const struct ApWitness *w);

/**
 * Candidate index of a five-block witness, or -1.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
int64_t ap_witness_candidate(const struct ApWitness *w);

/**
 * Copies block `index` (0-based) as bytes 0/1 into `buf`.
 *
 * # Safety
 * `w` must be a live handle; `buf` must be valid for `buf_len` writes.
 */
enum ApStatus ap_witness_block(const struct ApWitness *w,
                               size_t index,
                               uint8_t *buf,
                               size_t buf_len);

/**
 * Witness as JSON. Free the result with [`ap_string_free`].
 *
 * # Safety
 * `w` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_witness_to_json(const struct ApWitness *w, char **out_s);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ap_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANTIPOWER_H */
