#ifndef MAJPERC_H
#define MAJPERC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MajpercStatus {
  MAJPERC_STATUS_OK = 0,
  MAJPERC_STATUS_NULL_POINTER = 1,
  MAJPERC_STATUS_INVALID_ARGUMENT = 2,
  MAJPERC_STATUS_INADMISSIBLE = 3,
  MAJPERC_STATUS_SAMPLING_FAILED = 4,
  MAJPERC_STATUS_BUFFER_TOO_SMALL = 5,
  MAJPERC_STATUS_INTERNAL = 6,
  MAJPERC_STATUS_PANIC = 7,
} MajpercStatus;

typedef enum MajpercRuleKind {
  /**
   * Activate with at least `ceil((deg + param) / 2)` active neighbours.
   */
  MAJPERC_RULE_KIND_MAJORITY = 0,
  /**
   * Activate with at least `param` active neighbours.
   */
  MAJPERC_RULE_KIND_NEIGHBOUR = 1,
} MajpercRuleKind;

/**
 * Opaque graph handle.
 */
typedef struct MajpercGraph MajpercGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates `L(n, k)`.
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_lattice_new(uint32_t n, uint32_t k, struct MajpercGraph **out);

/**
 * Creates `L*(n, k, r)` with either the cyclic matching construction or a
 * tuple sampled from `seed`.
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_augmented_new(uint32_t n,
                                         uint32_t k,
                                         uint32_t r,
                                         uint64_t seed,
                                         bool deterministic,
                                         struct MajpercGraph **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 *
 * `g` is null or a live handle from this library, not used afterwards.
 */
void majperc_graph_free(struct MajpercGraph *g);

/**
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_graph_num_vertices(const struct MajpercGraph *g, size_t *out);

/**
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_graph_degree(const struct MajpercGraph *g, uint32_t *out);

/**
 * Writes the neighbours of `v` into `buf` (capacity `cap`) and their count
 * into `len`. Returns `BUFFER_TOO_SMALL` with `len` set when `cap` is
 * insufficient.
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_graph_neighbours(const struct MajpercGraph *g,
                                            size_t v,
                                            uint32_t *buf,
                                            size_t cap,
                                            size_t *len);

/**
 * Each vertex active independently with probability `p`, as one byte per
 * vertex into `out` (length `n_vertices`).
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_random_initial(size_t n_vertices, double p, uint64_t seed, uint8_t *out);

/**
 * Runs the process to its final state. `initial` and `final_state` hold
 * `len` bytes, which must equal the vertex count; `rounds` and
 * `disseminated` may be null.
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_run(const struct MajpercGraph *g,
                               enum MajpercRuleKind kind,
                               uint32_t param,
                               const uint8_t *initial,
                               size_t len,
                               uint8_t *final_state,
                               uint32_t *rounds,
                               bool *disseminated);

/**
 * The strict-majority critical probability of random `d`-regular graphs.
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_critical_prob(uint32_t d, double *out);

/**
 * Root of `x + x^2 - x^3 = 1/2` in `[0, 1]`.
 */
double majperc_wheel_pplus(void);

/**
 * The matching tuple of an augmented graph as a JSON document. Free the
 * string with [`majperc_string_free`].
 *
 * # Safety
 *
 * Pointer arguments are null or valid for the reads and writes the call performs.
 */
enum MajpercStatus majperc_graph_matchings_json(const struct MajpercGraph *g, char **out);

/**
 * # Safety
 *
 * `s` is null or a string from this library, not used afterwards.
 */
void majperc_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *majperc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAJPERC_H */
