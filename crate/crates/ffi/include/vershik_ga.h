#ifndef VERSHIK_GA_H
#define VERSHIK_GA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VgStatus {
  VG_STATUS_OK = 0,
  VG_STATUS_NULL_POINTER = 1,
  VG_STATUS_INVALID_INPUT = 2,
  /**
   * The output buffer was too short; the required length was still written.
   */
  VG_STATUS_BUFFER_TOO_SMALL = 3,
  VG_STATUS_INTERNAL = 4,
} VgStatus;

/**
 * A parsed or generated instance.
 */
typedef struct VgInstance VgInstance;

/**
 * Outcome of a GA run.
 */
typedef struct VgResult VgResult;

/**
 * GA settings for [`vg_solve`]. Obtain defaults from [`vg_solve_options_default`].
 */
typedef struct VgSolveOptions {
  /**
   * Operator counts ν_C, ν_M, ν_D, ν_I, ν_S, ν_R; they sum to the population size.
   */
  size_t counts[6];
  size_t sigma;
  size_t initial_length;
  uint64_t seed;
  /**
   * True: substitute the recommended generator instead of a random one.
   */
  bool recommended_substitution;
} VgSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Normal form of `word[0..len]` in V_rank, written to `out[0..cap]`.
 * `*out_len` receives the length of the result even if `cap` is too small.
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum VgStatus vg_normal_form(size_t rank,
                             const int32_t *word,
                             size_t len,
                             int32_t *out,
                             size_t cap,
                             size_t *out_len);

/**
 * Geodesic cancellation of `word` without reordering; see [`vg_normal_form`].
 *
 * # Safety
 * Pointers must be valid for the given lengths.
 */
enum VgStatus vg_pseudo_normal_form(size_t rank,
                                    const int32_t *word,
                                    size_t len,
                                    int32_t *out,
                                    size_t cap,
                                    size_t *out_len);

/**
 * Parses an instance in the text format (`n:`, `Y:`, `Z:`, `a:`, `b:` and
 * optional witness lines `x:`, `y:`).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum VgStatus vg_instance_parse(const char *text, struct VgInstance **out);

/**
 * Random instance with Y = {1..m-1}, Z = {m+2..2m} for even `rank` = 2m,
 * keeping the generating witness.
 *
 * # Safety
 * `out` must be writable.
 */
enum VgStatus vg_instance_generate(size_t rank,
                                   size_t l_a,
                                   size_t l_x,
                                   size_t l_y,
                                   uint64_t seed,
                                   struct VgInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be freed twice. Null is ignored.
 */
void vg_instance_free(struct VgInstance *inst);

/**
 * Text form of an instance, released with [`vg_string_free`].
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum VgStatus vg_instance_to_string(const struct VgInstance *inst, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void vg_string_free(char *s);

/**
 * Reduced length of `x a y b⁻¹`. `x` must lie in V(Y) and `y` in V(Z).
 *
 * # Safety
 * `inst` must be a live handle and the word pointers valid for their lengths.
 */
enum VgStatus vg_cost(const struct VgInstance *inst,
                      const int32_t *x,
                      size_t x_len,
                      const int32_t *y,
                      size_t y_len,
                      size_t *out_cost);

/**
 * Writes whether `(x, y)` solves the instance.
 *
 * # Safety
 * As for [`vg_cost`].
 */
enum VgStatus vg_is_solution(const struct VgInstance *inst,
                             const int32_t *x,
                             size_t x_len,
                             const int32_t *y,
                             size_t y_len,
                             bool *out_solved);

struct VgSolveOptions vg_solve_options_default(void);

/**
 * Runs the GA. A null `options` means [`vg_solve_options_default`].
 * Timing out is not an error: inspect the result with [`vg_result_solved`].
 *
 * # Safety
 * `inst` must be a live handle; `options` null or valid; `out` writable.
 */
enum VgStatus vg_solve(const struct VgInstance *inst,
                       const struct VgSolveOptions *options,
                       struct VgResult **out);

/**
 * # Safety
 * `r` must come from [`vg_solve`] and not be freed twice. Null is ignored.
 */
void vg_result_free(struct VgResult *r);

/**
 * # Safety
 * `r` must be a live handle or null (which reads as false).
 */
bool vg_result_solved(const struct VgResult *r);

/**
 * Index of the generation in which the solution appeared, or σ on timeout.
 *
 * # Safety
 * `r` must be a live handle or null (which reads as 0).
 */
size_t vg_result_generations(const struct VgResult *r);

/**
 * # Safety
 * `r` must be a live handle or null (which reads as 0).
 */
size_t vg_result_final_cost(const struct VgResult *r);

/**
 * # Safety
 * `r` must be a live handle or null (which reads as 0).
 */
uint64_t vg_result_elapsed_ms(const struct VgResult *r);

/**
 * The `x` part of a solution; see [`vg_normal_form`] for the buffer protocol.
 *
 * # Safety
 * `r` must be a live handle and `out` valid for `cap` letters.
 */
enum VgStatus vg_result_x(const struct VgResult *r, int32_t *out, size_t cap, size_t *out_len);

/**
 * The `y` part of a solution.
 *
 * # Safety
 * As for [`vg_result_x`].
 */
enum VgStatus vg_result_y(const struct VgResult *r, int32_t *out, size_t cap, size_t *out_len);

/**
 * Message for the last call on this thread; empty after a success. The
 * pointer stays valid until the next library call on the same thread.
 */
const char *vg_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VERSHIK_GA_H */
