#ifndef STEPWORLD_H
#define STEPWORLD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SwStatus {
  SW_STATUS_OK = 0,
  SW_STATUS_NULL_ARGUMENT = 1,
  SW_STATUS_INVALID_UTF8 = 2,
  SW_STATUS_PARSE = 3,
  SW_STATUS_INVALID_CONFIG = 4,
  SW_STATUS_ALPHABET_MISMATCH = 5,
  SW_STATUS_UNSUPPORTED = 6,
  SW_STATUS_RESOURCE_LIMIT = 7,
  SW_STATUS_OUT_OF_RANGE = 8,
  SW_STATUS_IO = 9,
  SW_STATUS_PANIC = 10,
} SwStatus;

/**
 * A finite-state transducer policy.
 */
typedef struct SwPolicy SwPolicy;

/**
 * A parsed world together with its meaning of life.
 */
typedef struct SwWorld SwWorld;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty after a
 * success. The pointer stays valid until the next call on this thread.
 */
const char *sw_last_error(void);

/**
 * Parses a world from its text form.
 *
 * # Safety
 * `source` must be a nul-terminated string; `world_out` must be writable.
 */
enum SwStatus sw_world_parse(const char *source, struct SwWorld **world_out);

/**
 * Loads one of the shipped worlds by name.
 *
 * # Safety
 * `name` must be a nul-terminated string; `world_out` must be writable.
 */
enum SwStatus sw_world_builtin(const char *name, struct SwWorld **world_out);

/**
 * # Safety
 * `world` must be null or a handle from this library not yet freed.
 */
void sw_world_free(struct SwWorld *world);

/**
 * # Safety
 * `world` must be a live handle; `count_out` must be writable.
 */
enum SwStatus sw_world_state_count(const struct SwWorld *world, size_t *count_out);

/**
 * Fatal-error check: writes 1 if some reachable state has a worse best
 * long-run rate than the start, else 0.
 *
 * # Safety
 * `world` must be a live handle; `fatal_out` must be writable.
 */
enum SwStatus sw_world_has_fatal_errors(const struct SwWorld *world, int32_t *fatal_out);

/**
 * Writes 1 if the two worlds have equal trees of life up to `depth`
 * (negative for unbounded), else 0.
 *
 * # Safety
 * `a` and `b` must be live handles; `equal_out` must be writable.
 */
enum SwStatus sw_worlds_indistinguishable(const struct SwWorld *a,
                                          const struct SwWorld *b,
                                          int64_t depth,
                                          int32_t *equal_out);

/**
 * Decodes a policy index over the alphabets of `world`.
 *
 * # Safety
 * `world` must be a live handle; `policy_out` must be writable.
 */
enum SwStatus sw_policy_decode(const struct SwWorld *world,
                               uint64_t index,
                               struct SwPolicy **policy_out);

/**
 * # Safety
 * `policy` must be null or a handle from this library not yet freed.
 */
void sw_policy_free(struct SwPolicy *policy);

/**
 * # Safety
 * `policy` must be a live handle; `count_out` must be writable.
 */
enum SwStatus sw_policy_state_count(const struct SwPolicy *policy, size_t *count_out);

/**
 * Lives `steps` steps of `world` with `policy` from birth and writes the
 * life value.
 *
 * # Safety
 * `world` and `policy` must be live handles; `value_out` must be writable.
 */
enum SwStatus sw_run_life_value(const struct SwWorld *world,
                                const struct SwPolicy *policy,
                                size_t steps,
                                uint64_t seed,
                                int64_t *value_out);

/**
 * Searches policies with up to `max_states` states for the first whose
 * evaluation-window value in `world` reaches `min_value`. Writes 1 to
 * `found_out` and the index to `index_out` if one exists within
 * `policy_cap` candidates, else 0.
 *
 * # Safety
 * `world` must be a live handle; the outputs must be writable.
 */
enum SwStatus sw_search_single(const struct SwWorld *world,
                               uint64_t train_steps,
                               uint64_t eval_steps,
                               int64_t min_value,
                               uint64_t seed,
                               size_t max_states,
                               uint64_t policy_cap,
                               int32_t *found_out,
                               uint64_t *index_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEPWORLD_H */
