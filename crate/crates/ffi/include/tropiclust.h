#ifndef TROPICLUST_H
#define TROPICLUST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE_ERROR = 3,
  TC_STATUS_INVALID_SEED = 4,
  TC_STATUS_UNKNOWN_LABEL = 5,
  TC_STATUS_FROZEN_DIRECTION = 6,
  TC_STATUS_INVALID_QUANTUM_DATUM = 7,
  TC_STATUS_NO_SOLUTION = 8,
  TC_STATUS_GROWTH_LIMIT = 9,
  // A check or computation failed; see the last error.
  TC_STATUS_FAILED = 10,
  // Internal error (a caught panic).
  TC_STATUS_PANIC = 11,
} TcStatus;

// A seed with its optional quantum datum.
typedef struct TcSeed TcSeed;

// A seed reached from a root by mutation, with its G- and C-matrices.
typedef struct TcState TcState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library; valid until the next failing call.
const char *tc_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void tc_string_free(char *s);

// Library version, a static string.
const char *tc_version(void);

// Parses and validates a seed file (JSON).
//
// # Safety
// `json` must be a nul-terminated string; `out` a valid pointer.
enum TcStatus tc_seed_from_json(const char *json, struct TcSeed **out);

// A built-in seed: `a2`, `a2f`, `markov` or `cns`.
//
// # Safety
// `name` must be a nul-terminated string; `out` a valid pointer.
enum TcStatus tc_seed_fixture(const char *name, struct TcSeed **out);

// # Safety
// `seed` must come from this library (or be null) and not be freed twice.
void tc_seed_free(struct TcSeed *seed);

// Canonical JSON of the seed.
//
// # Safety
// `seed` must be a live handle; `out` a valid pointer.
enum TcStatus tc_seed_to_json(const struct TcSeed *seed, char **out);

// Number of mutable labels.
//
// # Safety
// `seed` must be a live handle; `out` a valid pointer.
enum TcStatus tc_seed_rank(const struct TcSeed *seed, uintptr_t *out);

// Entry `B[row][col]` (`col` a mutable label).
//
// # Safety
// `seed` must be a live handle; strings nul-terminated; `out` valid.
enum TcStatus tc_seed_entry(const struct TcSeed *seed,
                            const char *row,
                            const char *col,
                            int64_t *out);

// Mutates at `direction`; the quantum datum, if any, is carried along.
//
// # Safety
// `seed` must be a live handle; `direction` nul-terminated; `out` valid.
enum TcStatus tc_seed_mutate(const struct TcSeed *seed, const char *direction, struct TcSeed **out);

// Solves for a compatible quantum datum and attaches it, returning JSON
// `{"lambda": ..., "homogeneous": [...]}`. `TC_STATUS_NO_SOLUTION` when
// there is none.
//
// # Safety
// `seed` must be a live handle; `out` valid.
enum TcStatus tc_seed_quantize(struct TcSeed *seed, char **out);

// Runs the invariant suites along `samples` random paths of length `depth`.
// `*passed` is set to 1 or 0 and `*report` (if non-null) to a text summary.
//
// # Safety
// `seed` must be a live handle; `passed` valid; `report` valid or null.
enum TcStatus tc_seed_audit(const struct TcSeed *seed,
                            uintptr_t depth,
                            uintptr_t samples,
                            uint64_t rng_seed,
                            int32_t *passed,
                            char **report);

// Exchange graph up to `max_seeds` seeds, as DOT (`dot != 0`) or JSON.
// `*closed` is set to 1 when the graph closed.
//
// # Safety
// `seed` must be a live handle; `out` and `closed` valid.
enum TcStatus tc_seed_graph(const struct TcSeed *seed,
                            uintptr_t max_seeds,
                            int32_t dot,
                            int32_t *closed,
                            char **out);

// The initial tropical state of a classical seed.
//
// # Safety
// `seed` must be a live handle; `out` valid.
enum TcStatus tc_state_new(const struct TcSeed *seed, struct TcState **out);

// # Safety
// `state` must come from this library (or be null) and not be freed twice.
void tc_state_free(struct TcState *state);

// # Safety
// `state` must be a live handle; `direction` nul-terminated; `out` valid.
enum TcStatus tc_state_mutate(const struct TcState *state,
                              const char *direction,
                              struct TcState **out);

// JSON `{"path", "B", "G", "C", "G_co", "C_co"}`; matrix entries are
// decimal strings.
//
// # Safety
// `state` must be a live handle; `out` valid.
enum TcStatus tc_state_to_json(const struct TcState *state, char **out);

// Checks the tropical identities of the state; `TC_STATUS_FAILED` with the
// report as last error when one does not hold.
//
// # Safety
// `state` must be a live handle.
enum TcStatus tc_state_audit(const struct TcState *state);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPICLUST_H */
