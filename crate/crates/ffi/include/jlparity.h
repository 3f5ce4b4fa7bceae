#ifndef JLPARITY_H
#define JLPARITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JlpCase {
  JLP_CASE_SPLIT = 0,
  JLP_CASE_RAMIFIED = 1,
  JLP_CASE_UNRAMIFIED = 2,
} JlpCase;

typedef enum JlpStatus {
  JLP_STATUS_OK = 0,
  JLP_STATUS_NULL_POINTER = 1,
  JLP_STATUS_INVALID_ARGUMENT = 2,
  JLP_STATUS_UNSUPPORTED_RANGE = 3,
  JLP_STATUS_INTERNAL = 4,
  JLP_STATUS_PANIC = 5,
} JlpStatus;

/**
 * Opaque handle.
 */
typedef struct JlpContext JlpContext;

/**
 * Result for one `(zeta, chi, c)`. Signs are `+1`/`-1`, or `0` when undefined.
 */
typedef struct JlpInstance {
  bool csd;
  int8_t brute;
  int8_t closed;
  int8_t predicted_rec;
  bool consistent;
} JlpInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string, statically allocated.
 */
const char *jlp_version(void);

/**
 * Creates a context with the default sweep configuration.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum JlpStatus jlp_context_new(struct JlpContext **out);

/**
 * # Safety
 * `ctx` must be null or come from [`jlp_context_new`] and not be used afterwards.
 */
void jlp_context_free(struct JlpContext *ctx);

/**
 * Message for the last failed call on `ctx`, or null.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
const char *jlp_last_error(const struct JlpContext *ctx);

/**
 * Restricts sweeps to one `(case, q, n)`.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
enum JlpStatus jlp_set_point(struct JlpContext *ctx, enum JlpCase case_, uint64_t q, uint32_t n);

/**
 * Order of the roots of unity `c`; `0` restores the default `4(q-1)`.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
enum JlpStatus jlp_set_c_order(struct JlpContext *ctx, uint64_t c_order);

/**
 * Evaluates one triple `zeta = g^zeta_dlog`, `chi(g) = e(chi_exp/(q-1))`, `c = e(c_exp/c_order)`.
 *
 * # Safety
 * `ctx` must be null or a live context; `out` must be null or valid for writes.
 */
enum JlpStatus jlp_evaluate(struct JlpContext *ctx,
                            enum JlpCase case_,
                            uint64_t q,
                            uint32_t n,
                            uint64_t zeta_dlog,
                            uint64_t chi_exp,
                            uint64_t c_order,
                            uint64_t c_exp,
                            struct JlpInstance *out);

/**
 * Runs the configured sweep. `records` receives JSON lines owned by `ctx`;
 * `count` the number of records; `all_consistent` whether every record passed.
 *
 * # Safety
 * `ctx` must be null or a live context; the out pointers must be null or valid for writes.
 */
enum JlpStatus jlp_sweep(struct JlpContext *ctx,
                         const char **records,
                         size_t *count,
                         bool *all_consistent);

/**
 * Parses a case name (`split`, `ramified`, `unramified`).
 *
 * # Safety
 * `name` must be null or a NUL-terminated string; `out` null or valid for writes.
 */
enum JlpStatus jlp_parse_case(const char *name, enum JlpCase *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JLPARITY_H */
