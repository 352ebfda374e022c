#ifndef KRALL_H
#define KRALL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `Ok` is zero.
 */
typedef enum KrallStatus {
  KRALL_STATUS_OK = 0,
  KRALL_STATUS_NULL_POINTER = 1,
  KRALL_STATUS_INVALID_UTF8 = 2,
  KRALL_STATUS_PARSE = 3,
  KRALL_STATUS_INVALID_PARAMETERS = 4,
  KRALL_STATUS_DEGENERATE = 5,
  KRALL_STATUS_NOT_IN_ALGEBRA = 6,
  KRALL_STATUS_FAILED = 7,
  KRALL_STATUS_PANIC = 8,
} KrallStatus;

/**
 * An operator in normal form `sum c_ij D1^i D2^j`.
 */
typedef struct KrallOperator KrallOperator;

/**
 * A Darboux specification together with its memoized polynomials.
 */
typedef struct KrallSpec KrallSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a spec from `alpha`, `beta` and the `k` strings in `a`.
 *
 * # Safety
 * `beta` must be a NUL-terminated string, `a` must point to `k` such strings
 * (or may be null when `k == 0`), and `out` must be writable.
 */
enum KrallStatus krall_spec_new(uint32_t alpha,
                                const char *beta,
                                const char *const *a,
                                size_t k,
                                struct KrallSpec **out);

/**
 * # Safety
 * `spec` must come from `krall_spec_new` and not be used afterwards.
 */
void krall_spec_free(struct KrallSpec *spec);

/**
 * Writes the coefficients of `hat q_{n,s}` (`q_n` when `s = 0`) as JSON.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum KrallStatus krall_qpoly_json(const struct KrallSpec *spec, size_t n, uint32_t s, char **out);

/**
 * Writes a basis of the algebra up to `degree` as a JSON array of polynomials in `t`.
 *
 * # Safety
 * `spec` must be a live handle and `out` writable.
 */
enum KrallStatus krall_algebra_basis_json(const struct KrallSpec *spec, size_t degree, char **out);

/**
 * Fits `B_f` for `f` given as a JSON coefficient array in `t`.
 *
 * # Safety
 * `spec` must be a live handle, `f_json` a NUL-terminated string, `out` writable.
 */
enum KrallStatus krall_fit(const struct KrallSpec *spec,
                           const char *f_json,
                           struct KrallOperator **out);

/**
 * Parses an operator in the cache format `{"beta": "..", "terms": [[i, j, "c"], ..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum KrallStatus krall_operator_from_json(const char *json, struct KrallOperator **out);

/**
 * # Safety
 * `op` must be a live handle and `out` writable.
 */
enum KrallStatus krall_operator_to_json(const struct KrallOperator *op, char **out);

/**
 * Applies the operator, in its weight-`s` realization, to a polynomial in `z`.
 *
 * # Safety
 * `op` must be a live handle, `p_json` a NUL-terminated string, `out` writable.
 */
enum KrallStatus krall_operator_apply_json(const struct KrallOperator *op,
                                           const char *p_json,
                                           uint32_t s,
                                           char **out);

/**
 * `[a, b] = ab - ba`.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum KrallStatus krall_operator_commutator(const struct KrallOperator *a,
                                           const struct KrallOperator *b,
                                           struct KrallOperator **out);

/**
 * Nonzero when the operator is zero.
 *
 * # Safety
 * `op` must be a live handle or null.
 */
int32_t krall_operator_is_zero(const struct KrallOperator *op);

/**
 * # Safety
 * `op` must come from this library and not be used afterwards.
 */
void krall_operator_free(struct KrallOperator *op);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void krall_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *krall_last_error(void);

/**
 * Static description of a status code.
 */
const char *krall_status_message(enum KrallStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRALL_H */
