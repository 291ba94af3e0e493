#ifndef SINTEGRAL_H
#define SINTEGRAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum SintStatus {
  SINT_STATUS_OK = 0,
  SINT_STATUS_NULL_POINTER = 1,
  SINT_STATUS_INVALID_UTF8 = 2,
  SINT_STATUS_PARSE = 3,
  SINT_STATUS_INVALID_PRIMES = 4,
  SINT_STATUS_INVALID_ARGUMENT = 5,
  SINT_STATUS_INTERNAL = 6,
} SintStatus;

/**
 * Verdict kinds. The numeric values match the CLI exit codes.
 */
typedef enum SintVerdictKind {
  SINT_VERDICT_KIND_INFINITE = 0,
  SINT_VERDICT_KIND_FINITE = 1,
  SINT_VERDICT_KIND_UNKNOWN = 2,
  SINT_VERDICT_KIND_ERROR = 3,
} SintVerdictKind;

/**
 * A parsed curve, implicit or parametrized.
 */
typedef struct SintCurve SintCurve;

/**
 * The outcome of `sint_decide`.
 */
typedef struct SintVerdict SintVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse a polynomial in x and y; the curve is its zero set.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SintStatus sint_curve_parse_implicit(const char *text,
                                          bool assert_irreducible,
                                          struct SintCurve **out);

/**
 * Parse comma-separated rational functions of t.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SintStatus sint_curve_parse_param(const char *text,
                                       bool assert_proper,
                                       struct SintCurve **out);

/**
 * # Safety
 * `curve` must be null or a handle from a `sint_curve_parse_*` call that
 * has not been freed.
 */
void sint_curve_free(struct SintCurve *curve);

/**
 * Decide the curve for the comma-separated prime list `primes`.
 *
 * # Safety
 * `curve` must be a live handle, `primes` null or a NUL-terminated string,
 * and `out` a valid pointer.
 */
enum SintStatus sint_decide(const struct SintCurve *curve,
                            const char *primes,
                            uint64_t bound,
                            struct SintVerdict **out);

/**
 * # Safety
 * `verdict` must be a live handle.
 */
enum SintVerdictKind sint_verdict_kind(const struct SintVerdict *verdict);

/**
 * The verdict as a JSON report, in the same schema as `sintegral decide`.
 *
 * # Safety
 * `verdict` must be a live handle and `out` a valid pointer.
 */
enum SintStatus sint_verdict_to_json(const struct SintVerdict *verdict, char **out);

/**
 * # Safety
 * `verdict` must be null or a live handle.
 */
void sint_verdict_free(struct SintVerdict *verdict);

/**
 * Decide and, when infinite, list `count` verified points, as JSON.
 *
 * # Safety
 * `curve` must be a live handle, `primes` null or a NUL-terminated string,
 * and `out` a valid pointer.
 */
enum SintStatus sint_generate_json(const struct SintCurve *curve,
                                   const char *primes,
                                   uint64_t bound,
                                   size_t count,
                                   char **out);

/**
 * All S-integral points in the search lattice up to `bound`, as JSON.
 *
 * # Safety
 * `curve` must be a live handle, `primes` null or a NUL-terminated string,
 * and `out` a valid pointer.
 */
enum SintStatus sint_enumerate_json(const struct SintCurve *curve,
                                    const char *primes,
                                    uint64_t bound,
                                    char **out);

/**
 * The message for the last failed call on this thread, or null.
 * The pointer stays valid until the next call into this library.
 */
const char *sint_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void sint_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINTEGRAL_H */
