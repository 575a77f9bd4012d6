#ifndef Z8SUMS_H
#define Z8SUMS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Z8Mode {
  Z8_MODE_PLAIN = 0,
  Z8_MODE_DIFFERENT = 1,
} Z8Mode;

typedef enum Z8Status {
  Z8_STATUS_OK = 0,
  Z8_STATUS_NULL_POINTER = 1,
  Z8_STATUS_INVALID_ARGUMENT = 2,
  Z8_STATUS_PRECONDITION = 3,
  Z8_STATUS_HYPOTHESIS = 4,
  Z8_STATUS_NOT_COPRIME = 5,
  Z8_STATUS_TOO_LARGE = 6,
  Z8_STATUS_INTERNAL = 7,
} Z8Status;

/**
 * A modulus c of Z[ω₈] with its residue system.
 */
typedef struct Z8Modulus Z8Modulus;

/**
 * The outcome of an identity evaluation.
 */
typedef struct Z8Report Z8Report;

typedef struct Z8Complex {
  double re;
  double im;
} Z8Complex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *z8_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length,
 * or 0 when the last call succeeded.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null.
 */
size_t z8_last_error_message(char *buf, size_t len);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void z8_string_free(char *s);

/**
 * Builds the modulus with generator `coeffs`.
 *
 * # Safety
 * `coeffs` must point to four values; `result` must be writable.
 */
enum Z8Status z8_modulus_new(const int64_t *coeffs, struct Z8Modulus **result);

/**
 * # Safety
 * `m` must come from [`z8_modulus_new`] or be null.
 */
void z8_modulus_free(struct Z8Modulus *m);

/**
 * # Safety
 * `m` must be a live handle; `norm` must be writable.
 */
enum Z8Status z8_modulus_norm(const struct Z8Modulus *m, uint64_t *norm);

/**
 * (a/c)_k for k ∈ {2, 4} as the exponent j of i^j, or −1 when a and c
 * are not coprime.
 *
 * # Safety
 * `a` and `c` must point to four values; `exponent` must be writable.
 */
enum Z8Status z8_power_symbol(const int64_t *a, const int64_t *c, uint32_t k, int32_t *exponent);

/**
 * Σ_{x mod c} ψ_c(f(x)) by enumeration; `poly` is "coef:exp,...".
 *
 * # Safety
 * `poly` must be a NUL-terminated string; `m` a live handle; `value`
 * writable.
 */
enum Z8Status z8_complete_sum(const char *poly,
                              const struct Z8Modulus *m,
                              uint32_t mode,
                              struct Z8Complex *value);

/**
 * The twisted Kloosterman sum S₄(r, s; c).
 *
 * # Safety
 * `r` and `s` must point to four values; `m` a live handle; `value`
 * writable.
 */
enum Z8Status z8_kloosterman_s4(const int64_t *r,
                                const int64_t *s,
                                const struct Z8Modulus *m,
                                uint32_t mode,
                                struct Z8Complex *value);

/**
 * The prime identity for Σψ(Ax⁴+Bx²) at the prime p.
 *
 * # Safety
 * `a`, `b` and `p` must point to four values; `report` writable.
 */
enum Z8Status z8_identity_prime(const int64_t *a,
                                const int64_t *b,
                                const int64_t *p,
                                uint32_t mode,
                                struct Z8Report **report);

/**
 * The composite decomposition of Σψ_c(Ax⁴+Bx²) for c ≡ 1 mod 4.
 *
 * # Safety
 * `a` and `b` must point to four values; `m` a live handle; `report`
 * writable.
 */
enum Z8Status z8_identity_composite(const int64_t *a,
                                    const int64_t *b,
                                    const struct Z8Modulus *m,
                                    uint32_t mode,
                                    struct Z8Report **report);

/**
 * Absolute residual and the scale √N(c) it is judged against.
 *
 * # Safety
 * `r` must be a live handle; `residual` and `scale` writable.
 */
enum Z8Status z8_report_residual(const struct Z8Report *r, double *residual, double *scale);

/**
 * The report as JSON; free the string with [`z8_string_free`].
 *
 * # Safety
 * `r` must be a live handle; `json` writable.
 */
enum Z8Status z8_report_json(const struct Z8Report *r, char **json);

/**
 * # Safety
 * `r` must come from this library or be null.
 */
void z8_report_free(struct Z8Report *r);

/**
 * S(f, X) = Σ_{c ≤ X} Σ_{x mod c} e(f(x)/c) for f with integer
 * coefficients.
 *
 * # Safety
 * `poly` must be a NUL-terminated string; `value` writable.
 */
enum Z8Status z8_patterson_sum(const char *poly, uint64_t x, struct Z8Complex *value);

/**
 * Least-squares slope of log |value| against log X over `n` points.
 *
 * # Safety
 * `xs` and `abs` must hold `n` values; `slope` and `stderr` writable.
 */
enum Z8Status z8_fit_exponent(const double *xs,
                              const double *abs,
                              size_t n,
                              double *slope,
                              double *stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* Z8SUMS_H */
