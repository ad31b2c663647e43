#ifndef WEYL_H
#define WEYL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Commutator evaluation strategy. `All` runs every strategy and reports
 * `MethodDisagreement` unless they coincide.
 */
typedef enum WeylMethod {
  WEYL_METHOD_DIRECT = 0,
  WEYL_METHOD_SERIES = 1,
  WEYL_METHOD_GROUPED = 2,
  WEYL_METHOD_FLAT = 3,
  WEYL_METHOD_ALL = 4,
} WeylMethod;

/**
 * Result code of every exported function.
 */
typedef enum WeylStatus {
  WEYL_STATUS_OK = 0,
  WEYL_STATUS_NULL_POINTER = 1,
  WEYL_STATUS_INVALID_UTF8 = 2,
  WEYL_STATUS_PARSE_ERROR = 3,
  WEYL_STATUS_INDEX_OUT_OF_RANGE = 4,
  WEYL_STATUS_MODE_ERROR = 5,
  WEYL_STATUS_CONTEXT_MISMATCH = 6,
  WEYL_STATUS_INVALID_ARGUMENT = 7,
  WEYL_STATUS_METHOD_DISAGREEMENT = 8,
  WEYL_STATUS_OVERFLOW = 9,
  WEYL_STATUS_INTERNAL = 10,
} WeylStatus;

/**
 * Algebra settings: number of pairs, exponent mode and truncation order.
 */
typedef struct WeylContext WeylContext;

/**
 * An element in pq-normal order.
 */
typedef struct WeylElement WeylElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context with `n_pairs` canonical pairs. `laurent` enables
 * negative exponents. A negative `trunc` means exact coefficients, which
 * Laurent mode rejects; otherwise coefficients are kept modulo
 * `c^(trunc+1)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum WeylStatus weyl_context_new(uint32_t n_pairs,
                                 bool laurent,
                                 int64_t trunc,
                                 struct WeylContext **out);

/**
 * Releases a context. Null is ignored.
 *
 * # Safety
 * `ctx` must be null or a handle from [`weyl_context_new`] not yet freed.
 */
void weyl_context_free(struct WeylContext *ctx);

/**
 * Parses `src` and normal-orders it in `ctx`.
 *
 * # Safety
 * `ctx` must be a live context, `src` a NUL-terminated string and `out`
 * writable storage for one handle.
 */
enum WeylStatus weyl_element_parse(const struct WeylContext *ctx,
                                   const char *src,
                                   struct WeylElement **out);

/**
 * Releases an element. Null is ignored.
 *
 * # Safety
 * `e` must be null or an element handle not yet freed.
 */
void weyl_element_free(struct WeylElement *e);

/**
 * Renders `e` as text in the same form the parser accepts.
 *
 * # Safety
 * `e` must be a live element and `out` writable storage for one pointer.
 * The string is released with [`weyl_string_free`].
 */
enum WeylStatus weyl_element_render(const struct WeylElement *e, char **out);

/**
 * Renders `e` as a JSON document with its context.
 *
 * # Safety
 * Same as [`weyl_element_render`].
 */
enum WeylStatus weyl_element_to_json(const struct WeylElement *e, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void weyl_string_free(char *s);

/**
 * `a + b`.
 *
 * # Safety
 * `a` and `b` must be live elements and `out` writable storage for one handle.
 */
enum WeylStatus weyl_element_add(const struct WeylElement *a,
                                 const struct WeylElement *b,
                                 struct WeylElement **out);

/**
 * `a b`.
 *
 * # Safety
 * Same as [`weyl_element_add`].
 */
enum WeylStatus weyl_element_mul(const struct WeylElement *a,
                                 const struct WeylElement *b,
                                 struct WeylElement **out);

/**
 * Writes whether `a` and `b` are equal.
 *
 * # Safety
 * `a` and `b` must be live elements and `out` writable.
 */
enum WeylStatus weyl_element_equal(const struct WeylElement *a,
                                   const struct WeylElement *b,
                                   bool *out);

/**
 * `[a, b]` by the chosen method.
 *
 * # Safety
 * Same as [`weyl_element_add`].
 */
enum WeylStatus weyl_commutator(const struct WeylElement *a,
                                const struct WeylElement *b,
                                enum WeylMethod method,
                                struct WeylElement **out);

/**
 * The order-`k` term of the commutator series.
 *
 * # Safety
 * Same as [`weyl_element_add`].
 */
enum WeylStatus weyl_series_term(const struct WeylElement *a,
                                 const struct WeylElement *b,
                                 uint32_t k,
                                 struct WeylElement **out);

/**
 * Poisson bracket `{a, b}`, the coefficient of `c` in `[a, b]`.
 *
 * # Safety
 * Same as [`weyl_element_add`].
 */
enum WeylStatus weyl_poisson_leading(const struct WeylElement *a,
                                     const struct WeylElement *b,
                                     struct WeylElement **out);

/**
 * `k`-th derivative of `e` in `p_index`.
 *
 * # Safety
 * `e` must be a live element and `out` writable storage for one handle.
 */
enum WeylStatus weyl_d_p(const struct WeylElement *e,
                         uint32_t index,
                         uint32_t k,
                         struct WeylElement **out);

/**
 * `k`-th derivative of `e` in `q_index`.
 *
 * # Safety
 * Same as [`weyl_d_p`].
 */
enum WeylStatus weyl_d_q(const struct WeylElement *e,
                         uint32_t index,
                         uint32_t k,
                         struct WeylElement **out);

/**
 * Sum of the multinomial coefficients over all multi-indices of length
 * `n` and total `k`, which is `n^k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_multinomial_sum(uint32_t n, uint32_t k, uint64_t *out);

/**
 * Number of multi-indices of length `n` and total `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WeylStatus weyl_composition_count(uint32_t n, uint32_t k, uint64_t *out);

/**
 * Message of the last failed call on this thread, or null after a
 * successful call. Release with [`weyl_string_free`].
 */
char *weyl_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *weyl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEYL_H */
