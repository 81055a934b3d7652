#ifndef BJORTH_H
#define BJORTH_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum BjStatus {
  BJ_STATUS_OK = 0,
  BJ_STATUS_NULL_POINTER = 1,
  BJ_STATUS_INVALID_UTF8 = 2,
  BJ_STATUS_PARSE = 3,
  BJ_STATUS_DIMENSION_MISMATCH = 4,
  BJ_STATUS_OUT_OF_RANGE = 5,
  BJ_STATUS_ZERO_VECTOR = 6,
  BJ_STATUS_UNSUPPORTED = 7,
  BJ_STATUS_DEGENERATE = 8,
  BJ_STATUS_HYPOTHESIS_UNMET = 9,
  BJ_STATUS_INTERNAL = 99,
} BjStatus;

typedef struct BjOperator BjOperator;

typedef struct BjSpace BjSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next call into this library from the same thread.
 */
const char *bj_last_error(void);

/**
 * Parse a preset name such as `linf(3)` or `regular_2n_gon(4)`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum BjStatus bj_space_from_preset(const char *name, struct BjSpace **out);

/**
 * Build a space from its JSON description (floating point).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BjStatus bj_space_from_json(const char *json, struct BjSpace **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. NULL is ignored.
 */
void bj_space_free(struct BjSpace *s);

/**
 * Dimension of the space, or 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
uintptr_t bj_space_dim(const struct BjSpace *s);

/**
 * # Safety
 * `x` must point to `len` doubles; `out` must be writable.
 */
enum BjStatus bj_norm(const struct BjSpace *s, const double *x, uintptr_t len, double *out);

/**
 * Number of extreme supporting functionals at `x`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be writable.
 */
enum BjStatus bj_support_count(const struct BjSpace *s,
                               const double *x,
                               uintptr_t len,
                               uintptr_t *out);

/**
 * Decide `x ⊥_eps y`; `eps = 0` is Birkhoff-James orthogonality. The
 * signed margin is written to `margin` when it is not NULL.
 *
 * # Safety
 * `x` and `y` must point to `len` doubles; `holds` must be writable.
 */
enum BjStatus bj_eps_orthogonal(const struct BjSpace *s,
                                const double *x,
                                const double *y,
                                uintptr_t len,
                                double eps,
                                double tol,
                                bool *holds,
                                double *margin);

/**
 * # Safety
 * `out` must be writable.
 */
enum BjStatus bj_epsilon_x(const struct BjSpace *s, double *out);

/**
 * Parse an operator from JSON (matrix plus domain and codomain spaces).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BjStatus bj_operator_from_json(const char *json, struct BjOperator **out);

/**
 * Row-major `rows x cols` matrix between two spaces. The spaces are
 * copied; the caller keeps ownership of them.
 *
 * # Safety
 * `data` must point to `rows * cols` doubles; `out` must be writable.
 */
enum BjStatus bj_operator_new(const double *data,
                              uintptr_t rows,
                              uintptr_t cols,
                              const struct BjSpace *domain,
                              const struct BjSpace *codomain,
                              struct BjOperator **out);

/**
 * # Safety
 * `o` must come from this library and not be used afterwards. NULL is ignored.
 */
void bj_operator_free(struct BjOperator *o);

/**
 * Does the operator preserve eps-orthogonality at `x`?
 *
 * # Safety
 * `x` must point to `len` doubles; `holds` must be writable.
 */
enum BjStatus bj_preserves_eps_at(const struct BjOperator *o,
                                  const double *x,
                                  uintptr_t len,
                                  double eps,
                                  uint64_t seed,
                                  bool *holds);

/**
 * Writes `k > 0` when the operator is `k` times an isometry, else 0.
 *
 * # Safety
 * `k` must be writable.
 */
enum BjStatus bj_is_scalar_isometry(const struct BjOperator *o, double tol, double *k);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BJORTH_H */
