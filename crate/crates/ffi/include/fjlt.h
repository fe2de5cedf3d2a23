#ifndef FJLT_H
#define FJLT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Covering model selector for [`fjlt_chain_dimension`].
 */
typedef enum FjltCoveringKind {
  /*
   `a` = number of points.
   */
  FJLT_COVERING_KIND_FINITE = 0,
  /*
   `a` = subspace dimension.
   */
  FJLT_COVERING_KIND_SUBSPACE = 1,
  /*
   `a` = ambient dimension, `b` = sparsity.
   */
  FJLT_COVERING_KIND_SPARSE = 2,
} FjltCoveringKind;

/*
 Result code of every fallible call.
 */
typedef enum FjltStatus {
  FJLT_STATUS_OK = 0,
  FJLT_STATUS_DIMENSION = 1,
  FJLT_STATUS_INDEX = 2,
  FJLT_STATUS_INFEASIBLE_DIMENSIONS = 3,
  FJLT_STATUS_ARGUMENT = 4,
  FJLT_STATUS_FORMAT = 5,
  FJLT_STATUS_RESOURCE = 6,
  FJLT_STATUS_FIT = 7,
  FJLT_STATUS_RANGE = 8,
  FJLT_STATUS_TRUNCATION_UNCERTAIN = 9,
  FJLT_STATUS_IO = 10,
  FJLT_STATUS_NULL_POINTER = 11,
  FJLT_STATUS_BUFFER_TOO_SMALL = 12,
  FJLT_STATUS_PANIC = 13,
} FjltStatus;

/*
 Opaque transform plan.
 */
typedef struct FjltPlanHandle FjltPlanHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or null after a
 success. Valid until the next call on the same thread.
 */
const char *fjlt_last_error_message(void);

/*
 Builds a plan mapping `R^d` to `R^k`.

 # Safety
 `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum FjltStatus fjlt_plan_new(size_t d, size_t k, uint64_t seed, struct FjltPlanHandle **out);

/*
 Releases a plan. Null is ignored.

 # Safety
 `plan` must come from this library and not have been freed already.
 */
void fjlt_plan_free(struct FjltPlanHandle *plan);

/*
 Input dimension `d`, or 0 for a null handle.

 # Safety
 `plan` must be null or a live handle.
 */
size_t fjlt_plan_input_dim(const struct FjltPlanHandle *plan);

/*
 Output dimension `k`, or 0 for a null handle.

 # Safety
 `plan` must be null or a live handle.
 */
size_t fjlt_plan_output_dim(const struct FjltPlanHandle *plan);

/*
 Master seed the plan was built from.

 # Safety
 `plan` must be null or a live handle.
 */
uint64_t fjlt_plan_seed(const struct FjltPlanHandle *plan);

/*
 Embeds `x` (length `x_len == d`) into `out` (length `out_len == k`).

 # Safety
 `x` and `out` must point to `x_len` and `out_len` valid doubles.
 */
enum FjltStatus fjlt_plan_apply(const struct FjltPlanHandle *plan,
                                const double *x,
                                size_t x_len,
                                double *out,
                                size_t out_len);

/*
 Writes the binary plan into `buf`. `written` always receives the
 required length; pass a null `buf` to query it.

 # Safety
 `buf` must be null or point to `buf_len` writable bytes; `written` must
 be valid.
 */
enum FjltStatus fjlt_plan_serialize(const struct FjltPlanHandle *plan,
                                    uint8_t *buf,
                                    size_t buf_len,
                                    size_t *written);

/*
 Rebuilds a plan from bytes produced by [`fjlt_plan_serialize`].

 # Safety
 `bytes` must point to `len` readable bytes; `out` must be valid.
 */
enum FjltStatus fjlt_plan_deserialize(const uint8_t *bytes,
                                      size_t len,
                                      struct FjltPlanHandle **out);

/*
 Orthonormal Walsh-Hadamard transform of `v` in place; `len` must be a
 power of two.

 # Safety
 `v` must point to `len` writable doubles.
 */
enum FjltStatus fjlt_fwht(double *v, size_t len);

/*
 Target dimension from the chaining bound. `series` may be null.

 # Safety
 `k_out` must be valid; `series` must be null or valid.
 */
enum FjltStatus fjlt_chain_dimension(enum FjltCoveringKind kind,
                                     uint64_t a,
                                     uint64_t b,
                                     double eps,
                                     double p,
                                     double c,
                                     uint64_t *k_out,
                                     double *series);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FJLT_H */
