#ifndef STABKIT_H
#define STABKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum StkStatus {
  STK_STATUS_OK = 0,
  STK_STATUS_NULL_POINTER = 1,
  STK_STATUS_INVALID_INPUT = 2,
  STK_STATUS_NUMERICAL = 3,
  STK_STATUS_INVALID_UTF8 = 4,
  STK_STATUS_PANIC = 5,
} StkStatus;

typedef enum StkClass {
  STK_CLASS_STABLE = 0,
  STK_CLASS_POLYSTABLE = 1,
  STK_CLASS_STRICTLY_SEMISTABLE = 2,
  STK_CLASS_UNSTABLE = 3,
} StkClass;

typedef enum StkFlowStatus {
  STK_FLOW_STATUS_BALANCED = 0,
  STK_FLOW_STATUS_ESCAPED = 1,
  STK_FLOW_STATUS_STALLED = 2,
} StkFlowStatus;

typedef enum StkFlowOutcome {
  STK_FLOW_OUTCOME_BALANCED_IN_ORBIT = 0,
  STK_FLOW_OUTCOME_LIMIT_OUTSIDE_ORBIT = 1,
  STK_FLOW_OUTCOME_ESCAPED = 2,
  STK_FLOW_OUTCOME_INCONCLUSIVE = 3,
} StkFlowOutcome;

/*
 Distinct weighted points on the sphere.
 */
typedef struct StkPointConfig StkPointConfig;

/*
 A slope family with its Hilbert data computed.
 */
typedef struct StkSlopeFamily StkSlopeFamily;

/*
 Torus weights with the support of a vector.
 */
typedef struct StkWeightSystem StkWeightSystem;

/*
 Hilbert–Mumford verdict. `weight` is meaningful only when `has_witness`.
 */
typedef struct StkVerdict {
  enum StkClass class_;
  bool has_witness;
  int64_t weight;
} StkVerdict;

typedef struct StkFlowSummary {
  enum StkFlowStatus status;
  enum StkFlowOutcome outcome;
  size_t iterations;
  double final_moment_norm;
} StkFlowSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *stk_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void stk_string_free(char *s);

/*
 Builds a weight system from `count` weights of `dim` coordinates each,
 stored row-major. A NULL `support` means every weight is supported.

 # Safety
 `weights` must hold `dim * count` values and `support` (if not NULL)
 `support_len` values; `out` must be writable.
 */
enum StkStatus stk_weight_system_new(size_t dim,
                                     const int64_t *weights,
                                     size_t count,
                                     const size_t *support,
                                     size_t support_len,
                                     struct StkWeightSystem **out);

/*
 # Safety
 `ws` must come from [`stk_weight_system_new`] and not have been freed.
 */
void stk_weight_system_free(struct StkWeightSystem *ws);

/*
 Classifies the weight system. When unstable, the destabilizing
 one-parameter subgroup is written to `witness`, which must hold `dim`
 entries (it may be NULL if not wanted).

 # Safety
 Pointers must be valid; `witness`, if not NULL, must hold `dim` values.
 */
enum StkStatus stk_hm_classify(const struct StkWeightSystem *ws,
                               struct StkVerdict *out,
                               int64_t *witness);

/*
 Builds a configuration of `n` unit vectors (`3n` doubles) with positive
 multiplicities.

 # Safety
 `points` must hold `3 * n` values and `multiplicities` `n` values.
 */
enum StkStatus stk_points_new(const double *points,
                              const uint32_t *multiplicities,
                              size_t n,
                              struct StkPointConfig **out);

/*
 # Safety
 `p` must come from [`stk_points_new`] and not have been freed.
 */
void stk_points_free(struct StkPointConfig *p);

/*
 Combinatorial verdict. `witness` receives the index of the overweight
 point, or -1.

 # Safety
 Pointers must be valid; `witness` may be NULL.
 */
enum StkStatus stk_points_classify(const struct StkPointConfig *p,
                                   enum StkClass *class_,
                                   int64_t *witness);

/*
 Runs the moment-map flow to tolerance `tol` (0 for the default).

 # Safety
 Pointers must be valid.
 */
enum StkStatus stk_points_flow(const struct StkPointConfig *p,
                               double tol,
                               size_t max_iters,
                               struct StkFlowSummary *out);

/*
 Parses a family description (the JSON accepted by `stabkit slope`).

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum StkStatus stk_slope_family_from_json(const char *json, struct StkSlopeFamily **out);

/*
 # Safety
 `f` must come from [`stk_slope_family_from_json`] and not have been freed.
 */
void stk_slope_family_free(struct StkSlopeFamily *f);

/*
 `μ(X)` as an exact `"p/q"` string.

 # Safety
 Pointers must be valid.
 */
enum StkStatus stk_slope_mu(const struct StkSlopeFamily *f, char **out);

/*
 `μ_c` of the subscheme at the rational `c` (given as `"p/q"`), as an exact
 `"p/q"` string.

 # Safety
 Pointers must be valid; `c` must be NUL-terminated.
 */
enum StkStatus stk_slope_mu_c(const struct StkSlopeFamily *f, const char *c, char **out);

/*
 Full slope verdict as JSON.

 # Safety
 Pointers must be valid.
 */
enum StkStatus stk_slope_classify_json(const struct StkSlopeFamily *f, char **out);

/*
 Runs a command-line invocation in process. `args_json` is a JSON array of
 argument strings without the program name, e.g.
 `["hm", "weights.json", "--json"]`. Standard output is returned through
 `out` (always set, possibly empty); the return value is the exit code
 (0 success, 2 input error, 3 numerical abort), or -1 if `args_json` is
 unusable.

 # Safety
 `args_json` must be NUL-terminated; `out` must be writable.
 */
int stk_run_json(const char *args_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABKIT_H */
