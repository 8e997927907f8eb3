/*
 * C interface to the convolutional group-sparse coding library.
 *
 * All objects are opaque handles created by *_create / *_read and released
 * with the matching *_destroy. Every fallible call returns a cgsc_status;
 * on failure cgsc_last_error() returns a message for the calling thread,
 * valid until the next failing call on that thread.
 */
#ifndef CGSC_CGSC_H
#define CGSC_CGSC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CGSC_BUILDING_LIBRARY)
#    define CGSC_API __declspec(dllexport)
#  else
#    define CGSC_API __declspec(dllimport)
#  endif
#else
#  define CGSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cgsc_status {
  CGSC_OK = 0,
  CGSC_ERR_DIMENSION_MISMATCH = 1,
  CGSC_ERR_NEGATIVE_WEIGHT = 2,
  CGSC_ERR_NON_FINITE_ENTRY = 3,
  CGSC_ERR_EMPTY_GROUP_LABEL = 4,
  CGSC_ERR_INVALID_ARGUMENT = 5,
  CGSC_ERR_ZERO_KERNEL = 6,
  CGSC_ERR_ZERO_WEIGHTS = 7,
  CGSC_ERR_NOT_NORMALIZED = 8,
  CGSC_ERR_NORM_BOUND_VIOLATED = 9,
  CGSC_ERR_INVALID_SUBSET = 10,
  CGSC_ERR_PLACEMENT_FAILED = 11,
  CGSC_ERR_SHAPE_MISMATCH = 12,
  CGSC_ERR_BAD_MAGIC = 13,
  CGSC_ERR_TRUNCATED_PAYLOAD = 14,
  CGSC_ERR_UNSUPPORTED_NDIMS = 15,
  CGSC_ERR_IO_FAILURE = 16,
  CGSC_ERR_CONFIG = 17,
  CGSC_ERR_INTERNAL = 99
} cgsc_status;

CGSC_API const char* cgsc_last_error(void);
CGSC_API const char* cgsc_status_name(cgsc_status status);

/* ---- tensors (float64, 2 or 3 dims, row-major) ------------------------- */

typedef struct cgsc_tensor cgsc_tensor;

CGSC_API cgsc_status cgsc_tensor_create(size_t ndims, const uint32_t* dims, const double* data,
                                        cgsc_tensor** out);
CGSC_API cgsc_status cgsc_tensor_read(const char* path, cgsc_tensor** out);
CGSC_API cgsc_status cgsc_tensor_write(const cgsc_tensor* t, const char* path);
CGSC_API void cgsc_tensor_destroy(cgsc_tensor* t);
CGSC_API size_t cgsc_tensor_ndims(const cgsc_tensor* t);
CGSC_API uint32_t cgsc_tensor_dim(const cgsc_tensor* t, size_t axis);
CGSC_API size_t cgsc_tensor_size(const cgsc_tensor* t);
CGSC_API const double* cgsc_tensor_data(const cgsc_tensor* t);

/* ---- group label volumes (int32, M x N x K) ---------------------------- */

typedef struct cgsc_labels cgsc_labels;

CGSC_API cgsc_status cgsc_labels_create(const uint32_t dims[3], const int32_t* data,
                                        cgsc_labels** out);
CGSC_API cgsc_status cgsc_labels_read(const char* path, cgsc_labels** out);
CGSC_API cgsc_status cgsc_labels_write(const cgsc_labels* l, const char* path);
CGSC_API void cgsc_labels_destroy(cgsc_labels* l);

/* ---- solver ------------------------------------------------------------- */

typedef struct cgsc_solver_options {
  int max_iters;
  double rel_tol;
  double step;
  int enforce_norm_bound;
  int trace_every;
  int project_before_prox;
} cgsc_solver_options;

CGSC_API void cgsc_solver_options_default(cgsc_solver_options* out);

typedef struct cgsc_trace_entry {
  int iter;
  double objective;
  double fidelity;
  double regularizer;
  double iterate_change;
} cgsc_trace_entry;

typedef struct cgsc_trace cgsc_trace;

CGSC_API size_t cgsc_trace_length(const cgsc_trace* trace);
CGSC_API cgsc_status cgsc_trace_entry_at(const cgsc_trace* trace, size_t index,
                                         cgsc_trace_entry* out);
CGSC_API void cgsc_trace_destroy(cgsc_trace* trace);

/*
 * Normalizes `kernels` (K x P1 x P2, or one P1 x P2 kernel) against w, then
 * solves for K x M x N non-negative feature maps. `w` may be NULL (all
 * ones); `labels` may be NULL (singleton groups); `options` may be NULL
 * (defaults); `trace_out` may be NULL.
 */
CGSC_API cgsc_status cgsc_solve(const cgsc_tensor* s, const cgsc_tensor* w,
                                const cgsc_tensor* kernels, const cgsc_labels* labels,
                                double lambda, const cgsc_solver_options* options,
                                cgsc_tensor** x_out, cgsc_trace** trace_out);

/*
 * Operator-norm estimate of x -> w .* sum_k h_k (*) x_k. When `normalize`
 * is non-zero the kernels are normalized against w first.
 */
CGSC_API cgsc_status cgsc_operator_norm(const cgsc_tensor* kernels, const cgsc_tensor* w,
                                        int normalize, int iters, double tol, uint64_t seed,
                                        double* estimate);

/* ---- configuration and commands ---------------------------------------- */

typedef struct cgsc_config cgsc_config;

CGSC_API cgsc_status cgsc_config_create(cgsc_config** out);
CGSC_API void cgsc_config_destroy(cgsc_config* cfg);
CGSC_API cgsc_status cgsc_config_load(cgsc_config* cfg, const char* path);
CGSC_API cgsc_status cgsc_config_set(cgsc_config* cfg, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf. Returns CGSC_ERR_CONFIG if the
 * key is unset and CGSC_ERR_INVALID_ARGUMENT if buf is too small. */
CGSC_API cgsc_status cgsc_config_get(const cgsc_config* cfg, const char* key, char* buf,
                                     size_t buflen);

typedef struct cgsc_solve_summary {
  int iterations;
  int converged;
  double objective;
  double fidelity;
  double regularizer;
  double operator_norm; /* negative when the bound was not checked */
} cgsc_solve_summary;

typedef struct cgsc_eval_summary {
  double rel_l2;
  double support_iou;
  double precision;
  double recall;
  double f1;
  double mean_match_distance;
  size_t true_positives;
  size_t false_positives;
  size_t false_negatives;
} cgsc_eval_summary;

/* `seed_used` and the summaries may be NULL. cgsc_run_synth stores the
 * resolved seed back into cfg. */
CGSC_API cgsc_status cgsc_run_synth(cgsc_config* cfg, uint64_t* seed_used);
CGSC_API cgsc_status cgsc_run_solve(const cgsc_config* cfg, cgsc_solve_summary* summary);
CGSC_API cgsc_status cgsc_run_eval(const cgsc_config* cfg, cgsc_eval_summary* summary);
CGSC_API cgsc_status cgsc_run_norm_check(const cgsc_config* cfg, double* estimate);

/* Caps worker threads for numeric kernels; 0 restores the default. */
CGSC_API void cgsc_set_threads(size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* CGSC_CGSC_H */
