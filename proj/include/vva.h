/*
 * vva - randomized vector-valued approximation in mixed-norm sequence
 * spaces: norm evaluation, budgeted query oracles, adaptive and
 * non-adaptive approximation algorithms, hard-instance generators and a
 * Monte Carlo experiment harness.
 *
 * C interface of the shared library. All objects are opaque handles;
 * every fallible call returns VVA_OK or a negative status code, with a
 * thread-local message available from vva_last_error(). Norm exponents
 * are passed as double values in [1, inf]; use INFINITY (or HUGE_VAL)
 * for inf. Matrix indices are 0-based.
 */

#ifndef VVA_H
#define VVA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  VVA_OK = 0,
  VVA_ERR_ARGUMENT = -1, /* invalid parameter or malformed input */
  VVA_ERR_INDEX = -2,    /* index out of range */
  VVA_ERR_BUDGET = -3,   /* query budget exceeded */
  VVA_ERR_IO = -4,       /* file could not be read or written */
  VVA_ERR_SIZE = -5,     /* exact enumeration too large */
  VVA_ERR_STATE = -6,    /* requested result not available */
};

typedef struct vva_matrix vva_matrix;
typedef struct vva_report vva_report;

const char* vva_version(void);

/* Message describing the most recent failure on this thread. */
const char* vva_last_error(void);

/* ---- matrices ------------------------------------------------------- */

/* data is row-major of length rows*cols, or NULL for a zero matrix. */
int vva_matrix_create(size_t rows, size_t cols, const double* data,
                      vva_matrix** out);
/* Text format: first line "N1 N2", then N1 rows of N2 decimal reals. */
int vva_matrix_load(const char* path, vva_matrix** out);
int vva_matrix_save(const vva_matrix* m, const char* path);
size_t vva_matrix_rows(const vva_matrix* m);
size_t vva_matrix_cols(const vva_matrix* m);
int vva_matrix_get(const vva_matrix* m, size_t i, size_t j, double* out);
void vva_matrix_free(vva_matrix* m);

/* ---- mixed norms ----------------------------------------------------- */

/* Outer p-norm (normalized over rows) of inner u-norms (normalized over
 * columns). */
int vva_mixed_norm(const vva_matrix* m, double p, double u, double* out);

/* Operator norm of the identity embedding:
 * N1^((1/p-1/q)+) * N2^((1/u-1/v)+). */
int vva_embedding_norm(size_t rows, size_t cols, double p, double q, double u,
                       double v, double* out);

/* ---- algorithms ------------------------------------------------------ */

/* Default median repetition count ceil(11.1 * log2(N1+N2)). */
int vva_default_repetitions(size_t rows, size_t cols, uint32_t* out);

/* Exact query count of one a2 run at budget n with m repetitions
 * (doubled for the iterated a3) and the closed-form upper bound
 * (m+1)n + m*N1 + N2 (also doubled). */
int vva_query_cost(size_t rows, size_t cols, uint64_t n, uint32_t m,
                   int iterated, uint64_t* exact, uint64_t* bound);

/* Runs one algorithm against f. algorithm is one of "dispatch", "a2",
 * "a3", "zero", "fixed_rows", "random_cells". m = 0 selects the default
 * repetitions. out_approx (optional) receives the produced matrix;
 * out_queries / out_error (optional) the exact query count and the
 * output-space error |f - output| in the (q, v) mixed norm. */
int vva_approximate(const vva_matrix* f, const char* algorithm, double p,
                    double q, double u, double v, uint64_t budget, uint32_t m,
                    uint64_t seed, vva_matrix** out_approx,
                    uint64_t* out_queries, double* out_error);

/* ---- hard instances --------------------------------------------------- */

/* One draw from lower-bound input family 1..6 on an N1 x N2 grid with
 * input-space exponents (p, u), tuned against budget n (requires
 * 21*n < N1*N2). draw_index selects independent draws under one seed. */
int vva_sample_instance(int family, size_t rows, size_t cols, double p,
                        double u, uint64_t n, uint64_t seed,
                        uint64_t draw_index, vva_matrix** out);

/* Average-case lower bound of family 1..4 evaluated at eval_budget
 * queries. *applicable is set to 0 (with *value untouched) when the
 * construction requires 4*eval_budget < system size and that fails. */
int vva_lower_bound(int family, size_t rows, size_t cols, double p, double q,
                    double u, double v, uint64_t n, uint64_t eval_budget,
                    int* applicable, double* value);

/* ---- experiments ------------------------------------------------------ */

typedef struct {
  size_t rows, cols;
  double p, q, u, v;
  const uint64_t* budgets;
  size_t num_budgets;
  int measure;           /* instance family 1..6 */
  const char* algorithm; /* as in vva_approximate */
  uint32_t trials;
  double moment;   /* error moment w >= 1 */
  uint32_t m;      /* 0 = default repetitions */
  uint64_t seed;
  uint32_t threads; /* trial-level parallelism; <= 1 serial */
} vva_rates_config;

/* Monte Carlo error sweep over the budget grid; one record per budget. */
int vva_run_rates(const vva_rates_config* cfg, vva_report** out);

/* Adaptive/non-adaptive gap experiment (budgets each >= 64). */
int vva_run_gap(const uint64_t* budgets, size_t num_budgets, uint32_t trials,
                uint64_t seed, uint32_t threads, vva_report** out);

/* Repeated norm estimation on row `row` of f: mean absolute estimation
 * error of the sampled v-norm at each sample count. u labels the
 * theoretical rate in the report. */
int vva_run_estimate_study(const vva_matrix* f, size_t row, double u, double v,
                           const uint64_t* sample_counts, size_t num_counts,
                           uint32_t trials, uint64_t seed, vva_report** out);

/* ---- reports ----------------------------------------------------------- */

size_t vva_report_size(const vva_report* r);

/* format is "csv" or "json". The returned string is owned by the caller;
 * release it with vva_free_string. */
int vva_report_to_string(const vva_report* r, const char* format, char** out);
int vva_report_save(const vva_report* r, const char* path, const char* format);

/* Least-squares slope of log2(mean error) against log2(budget); returns
 * VVA_ERR_STATE when no fit was produced (fewer than 3 positive cells). */
int vva_report_fit(const vva_report* r, double* slope, double* intercept,
                   double* r2);
int vva_report_fit_cells(const vva_report* r, size_t* used, size_t* excluded);

/* Gap summary: one point per budget with the non-adaptive/adaptive error
 * ratio and its standard error. */
size_t vva_report_gap_points(const vva_report* r);
int vva_report_gap_point(const vva_report* r, size_t index, uint64_t* n,
                         double* ratio, double* ratio_std_error);

void vva_report_free(vva_report* r);
void vva_free_string(char* s);

/* ---- selftest ----------------------------------------------------------- */

/* Runs the cross-module invariant suite; returns the number of failed
 * checks (>= 0) or a negative status. Prints one line per check to
 * stdout when verbose is nonzero. */
int vva_selftest(uint64_t seed, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* VVA_H */
