/* C interface of the sharp restart library.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a sharp_status; on
 * failure sharp_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread).
 */
#ifndef SHARP_SHARP_H
#define SHARP_SHARP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SHARP_BUILDING_LIBRARY)
#    define SHARP_API __declspec(dllexport)
#  else
#    define SHARP_API __declspec(dllimport)
#  endif
#else
#  define SHARP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sharp_status {
  SHARP_OK = 0,
  SHARP_ERR_INVALID_ARGUMENT = 1,
  SHARP_ERR_IO = 2,
  SHARP_ERR_PARSE = 3,
  SHARP_ERR_DIVERGENCE = 4,
  SHARP_ERR_UNAVAILABLE = 5, /* needs f*, regularity, or a distance that is not known */
  SHARP_ERR_INTERNAL = 6
} sharp_status;

typedef struct sharp_problem sharp_problem;
typedef struct sharp_trace sharp_trace;
typedef struct sharp_grid sharp_grid;

SHARP_API const char* sharp_version(void);
SHARP_API const char* sharp_last_error(void);
SHARP_API const char* sharp_status_name(sharp_status status);

/* ---- problems ---- */

typedef enum sharp_loss {
  SHARP_LOSS_LEAST_SQUARES = 0,
  SHARP_LOSS_LOGISTIC = 1,
  SHARP_LOSS_LASSO = 2,
  SHARP_LOSS_DUAL_SVM = 3
} sharp_loss;

typedef enum sharp_data_format { SHARP_FORMAT_CSV = 0, SHARP_FORMAT_LIBSVM = 1 } sharp_data_format;

SHARP_API sharp_status sharp_problem_quadratic(int64_t n, double kappa, uint64_t seed,
                                               sharp_problem** out);
SHARP_API sharp_status sharp_problem_norm_power(int64_t n, double r, double radius, uint64_t seed,
                                                sharp_problem** out);
SHARP_API sharp_status sharp_problem_abs(int64_t n, double weight, double radius, uint64_t seed,
                                         sharp_problem** out);
/* Synthetic design (rows x cols, column scales spanning sqrt(condition)).
 * `regularization` is the LASSO / dual SVM parameter, ignored otherwise. */
SHARP_API sharp_status sharp_problem_synthetic(sharp_loss loss, int64_t rows, int64_t cols,
                                               double condition, double noise, uint64_t seed,
                                               double regularization, sharp_problem** out);
SHARP_API sharp_status sharp_problem_from_dataset(const char* path, sharp_data_format format,
                                                  sharp_loss loss, double regularization,
                                                  sharp_problem** out);
/* Computes f* with a long restarted proximal-gradient run when it is unknown. */
SHARP_API sharp_status sharp_problem_attach_reference(sharp_problem* problem, double tolerance,
                                                      int64_t max_iterations);
SHARP_API void sharp_problem_free(sharp_problem* problem);

typedef struct sharp_problem_info {
  int64_t dimension;
  int has_regularity;
  double s, L, r, mu;    /* valid when has_regularity */
  double kappa, tau, q;  /* valid when has_regularity */
  int has_f_star;
  double f_star;
  double f_star_tolerance; /* 0 when f* is exact */
  double smoothness;       /* default L0 */
  double initial_value;    /* f at the default start */
  int has_distance;
} sharp_problem_info;

SHARP_API sharp_status sharp_problem_get_info(const sharp_problem* problem,
                                              sharp_problem_info* out);
/* Problem name, e.g. "quadratic"; owned by the handle. */
SHARP_API const char* sharp_problem_name(const sharp_problem* problem);
/* Newline-separated construction notes; owned by the handle. */
SHARP_API const char* sharp_problem_notes(const sharp_problem* problem);
SHARP_API sharp_status sharp_problem_default_start(const sharp_problem* problem, double* x,
                                                   int64_t length);
SHARP_API sharp_status sharp_problem_value(const sharp_problem* problem, const double* x,
                                           int64_t length, double* value);

/* ---- runs ---- */

typedef enum sharp_method {
  SHARP_METHOD_GRAD = 0,
  SHARP_METHOD_ACC = 1,
  SHARP_METHOD_MONO = 2,
  SHARP_METHOD_RESTART = 3,
  SHARP_METHOD_H_RESTART = 4,
  SHARP_METHOD_CRITERION = 5,
  SHARP_METHOD_GRID = 6 /* sharp_run returns the best scheme's trace */
} sharp_method;

/* Optional fields are enabled by their has_* flag. Unset parameters default to:
 * L0 = problem smoothness; restart / h-restart schedules = the optimal ones
 * derived from the declared regularity; gamma = q (or 1 without regularity);
 * eps0 = f(x0) - f*; f_star = the problem's. */
typedef struct sharp_run_options {
  sharp_method method;
  int64_t budget;
  int has_L0;
  double L0;
  int has_gamma;
  double gamma;
  int has_C;
  double C;
  double alpha; /* used with C; 0 gives a constant schedule */
  int has_eps0;
  double eps0;
  int has_f_star;
  double f_star;
  const double* x0; /* NULL: the problem's default start */
  int64_t x0_length;
  int max_backtracks; /* 0: library default */
} sharp_run_options;

SHARP_API void sharp_run_options_init(sharp_run_options* options);
SHARP_API sharp_status sharp_run(const sharp_problem* problem, const sharp_run_options* options,
                                 sharp_trace** out);
/* Guarantee applicable to `options.method` after N iterations, from the
 * problem's declared regularity. SHARP_ERR_UNAVAILABLE when none applies. */
SHARP_API sharp_status sharp_bound_at(const sharp_problem* problem,
                                      const sharp_run_options* options, double N, double* value);
/* Short name of the guarantee used by sharp_bound_at; static storage. */
SHARP_API const char* sharp_bound_name(sharp_method method);

/* ---- traces ---- */

typedef struct sharp_trace_entry {
  int64_t iteration;
  double f;
  int has_gap;
  double gap;
  int restart;
  int has_eps_target;
  double eps_target;
} sharp_trace_entry;

typedef struct sharp_trace_summary {
  int64_t iterations;
  double initial_value;
  double final_value;
  int has_gap;
  double final_gap;
  double final_L_hat;
  int64_t oracle_calls;
  int64_t backtracks;
  int64_t restarts;
  int64_t cycles;
  int stalled;
  int truncated;
} sharp_trace_summary;

typedef enum sharp_trace_format { SHARP_TRACE_CSV = 0, SHARP_TRACE_JSON = 1 } sharp_trace_format;

SHARP_API int64_t sharp_trace_length(const sharp_trace* trace);
SHARP_API sharp_status sharp_trace_get_entry(const sharp_trace* trace, int64_t index,
                                             sharp_trace_entry* out);
SHARP_API sharp_status sharp_trace_get_summary(const sharp_trace* trace, sharp_trace_summary* out);
SHARP_API sharp_status sharp_trace_final_point(const sharp_trace* trace, double* x,
                                               int64_t length);
/* Newline-separated diagnostics; owned by the handle. */
SHARP_API const char* sharp_trace_diagnostics(const sharp_trace* trace);
/* Atomic write. `metadata_json` (may be NULL) is a JSON object merged into
 * the JSON metadata block; ignored for CSV. */
SHARP_API sharp_status sharp_trace_write(const sharp_trace* trace, const char* path,
                                         sharp_trace_format format, const char* metadata_json);
SHARP_API void sharp_trace_free(sharp_trace* trace);

/* ---- adaptive grid search ---- */

typedef struct sharp_grid_run_info {
  int i;        /* C = 2^i */
  int j;        /* alpha = 2^-j, j = 0 is the constant schedule */
  double C;
  double alpha;
  int64_t inner_iterations;
  int capped;
  int failed;
  double final_value;
} sharp_grid_run_info;

/* Uses budget, L0, x0, f_star and max_backtracks from `options`; `threads`
 * = 0 uses the hardware concurrency. */
SHARP_API sharp_status sharp_grid_run(const sharp_problem* problem,
                                      const sharp_run_options* options, unsigned threads,
                                      sharp_grid** out);
SHARP_API int64_t sharp_grid_size(const sharp_grid* grid);
SHARP_API int64_t sharp_grid_best(const sharp_grid* grid);
SHARP_API int64_t sharp_grid_total_iterations(const sharp_grid* grid);
SHARP_API sharp_status sharp_grid_get_run(const sharp_grid* grid, int64_t index,
                                          sharp_grid_run_info* out);
/* Borrowed handle, valid until sharp_grid_free. */
SHARP_API const sharp_trace* sharp_grid_trace(const sharp_grid* grid, int64_t index);
SHARP_API void sharp_grid_free(sharp_grid* grid);

#ifdef __cplusplus
}
#endif

#endif /* SHARP_SHARP_H */
