/* C interface to the quasiperiodic-transport library.
 *
 * All functions return qpt_status; QPT_OK means success. On failure a
 * thread-local message is available through qpt_last_error(). Handles are
 * opaque and must be released with their matching _free function.
 */

#ifndef QPT_H
#define QPT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpt_status {
  QPT_OK = 0,
  QPT_ERR_INVALID_ARGUMENT = 1,
  QPT_ERR_SINGULAR_SYSTEM = 2,
  QPT_ERR_RESIDUAL_TOO_LARGE = 3,
  QPT_ERR_NUMERICAL_BREAKDOWN = 4,
  QPT_ERR_SIZE_TOO_LARGE = 5,
  QPT_ERR_NON_UNIQUE_STEADY_STATE = 6,
  QPT_ERR_INSUFFICIENT_POINTS = 7,
  QPT_ERR_NON_POSITIVE_CURRENT = 8,
  QPT_ERR_ZERO_BIAS = 9,
  QPT_ERR_EMPTY_RANGE = 10,
  QPT_ERR_IO = 11,
  QPT_ERR_INTERNAL = 12
} qpt_status;

typedef enum qpt_model {
  QPT_MODEL_CLEAN = 0,
  QPT_MODEL_AAH = 1,
  QPT_MODEL_FIBONACCI = 2
} qpt_model;

typedef enum qpt_method {
  QPT_METHOD_AUTO = 0,
  QPT_METHOD_LYAPUNOV_EIGEN = 1,
  QPT_METHOD_SPARSE_VECTORIZED = 2
} qpt_method;

typedef struct qpt_chain_params {
  qpt_model model;
  int32_t length;    /* sites, >= 2 */
  double lambda;     /* potential strength, >= 0 */
  double theta;      /* AAH phase (radians); ignored otherwise */
} qpt_chain_params;

typedef struct qpt_drive_params {
  double gamma;      /* boundary coupling, > 0 */
  double f1;         /* left bath occupation, [0, 1] */
  double fL;         /* right bath occupation, [0, 1] */
  double dephasing;  /* bulk dephasing strength Gamma, >= 0 */
} qpt_drive_params;

typedef struct qpt_solve_options {
  qpt_method method;
  double residual_tolerance; /* accepted if residual <= tol * max(gamma, 1) */
  int hermitize;             /* nonzero: return (C + C^dag)/2 */
} qpt_solve_options;

typedef struct qpt_fit_result {
  double exponent;     /* nu, beta, or exponential decay rate */
  double intercept;
  double stderr_value; /* standard error of the slope */
  double r_squared;
  int32_t points_used;
  char window[32];
} qpt_fit_result;

const char* qpt_version(void);
/* Message describing the most recent failure on this thread. */
const char* qpt_last_error(void);

void qpt_drive_params_init(qpt_drive_params* drive);     /* gamma=1, f1=1, fL=0, G=0 */
void qpt_solve_options_init(qpt_solve_options* options); /* auto, 1e-9, hermitize */

/* ---- potentials -------------------------------------------------------- */

/* On-site values V_1..V_L into out[0..length-1]. */
qpt_status qpt_potential(qpt_model model, int32_t length, double theta, double* out);

/* Fibonacci word S_index ('0'/'1' characters). needed receives the length
 * excluding the terminator; the buffer is filled and terminated when large
 * enough. */
qpt_status qpt_fibonacci_word(int32_t index, char* buf, size_t bufsize, size_t* needed);

/* Fibonacci numbers in [min, max] into out (up to capacity); count receives
 * how many exist. */
qpt_status qpt_fibonacci_sizes(int32_t min, int32_t max, int32_t* out, size_t capacity,
                               size_t* count);

/* ---- steady-state solves ----------------------------------------------- */

typedef struct qpt_ness qpt_ness; /* opaque steady-state solution */

qpt_status qpt_solve(const qpt_chain_params* chain, const qpt_drive_params* drive,
                     const qpt_solve_options* options /* NULL for defaults */,
                     qpt_ness** out);
void qpt_ness_free(qpt_ness* ness);

int32_t qpt_ness_length(const qpt_ness* ness);
double qpt_ness_current(const qpt_ness* ness);
double qpt_ness_residual(const qpt_ness* ness);
double qpt_ness_homogeneity(const qpt_ness* ness);       /* max_i |J_i - J| */
double qpt_ness_boundary_in(const qpt_ness* ness);       /* gamma (f1 - C_11) */
double qpt_ness_boundary_out(const qpt_ness* ness);      /* gamma (fL - C_LL) */
const char* qpt_ness_method(const qpt_ness* ness);
qpt_status qpt_ness_density(const qpt_ness* ness, double* out /* length */);
qpt_status qpt_ness_site_currents(const qpt_ness* ness, double* out /* length-1 */);
/* Row-major L x L real and imaginary parts; either pointer may be NULL. */
qpt_status qpt_ness_covariance(const qpt_ness* ness, double* re, double* im);

/* Brute-force steady-state covariance from the dense many-body generator
 * (length <= 6). Row-major L x L real/imaginary parts. */
qpt_status qpt_oracle_covariance(const qpt_chain_params* chain,
                                 const qpt_drive_params* drive, double* re, double* im);

/* ---- scaling analysis --------------------------------------------------- */

/* nu from log J = -nu log L + const over the last `window_last` points
 * (0 selects all points). */
qpt_status qpt_fit_transport_exponent(const double* length, const double* current,
                                      size_t n, int32_t window_last,
                                      qpt_fit_result* out);

/* Exponential decay rate from log J = -rate * L + const over all points. */
qpt_status qpt_fit_localization_decay(const double* length, const double* current,
                                      size_t n, qpt_fit_result* out);

/* beta from log kappa = beta log Gamma + const over gamma_lo <= Gamma <= gamma_hi. */
qpt_status qpt_fit_small_gamma_beta(const double* dephasing, const double* kappa,
                                    size_t n, double gamma_lo, double gamma_hi,
                                    qpt_fit_result* out);

qpt_status qpt_conductivity(double current, int32_t length, double delta_f,
                            double* out);
qpt_status qpt_dephasing_length(double dephasing, double nu, double* out);
qpt_status qpt_piecewise_kappa(int32_t length, double dephasing, double nu,
                               double* out);

/* Transport class from a power-law and an exponential fit of the same series;
 * writes one of: ballistic, superdiffusive, diffusive, subdiffusive,
 * insulating. */
qpt_status qpt_classify_transport(const qpt_fit_result* power,
                                  const qpt_fit_result* exponential, char* buf,
                                  size_t bufsize);

/* ---- campaigns ---------------------------------------------------------- */

/* Run a sweep described by a JSON config (see README for the schema), write
 * <out_dir>/<basename>.csv and <basename>_meta.json, and report the CSV path. */
qpt_status qpt_sweep_run(const char* config_json, const char* out_dir,
                         const char* basename, int32_t threads, int32_t use_cache,
                         int32_t verbose, char* csv_path, size_t csv_path_size);

/* Figure pipeline: figure is "fig1".."fig5", scale is "desk" or "full".
 * Writes the CSV bundle plus a summary JSON and reports the summary path. */
qpt_status qpt_reproduce(const char* figure, const char* scale, const char* out_dir,
                         int32_t threads, int32_t use_cache, int32_t verbose,
                         char* summary_path, size_t summary_path_size);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QPT_H */
