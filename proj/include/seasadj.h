/* seasadj: model-based seasonal adjustment of univariate time series.
 *
 * C interface to the decomposition library. All objects are opaque
 * handles created and destroyed through this API; functions that can
 * fail return a status code, with a human-readable message available
 * from sa_last_error() (thread-local).
 */
#ifndef SEASADJ_H
#define SEASADJ_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SA_OK = 0,
  SA_ERR_SPEC = 1,       /* invalid model specification or config */
  SA_ERR_IO = 2,         /* file not found / unparseable input */
  SA_ERR_USAGE = 3,      /* API misuse (bad argument, wrong size) */
  SA_ERR_NUMERIC = 4,    /* numerical degeneracy during filtering */
  SA_ERR_ESTIMATION = 5, /* optimization failed */
  SA_ERR_INTERNAL = 6
} sa_status;

typedef struct sa_spec sa_spec;
typedef struct sa_series sa_series;
typedef struct sa_fit sa_fit;
typedef struct sa_scan sa_scan;
typedef struct sa_path sa_path;

/* Message for the most recent error on this thread. */
const char* sa_last_error(void);

/* ---- model specification ------------------------------------------ */

/* Defaults: m1=2, m2=1, period=12, m3=0, with_noise, ar_type=1,
 * parcor_cap=0.9, no penalty. */
sa_spec* sa_spec_new(void);
void sa_spec_free(sa_spec* spec);
sa_spec* sa_spec_clone(const sa_spec* spec);

/* Set one option by dotted key, mirroring the config-file syntax.
 * Model keys: m1, m2, period, m3, noise_mode (with_noise|noise_free),
 *   ar_type (1|2), penalty (none|l1|l2), lambda, parcor_cap.
 * Root-bound keys (ar_type=2): mr, mi, r_min, r_max, theta_min,
 *   theta_max, negative_real (0|1).
 * Optimizer keys: opt.optimizer (simplex|bfgs), opt.max_iter, opt.tol,
 *   opt.starts, opt.pilot_iter, init.cov_scale. */
sa_status sa_spec_set(sa_spec* spec, const char* key, const char* value);

/* ---- series ------------------------------------------------------- */

/* Copy n values; NaN entries mark missing observations. */
sa_series* sa_series_new(const double* values, int n);

/* Read one numeric column from a comma- or whitespace-delimited file.
 * column is zero-based; -1 selects the last column. Empty fields become
 * missing markers; a non-numeric first row is skipped as a header. */
sa_status sa_series_read(const char* path, int column, sa_series** out);

int sa_series_length(const sa_series* s);
double sa_series_value(const sa_series* s, int i);
void sa_series_free(sa_series* s);

/* ---- fit ---------------------------------------------------------- */

typedef enum {
  SA_COMP_TREND = 0,
  SA_COMP_SEASONAL = 1,
  SA_COMP_AR = 2,
  SA_COMP_NOISE = 3
} sa_component;

sa_status sa_fit_run(const sa_spec* spec, const sa_series* y, sa_fit** out);
void sa_fit_free(sa_fit* fit);

double sa_fit_loglik(const sa_fit* fit);
double sa_fit_aic(const sa_fit* fit);
double sa_fit_sigma2(const sa_fit* fit);
int sa_fit_converged(const sa_fit* fit);
int sa_fit_iterations(const sa_fit* fit);
int sa_fit_param_count(const sa_fit* fit);
int sa_fit_length(const sa_fit* fit);
int sa_fit_ar_order(const sa_fit* fit);
int sa_fit_theta_size(const sa_fit* fit);
/* Relative observation-noise variance of the fitted model (1 or 0). */
double sa_fit_r_obs(const sa_fit* fit);

/* Buffers must hold exactly the advertised number of entries. */
sa_status sa_fit_component(const sa_fit* fit, sa_component which, double* out,
                           int n);
sa_status sa_fit_ar_coeffs(const sa_fit* fit, double* out, int n);
sa_status sa_fit_parcor(const sa_fit* fit, double* out, int n);
sa_status sa_fit_roots(const sa_fit* fit, double* re, double* im, int n);
sa_status sa_fit_theta(const sa_fit* fit, double* out, int n);

/* Multi-step prediction from the end of the fitted series; variances are
 * in absolute (data) units. */
sa_status sa_fit_forecast(const sa_fit* fit, int horizon, double* mean,
                          double* var);

/* ---- order scan --------------------------------------------------- */

sa_status sa_scan_run(const sa_spec* spec, const sa_series* y, const int* m1s,
                      int nm1, const int* m3s, int nm3, int jobs,
                      sa_scan** out);
/* ar_type=2 scan over (m_r, m_i) pairs. */
sa_status sa_scan_run_roots(const sa_spec* spec, const sa_series* y,
                            const int* m1s, int nm1, const int* mrs,
                            const int* mis, int npairs, int jobs,
                            sa_scan** out);
void sa_scan_free(sa_scan* scan);

int sa_scan_rows(const sa_scan* scan);
int sa_scan_min_aic_row(const sa_scan* scan);
sa_status sa_scan_row(const sa_scan* scan, int i, int* m1, int* m3, int* mr,
                      int* mi, double* loglik, double* aic, int* converged,
                      int* ok);
const char* sa_scan_row_message(const sa_scan* scan, int i);

/* ---- regularization path ------------------------------------------ */

sa_status sa_sweep_run(const sa_spec* spec, const sa_series* y,
                       const double* lambdas, int n, sa_path** out);
void sa_path_free(sa_path* path);

int sa_path_points(const sa_path* path);
int sa_path_ar_order(const sa_path* path);
int sa_path_theta_size(const sa_path* path);
sa_status sa_path_point(const sa_path* path, int i, double* lambda,
                        double* loglik, double* aic, int* converged, int* ok);
sa_status sa_path_parcor(const sa_path* path, int i, double* out, int n);
sa_status sa_path_theta(const sa_path* path, int i, double* out, int n);

/* Default grid {0} followed by 10^(j/10), j = -8..16. Call with
 * out = NULL to query the size (26). */
sa_status sa_default_lambda_grid(double* out, int* n);

#ifdef __cplusplus
}
#endif

#endif /* SEASADJ_H */
