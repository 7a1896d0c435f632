#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decomp.hpp"

namespace seasadj::est {

enum class Optimizer { simplex, bfgs };

struct FitOptions {
  Optimizer optimizer = Optimizer::simplex;
  int max_iter = 5000;
  double tol = 1e-8;        // relative objective change
  int n_starts = 5;         // deterministic multi-start count (max 5)
  int pilot_iter = 300;     // budget per start before polishing the best
  double init_cov_scale = 1e4;
  double fd_step = 1e-5;    // relative central-difference step (bfgs)
};

// Packed free parameters: n_var log-variance entries followed by n_ar
// AR entries (unconstrained; mapped through the AR transform).
struct ParamSchema {
  int n_var = 0;
  int n_ar = 0;
  ArType ar_type = ArType::parcor;
  int size() const { return n_var + n_ar; }
};

ParamSchema schema_for(const DecompSpec& spec);

// theta unpacked into model inputs.
struct UnpackedParams {
  std::vector<double> variances;  // full n_variances, anchor included
  std::vector<double> ar_coeffs;  // m3 coefficients, stationary
  std::vector<double> parcor;     // m3 PARCOR values
  std::optional<ar::RootSet> roots;  // present iff ar_type = roots
};

UnpackedParams unpack(const DecompSpec& spec, const std::vector<double>& theta);

struct FitResult {
  std::vector<double> theta;
  double loglik = 0.0;
  double aic = 0.0;
  double sigma2 = 0.0;
  ComponentSeries components;
  std::vector<double> ar_coeffs, parcor;
  std::vector<std::complex<double>> roots;
  bool converged = false;
  int iterations = 0;
  int param_count = 0;
  ss::StateSpaceModel model;
  Eigen::VectorXd last_filt_mean;
  Eigen::MatrixXd last_filt_cov;
};

struct ScanRow {
  int m1 = 0, m2 = 0, m3 = 0;
  int ar_type = 1;
  int m_r = 0, m_i = 0;
  double loglik = 0.0;
  double aic = 0.0;
  bool converged = false;
  bool ok = false;
  bool is_min_aic = false;
  std::string message;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  int min_aic_index = -1;
};

struct LambdaPoint {
  double lambda = 0.0;
  std::vector<double> theta;
  std::vector<double> parcor;
  double loglik = 0.0;
  double aic = 0.0;
  bool converged = false;
  bool ok = false;
  std::string message;
};

struct LambdaPath {
  std::vector<LambdaPoint> points;
};

// Free-parameter count k = id(m1) + id(m2) + id(m3) + m3 by default;
// `literal_plus_one` adds the extra constant some conventions include.
int param_count(const DecompSpec& spec, bool literal_plus_one = false);

double aic(double loglik, int n_params);

// Penalized objective J(theta) = -loglik + lambda * R(theta_AR); the
// penalty acts on the packed AR entries only. Non-finite evaluations
// return 1e10.
double objective(const DecompSpec& spec, const std::vector<double>& y,
                 const std::vector<double>& theta,
                 const FitOptions& opts = {});

FitResult fit(const DecompSpec& spec, const std::vector<double>& y,
              const FitOptions& opts = {});

// Fit every (m1, m3) combination; for ar_type=2 pass (m_r, m_i) pairs.
ScanTable order_scan(const DecompSpec& spec_template,
                     const std::vector<double>& y,
                     const std::vector<int>& m1_set,
                     const std::vector<int>& m3_set,
                     const FitOptions& opts = {}, int jobs = 1);

ScanTable order_scan_roots(const DecompSpec& spec_template,
                           const std::vector<double>& y,
                           const std::vector<int>& m1_set,
                           const std::vector<std::pair<int, int>>& mrmi_set,
                           const FitOptions& opts = {}, int jobs = 1);

// Warm-started fit along a lambda grid; the first point is cold-started.
LambdaPath lambda_sweep(const DecompSpec& spec, const std::vector<double>& y,
                        const std::vector<double>& grid,
                        const FitOptions& opts = {});

// {0} followed by 10^(j/10), j = -8..16 (26 points).
std::vector<double> default_lambda_grid();

}  // namespace seasadj::est
