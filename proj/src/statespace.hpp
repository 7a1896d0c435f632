#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace seasadj::ss {

// Linear-Gaussian state-space model
//   x_n = F x_{n-1} + G v_n,   v_n ~ N(0, sigma^2 diag(q_diag))
//   y_n = H x_n + w_n,         w_n ~ N(0, sigma^2 r_obs)
// where sigma^2 is the overall noise scale, concentrated out of the
// likelihood. q_diag and r_obs are relative variances.
struct StateSpaceModel {
  Eigen::MatrixXd F;       // k x k
  Eigen::MatrixXd G;       // k x q
  Eigen::RowVectorXd H;    // 1 x k
  Eigen::VectorXd q_diag;  // q, entries >= 0
  double r_obs = 1.0;      // scalar >= 0; 0 = noise-free mode

  int state_dim() const { return static_cast<int>(F.rows()); }
  int noise_dim() const { return static_cast<int>(G.cols()); }
  void validate() const;

  // G diag(q) G^T, the system-noise contribution per step.
  Eigen::MatrixXd system_noise_cov() const;
};

struct FilterInit {
  Eigen::VectorXd mean0;
  Eigen::MatrixXd cov0;
};

// Missing observations are NaN entries of y; they skip the measurement
// update and contribute nothing to the likelihood sums.
struct FilterOutput {
  std::vector<Eigen::VectorXd> pred_mean, filt_mean;
  std::vector<Eigen::MatrixXd> pred_cov, filt_cov;
  std::vector<double> eps;   // innovation, NaN at missing steps
  std::vector<double> rvar;  // innovation variance, NaN at missing steps
  std::vector<bool> observed;
  double sigma2_hat = 0.0;
  int n_obs = 0;              // count of non-missing steps
  bool rvar_floored = false;  // some r_n hit the positivity floor
  int first_floored_step = -1;

  int length() const { return static_cast<int>(eps.size()); }
};

struct SmoothedStates {
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
};

FilterOutput kalman_filter(const StateSpaceModel& model,
                           const std::vector<double>& y,
                           const FilterInit& init);

SmoothedStates fixed_interval_smooth(const StateSpaceModel& model,
                                     const FilterOutput& fo);

// sigma2_hat = (1/N) sum eps_n^2 / r_n over observed steps.
double concentrated_scale(const FilterOutput& fo);

// Concentrated log-likelihood
//   -(1/2) { N log(2 pi sigma2_hat) + sum log r_n + N }.
double log_likelihood(const FilterOutput& fo);

struct ForecastPoint {
  double mean = 0.0;
  double var = 0.0;  // absolute units: sigma2 * (r_obs + H cov H^T)
};

std::vector<ForecastPoint> forecast(const StateSpaceModel& model,
                                    const Eigen::VectorXd& last_mean,
                                    const Eigen::MatrixXd& last_cov,
                                    int horizon, double sigma2);

}  // namespace seasadj::ss
