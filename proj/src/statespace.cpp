#include "statespace.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace seasadj::ss {

namespace {

void symmetrize(Eigen::MatrixXd& v) { v = ((v + v.transpose()) * 0.5).eval(); }

double sample_variance(const std::vector<double>& y) {
  double sum = 0.0;
  int n = 0;
  for (double v : y)
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  if (n < 2) return 1.0;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : y)
    if (std::isfinite(v)) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1);
  return var > 0.0 ? var : 1.0;
}

}  // namespace

void StateSpaceModel::validate() const {
  const int k = static_cast<int>(F.rows());
  const int q = static_cast<int>(G.cols());
  if (F.cols() != k) throw SpecError("F must be square");
  if (G.rows() != k) throw SpecError("G row count must match state dimension");
  if (H.cols() != k) throw SpecError("H length must match state dimension");
  if (q_diag.size() != q) throw SpecError("q_diag length must match G columns");
  for (int i = 0; i < q; ++i)
    if (!(q_diag(i) >= 0.0)) throw SpecError("system-noise variances must be >= 0");
  if (!(r_obs >= 0.0)) throw SpecError("observation variance must be >= 0");
}

Eigen::MatrixXd StateSpaceModel::system_noise_cov() const {
  return G * q_diag.asDiagonal() * G.transpose();
}

FilterOutput kalman_filter(const StateSpaceModel& model,
                           const std::vector<double>& y,
                           const FilterInit& init) {
  model.validate();
  const int k = model.state_dim();
  const int n_steps = static_cast<int>(y.size());
  if (n_steps < 1) throw SpecError("series must be non-empty");
  if (init.mean0.size() != k || init.cov0.rows() != k || init.cov0.cols() != k)
    throw SpecError("filter init dimensions do not match the state dimension");

  const double rvar_floor = 1e-12 * sample_variance(y);
  const Eigen::MatrixXd gqg = model.system_noise_cov();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);

  FilterOutput fo;
  fo.pred_mean.reserve(n_steps);
  fo.pred_cov.reserve(n_steps);
  fo.filt_mean.reserve(n_steps);
  fo.filt_cov.reserve(n_steps);
  fo.eps.assign(n_steps, std::nan(""));
  fo.rvar.assign(n_steps, std::nan(""));
  fo.observed.assign(n_steps, false);

  Eigen::VectorXd x = init.mean0;
  Eigen::MatrixXd v = init.cov0;
  for (int n = 0; n < n_steps; ++n) {
    // Predict.
    x = (model.F * x).eval();
    v = (model.F * v * model.F.transpose() + gqg).eval();
    symmetrize(v);
    fo.pred_mean.push_back(x);
    fo.pred_cov.push_back(v);

    if (std::isfinite(y[n])) {
      const double yhat = model.H * x;
      double r = model.r_obs + model.H * v * model.H.transpose();
      if (r < rvar_floor) {
        r = rvar_floor;
        fo.rvar_floored = true;
        if (fo.first_floored_step < 0) fo.first_floored_step = n;
      }
      if (!(r > 0.0))
        throw NumericError("innovation variance not positive at step " +
                           std::to_string(n + 1));
      const Eigen::VectorXd gain = v * model.H.transpose() / r;
      fo.eps[n] = y[n] - yhat;
      fo.rvar[n] = r;
      fo.observed[n] = true;
      ++fo.n_obs;
      x += gain * fo.eps[n];
      if (model.r_obs == 0.0) {
        // Joseph form; the plain update loses PSD-ness faster when r_n is
        // dominated by the state covariance alone.
        const Eigen::MatrixXd a = eye - gain * model.H;
        v = (a * v * a.transpose() +
             gain * model.r_obs * gain.transpose()).eval();
      } else {
        v = ((eye - gain * model.H) * v).eval();
      }
      symmetrize(v);
    }
    fo.filt_mean.push_back(x);
    fo.filt_cov.push_back(v);
  }
  fo.sigma2_hat = concentrated_scale(fo);
  return fo;
}

SmoothedStates fixed_interval_smooth(const StateSpaceModel& model,
                                     const FilterOutput& fo) {
  const int n_steps = fo.length();
  if (n_steps == 0 || static_cast<int>(fo.filt_mean.size()) != n_steps)
    throw UsageError("smoother requires a complete filter output");
  SmoothedStates sm;
  sm.mean.resize(n_steps);
  sm.cov.resize(n_steps);
  sm.mean[n_steps - 1] = fo.filt_mean[n_steps - 1];
  sm.cov[n_steps - 1] = fo.filt_cov[n_steps - 1];
  for (int n = n_steps - 2; n >= 0; --n) {
    // Pseudo-inverse handles exactly singular predicted covariances from
    // Q = 0 blocks.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(
        fo.pred_cov[n + 1]);
    cod.setThreshold(1e-12);
    const Eigen::MatrixXd a =
        fo.filt_cov[n] * model.F.transpose() * cod.pseudoInverse();
    sm.mean[n] = fo.filt_mean[n] + a * (sm.mean[n + 1] - fo.pred_mean[n + 1]);
    sm.cov[n] = fo.filt_cov[n] +
                a * (sm.cov[n + 1] - fo.pred_cov[n + 1]) * a.transpose();
    symmetrize(sm.cov[n]);
  }
  return sm;
}

double concentrated_scale(const FilterOutput& fo) {
  if (fo.n_obs < 1) throw UsageError("no observed steps");
  double acc = 0.0;
  for (int n = 0; n < fo.length(); ++n) {
    if (!fo.observed[n]) continue;
    if (!(fo.rvar[n] > 0.0))
      throw NumericError("nonpositive innovation variance at step " +
                         std::to_string(n + 1));
    acc += fo.eps[n] * fo.eps[n] / fo.rvar[n];
  }
  return acc / fo.n_obs;
}

double log_likelihood(const FilterOutput& fo) {
  if (!(fo.sigma2_hat > 0.0))
    throw NumericError("degenerate fit: concentrated scale is zero");
  double log_r_sum = 0.0;
  for (int n = 0; n < fo.length(); ++n)
    if (fo.observed[n]) log_r_sum += std::log(fo.rvar[n]);
  const double n_obs = fo.n_obs;
  return -0.5 * (n_obs * std::log(2.0 * M_PI * fo.sigma2_hat) + log_r_sum +
                 n_obs);
}

std::vector<ForecastPoint> forecast(const StateSpaceModel& model,
                                    const Eigen::VectorXd& last_mean,
                                    const Eigen::MatrixXd& last_cov,
                                    int horizon, double sigma2) {
  if (horizon < 1) throw UsageError("forecast horizon must be >= 1");
  const Eigen::MatrixXd gqg = model.system_noise_cov();
  std::vector<ForecastPoint> out;
  out.reserve(horizon);
  Eigen::VectorXd x = last_mean;
  Eigen::MatrixXd v = last_cov;
  for (int h = 0; h < horizon; ++h) {
    x = (model.F * x).eval();
    v = (model.F * v * model.F.transpose() + gqg).eval();
    symmetrize(v);
    ForecastPoint pt;
    pt.mean = model.H * x;
    pt.var = sigma2 * (model.r_obs + model.H * v * model.H.transpose());
    out.push_back(pt);
  }
  return out;
}

}  // namespace seasadj::ss
