#include "decomp.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace seasadj {

void DecompSpec::validate() const {
  if (m1 < 0 || m1 > 3) throw SpecError("trend order m1 must be in 0..3");
  if (m2 < 0 || m2 > 1) throw SpecError("seasonal order m2 must be 0 or 1");
  if (m2 == 1 && period < 2)
    throw SpecError("seasonal period must be >= 2 when m2 = 1");
  if (m3 < 0) throw SpecError("AR order m3 must be >= 0");
  if (m1 == 0 && m2 == 0 && m3 == 0)
    throw SpecError("model has no components: m1, m2 and m3 are all zero");
  if (!(parcor_cap > 0.0 && parcor_cap <= 1.0))
    throw SpecError("parcor_cap must be in (0, 1]");
  if (!(lambda >= 0.0)) throw SpecError("lambda must be >= 0");
  if (ar_type == ArType::roots && m3 > 0) {
    if (bounds.m_r + 2 * bounds.m_i != m3)
      throw SpecError("m_r + 2*m_i must equal m3 for ar_type=2");
    normalized().bounds.validate();
  }
}

DecompSpec DecompSpec::normalized() const {
  DecompSpec out = *this;
  if (out.bounds.theta_min <= 0.0)
    out.bounds.theta_min =
        2.0 * std::numbers::pi / (10.0 * std::max(out.period, 2));
  if (out.bounds.theta_max <= 0.0) out.bounds.theta_max = std::numbers::pi;
  return out;
}

int DecompSpec::state_dim() const {
  return m1 + m2 * (period - 1) + m3;
}

int DecompSpec::n_variances() const {
  return (m1 > 0 ? 1 : 0) + (m2 > 0 ? 1 : 0) + (m3 > 0 ? 1 : 0);
}

int DecompSpec::n_free_variances() const {
  const int nv = n_variances();
  return noise_mode == NoiseMode::noise_free ? nv - 1 : nv;
}

int DecompSpec::n_ar_params() const {
  if (m3 == 0) return 0;
  return ar_type == ArType::parcor ? m3 : bounds.m_r + 2 * bounds.m_i;
}

ss::StateSpaceModel build_state_space(const DecompSpec& spec,
                                      const std::vector<double>& variances,
                                      const std::vector<double>& ar_coeffs) {
  spec.validate();
  if (static_cast<int>(variances.size()) != spec.n_variances())
    throw SpecError("expected " + std::to_string(spec.n_variances()) +
                    " component variances, got " +
                    std::to_string(variances.size()));
  for (double v : variances)
    if (!(v > 0.0)) throw SpecError("component variances must be positive");
  if (static_cast<int>(ar_coeffs.size()) != spec.m3)
    throw SpecError("expected m3 AR coefficients");
  if (spec.m3 > 0 && !ar::is_stationary(ar_coeffs))
    throw ConstraintError("AR coefficients are not stationary");

  const int k = spec.state_dim();
  const int q = spec.n_variances();
  ss::StateSpaceModel model;
  model.F = Eigen::MatrixXd::Zero(k, k);
  model.G = Eigen::MatrixXd::Zero(k, q);
  model.H = Eigen::RowVectorXd::Zero(k);
  model.q_diag = Eigen::VectorXd::Zero(q);
  for (int i = 0; i < q; ++i) model.q_diag(i) = variances[i];
  model.r_obs = spec.noise_mode == NoiseMode::with_noise ? 1.0 : 0.0;

  int row = 0, col = 0;
  if (spec.has_trend()) {
    // Companion of (1-B)^m1: binomial coefficients with alternating signs.
    // m1=1: [1]; m1=2: [[2,-1],[1,0]]; m1=3: [[3,-3,1],[1,0,0],[0,1,0]].
    double c = 1.0;
    for (int j = 0; j < spec.m1; ++j) {
      c = c * (spec.m1 - j) / (j + 1);
      model.F(row, row + j) = (j % 2 == 0 ? 1.0 : -1.0) * c;
    }
    for (int j = 1; j < spec.m1; ++j) model.F(row + j, row + j - 1) = 1.0;
    model.G(row, col) = 1.0;
    model.H(row) = 1.0;
    row += spec.m1;
    ++col;
  }
  if (spec.has_seasonal()) {
    const int ps = spec.period - 1;
    for (int j = 0; j < ps; ++j) model.F(row, row + j) = -1.0;
    for (int j = 1; j < ps; ++j) model.F(row + j, row + j - 1) = 1.0;
    model.G(row, col) = 1.0;
    model.H(row) = 1.0;
    row += ps;
    ++col;
  }
  if (spec.has_ar()) {
    for (int j = 0; j < spec.m3; ++j) model.F(row, row + j) = ar_coeffs[j];
    for (int j = 1; j < spec.m3; ++j) model.F(row + j, row + j - 1) = 1.0;
    model.G(row, col) = 1.0;
    model.H(row) = 1.0;
  }
  return model;
}

ComponentSeries extract_components(const DecompSpec& spec,
                                   const ss::SmoothedStates& sm,
                                   const std::vector<double>& y) {
  spec.validate();
  const int n = static_cast<int>(y.size());
  if (static_cast<int>(sm.mean.size()) != n)
    throw UsageError("smoothed states and series length differ");
  if (n > 0 && sm.mean[0].size() != spec.state_dim())
    throw UsageError("smoothed state dimension does not match the spec");

  ComponentSeries cs;
  cs.trend.assign(n, 0.0);
  cs.seasonal.assign(n, 0.0);
  cs.ar.assign(n, 0.0);
  cs.noise.assign(n, 0.0);
  const int trend_idx = 0;
  const int seas_idx = spec.m1;
  const int ar_idx = spec.m1 + spec.m2 * (spec.period - 1);
  for (int i = 0; i < n; ++i) {
    if (spec.has_trend()) cs.trend[i] = sm.mean[i](trend_idx);
    if (spec.has_seasonal()) cs.seasonal[i] = sm.mean[i](seas_idx);
    if (spec.has_ar()) cs.ar[i] = sm.mean[i](ar_idx);
    cs.noise[i] = y[i] - cs.trend[i] - cs.seasonal[i] - cs.ar[i];
  }
  return cs;
}

ss::FilterInit default_filter_init(const DecompSpec& spec,
                                   const std::vector<double>& y,
                                   double cov_scale) {
  spec.validate();
  if (y.empty()) throw SpecError("series must be non-empty");
  double y1 = 0.0;
  for (double v : y)
    if (std::isfinite(v)) {
      y1 = v;
      break;
    }
  double sum = 0.0, ss_acc = 0.0;
  int cnt = 0;
  for (double v : y)
    if (std::isfinite(v)) {
      sum += v;
      ++cnt;
    }
  const double mean = cnt > 0 ? sum / cnt : 0.0;
  for (double v : y)
    if (std::isfinite(v)) ss_acc += (v - mean) * (v - mean);
  double var = cnt > 1 ? ss_acc / (cnt - 1) : 1.0;
  if (!(var > 0.0)) var = 1.0;

  const int k = spec.state_dim();
  ss::FilterInit init;
  init.mean0 = Eigen::VectorXd::Zero(k);
  for (int j = 0; j < spec.m1; ++j) init.mean0(j) = y1;
  init.cov0 = cov_scale * var * Eigen::MatrixXd::Identity(k, k);
  return init;
}

}  // namespace seasadj
