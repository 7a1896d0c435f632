// Deterministic random model generators and Decomp-series simulators
// shared by the unit and acceptance suites.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "decomp.hpp"
#include "statespace.hpp"

namespace fixtures {

struct RandomModel {
  seasadj::ss::StateSpaceModel model;
  seasadj::ss::FilterInit init;
  std::vector<double> y;
};

// Random stable-ish model with k <= k_max states, optionally noise-free.
inline RandomModel random_model(std::mt19937& rng, int k_max, int n_max,
                                bool noise_free) {
  std::uniform_int_distribution<int> kd(1, k_max), nd(5, n_max), qd(1, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.2, 1.5);

  const int k = kd(rng);
  // Noise-free observations need full-rank process noise, otherwise the
  // joint distribution of y is degenerate and conditioning is ill posed.
  const int q = noise_free ? k : std::min(k, qd(rng));
  const int n = nd(rng);
  RandomModel rm;
  auto& m = rm.model;
  m.F.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m.F(i, j) = gauss(rng) / std::sqrt(double(k));
  // Keep the spectral radius moderate so dense covariances stay sane.
  const double rad = m.F.eigenvalues().cwiseAbs().maxCoeff();
  if (rad > 0.95) m.F *= 0.95 / rad;
  m.G.resize(k, q);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < q; ++j) m.G(i, j) = gauss(rng);
  m.H.resize(k);
  for (int j = 0; j < k; ++j) m.H(j) = gauss(rng);
  if (m.H.norm() < 0.3) m.H(0) += 1.0;
  m.q_diag.resize(q);
  for (int j = 0; j < q; ++j) m.q_diag(j) = unif(rng);
  m.r_obs = noise_free ? 0.0 : 1.0;

  rm.init.mean0.resize(k);
  for (int j = 0; j < k; ++j) rm.init.mean0(j) = gauss(rng);
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = gauss(rng);
  rm.init.cov0 = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(k, k);

  rm.y.resize(n);
  for (int i = 0; i < n; ++i) rm.y[i] = gauss(rng) * 2.0;
  return rm;
}

struct SimulatedDecomp {
  std::vector<double> y, trend, seasonal, ar;
};

// Simulate y = T + S + p + w from the component difference equations.
inline SimulatedDecomp simulate_decomp(int n, int m1, int period,
                                       const std::vector<double>& ar_coeffs,
                                       double tau1, double tau2, double tau3,
                                       double sigma, unsigned seed,
                                       double level0 = 10.0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m3 = static_cast<int>(ar_coeffs.size());
  const int burn = 200;
  SimulatedDecomp out;
  out.y.resize(n);
  out.trend.resize(n);
  out.seasonal.resize(n);
  out.ar.resize(n);

  // Burn in the stationary AR recursion only; trend and seasonal are
  // integrated processes and start at their initial histories.
  std::vector<double> p_hist(std::max(m3, 1), 0.0);
  for (int i = 0; i < burn && m3 > 0; ++i) {
    double p = 0.0;
    for (int j = 0; j < m3; ++j) p += ar_coeffs[j] * p_hist[j];
    p += tau3 * gauss(rng);
    for (int j = m3 - 1; j > 0; --j) p_hist[j] = p_hist[j - 1];
    p_hist[0] = p;
  }
  std::vector<double> t_hist(std::max(m1, 1), level0);
  std::vector<double> s_hist(std::max(period - 1, 1), 0.0);
  // Seed one deterministic seasonal cycle so the component is visible.
  for (int j = 0; j < period - 1; ++j)
    s_hist[j] = std::sin(2.0 * M_PI * j / period);
  for (int i = 0; i < n; ++i) {
    double t = level0;
    if (m1 == 1) t = t_hist[0] + tau1 * gauss(rng);
    else if (m1 == 2) t = 2.0 * t_hist[0] - t_hist[1] + tau1 * gauss(rng);
    else if (m1 == 3)
      t = 3.0 * t_hist[0] - 3.0 * t_hist[1] + t_hist[2] + tau1 * gauss(rng);
    if (m1 > 0) {
      for (int j = static_cast<int>(t_hist.size()) - 1; j > 0; --j)
        t_hist[j] = t_hist[j - 1];
      t_hist[0] = t;
    }
    double s = 0.0;
    if (period > 1) {
      for (double v : s_hist) s -= v;
      s += tau2 * gauss(rng);
      for (int j = period - 2; j > 0; --j) s_hist[j] = s_hist[j - 1];
      s_hist[0] = s;
    }
    double p = 0.0;
    if (m3 > 0) {
      for (int j = 0; j < m3; ++j) p += ar_coeffs[j] * p_hist[j];
      p += tau3 * gauss(rng);
      for (int j = m3 - 1; j > 0; --j) p_hist[j] = p_hist[j - 1];
      p_hist[0] = p;
    }
    const double w = sigma * gauss(rng);
    out.trend[i] = m1 > 0 ? t : 0.0;
    out.seasonal[i] = period > 1 ? s : 0.0;
    out.ar[i] = p;
    out.y[i] = out.trend[i] + out.seasonal[i] + out.ar[i] + w;
  }
  return out;
}

// The standard synthetic fixture: m1=2, m2=1, p=12, m3=2, N=300.
inline SimulatedDecomp standard_fixture() {
  return simulate_decomp(300, 2, 12, {0.6, -0.2}, 0.1, 0.05, 0.5, 0.5,
                         20240501u, 50.0);
}

}  // namespace fixtures
