#pragma once

#include <vector>

#include "ar.hpp"
#include "statespace.hpp"

namespace seasadj {

enum class NoiseMode { with_noise, noise_free };
enum class ArType { parcor = 1, roots = 2 };
enum class Penalty { none, l1, l2 };

// User-facing model specification: component orders, seasonal period,
// noise mode, AR parameterization, and penalty settings.
struct DecompSpec {
  int m1 = 2;       // trend order, 0..3
  int m2 = 1;       // seasonal difference order, 0 or 1
  int period = 12;  // seasonal period p >= 2 (used iff m2 = 1)
  int m3 = 0;       // AR order
  NoiseMode noise_mode = NoiseMode::with_noise;
  ArType ar_type = ArType::parcor;
  ar::RootBounds bounds;    // used iff ar_type = roots
  double parcor_cap = 0.9;  // used iff ar_type = parcor
  Penalty penalty = Penalty::none;
  double lambda = 0.0;

  void validate() const;

  // Resolve defaulted root bounds (theta_min from the period, counts from
  // m3 when unset) into a concrete copy.
  DecompSpec normalized() const;

  bool has_trend() const { return m1 > 0; }
  bool has_seasonal() const { return m2 > 0; }
  bool has_ar() const { return m3 > 0; }

  // State dimension k = m1 + m2 (period - 1) + m3.
  int state_dim() const;

  // Count of active component variances, id(m1) + id(m2) + id(m3).
  int n_variances() const;

  // Free variance parameters: in noise-free mode the first active variance
  // is the scale anchor (fixed at 1), so one fewer.
  int n_free_variances() const;

  // Length of the optimizer-internal AR parameter block.
  int n_ar_params() const;
};

struct ComponentSeries {
  std::vector<double> trend, seasonal, ar, noise;
  int length() const { return static_cast<int>(trend.size()); }
};

// Assemble F, G, H, Q, R for the spec. `variances` holds the relative
// variances of the active components in (trend, seasonal, AR) order;
// `ar_coeffs` must be stationary.
ss::StateSpaceModel build_state_space(const DecompSpec& spec,
                                      const std::vector<double>& variances,
                                      const std::vector<double>& ar_coeffs);

// Map smoothed states to named components; noise is the residual
// y - trend - seasonal - ar, inactive components are all-zero.
ComponentSeries extract_components(const DecompSpec& spec,
                                   const ss::SmoothedStates& sm,
                                   const std::vector<double>& y);

// Default initialization: y_1 in every trend-state entry, zeros elsewhere;
// cov0 = cov_scale * sample variance of y on the diagonal.
ss::FilterInit default_filter_init(const DecompSpec& spec,
                                   const std::vector<double>& y,
                                   double cov_scale = 1e4);

}  // namespace seasadj
