#include <doctest.h>

#include <cmath>

#include "decomp.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "fixtures.hpp"

using namespace seasadj;

namespace {
DecompSpec make_spec(int m1, int m2, int period, int m3) {
  DecompSpec s;
  s.m1 = m1;
  s.m2 = m2;
  s.period = period;
  s.m3 = m3;
  return s;
}
}  // namespace

TEST_CASE("state dimension") {
  CHECK(make_spec(2, 1, 12, 3).state_dim() == 16);
  CHECK(make_spec(1, 0, 12, 0).state_dim() == 1);
  CHECK(make_spec(0, 1, 4, 2).state_dim() == 5);
}

TEST_CASE("empty spec is rejected") {
  CHECK_THROWS_AS(make_spec(0, 0, 12, 0).validate(), SpecError);
  CHECK_THROWS_AS(make_spec(4, 1, 12, 0).validate(), SpecError);
  CHECK_THROWS_AS(make_spec(2, 2, 12, 0).validate(), SpecError);
}

TEST_CASE("block structure of the assembled model") {
  const auto spec = make_spec(2, 1, 4, 3);
  const auto m = build_state_space(spec, {1.0, 2.0, 3.0}, {0.4, 0.2, 0.1});
  REQUIRE(m.state_dim() == 8);
  // H selects the lead entry of each block.
  Eigen::RowVectorXd h_expect(8);
  h_expect << 1, 0, 1, 0, 0, 1, 0, 0;
  CHECK(m.H.isApprox(h_expect));
  // Trend block.
  CHECK(m.F(0, 0) == 2.0);
  CHECK(m.F(0, 1) == -1.0);
  CHECK(m.F(1, 0) == 1.0);
  // Seasonal first row of -1's.
  CHECK(m.F(2, 2) == -1.0);
  CHECK(m.F(2, 3) == -1.0);
  CHECK(m.F(2, 4) == -1.0);
  CHECK(m.F(3, 2) == 1.0);
  // AR companion row.
  CHECK(m.F(5, 5) == 0.4);
  CHECK(m.F(5, 6) == 0.2);
  CHECK(m.F(5, 7) == 0.1);
  // One noise column per component.
  CHECK(m.G.cols() == 3);
  CHECK(m.G(0, 0) == 1.0);
  CHECK(m.G(2, 1) == 1.0);
  CHECK(m.G(5, 2) == 1.0);
  CHECK(m.q_diag(0) == 1.0);
  CHECK(m.q_diag(1) == 2.0);
  CHECK(m.q_diag(2) == 3.0);
  CHECK(m.r_obs == 1.0);
}

TEST_CASE("local level model") {
  const auto m = build_state_space(make_spec(1, 0, 12, 0), {0.5}, {});
  CHECK(m.F(0, 0) == 1.0);
  CHECK(m.G(0, 0) == 1.0);
  CHECK(m.H(0) == 1.0);
  CHECK(m.q_diag(0) == 0.5);
}

TEST_CASE("noise-free mode sets R to zero") {
  auto spec = make_spec(1, 0, 12, 0);
  spec.noise_mode = NoiseMode::noise_free;
  CHECK(build_state_space(spec, {0.5}, {}).r_obs == 0.0);
}

TEST_CASE("builder rejects bad inputs") {
  const auto spec = make_spec(1, 0, 12, 1);
  CHECK_THROWS_AS(build_state_space(spec, {1.0}, {0.5}), SpecError);
  CHECK_THROWS_AS(build_state_space(spec, {1.0, 1.0}, {}), SpecError);
  CHECK_THROWS_AS(build_state_space(spec, {1.0, 1.0}, {1.3}), ConstraintError);
  CHECK_THROWS_AS(build_state_space(spec, {-1.0, 1.0}, {0.5}), SpecError);
}

TEST_CASE("unit-circle eigenvalues for trend/seasonal, interior for AR") {
  const auto spec = make_spec(2, 1, 4, 2);
  const auto m = build_state_space(spec, {1.0, 1.0, 1.0}, {0.3, 0.2});
  const auto trend_ev = m.F.topLeftCorner(2, 2).eigenvalues();
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(trend_ev(i)) == doctest::Approx(1.0).epsilon(1e-9));
  const auto seas_ev = m.F.block(2, 2, 3, 3).eigenvalues();
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(seas_ev(i)) == doctest::Approx(1.0).epsilon(1e-9));
  const auto ar_ev = m.F.bottomRightCorner(2, 2).eigenvalues();
  for (int i = 0; i < 2; ++i) CHECK(std::abs(ar_ev(i)) < 1.0);
}

TEST_CASE("builder is deterministic") {
  const auto spec = make_spec(2, 1, 12, 2);
  const auto a = build_state_space(spec, {0.1, 0.2, 0.3}, {0.5, -0.2});
  const auto b = build_state_space(spec, {0.1, 0.2, 0.3}, {0.5, -0.2});
  CHECK(a.F.isApprox(b.F, 0.0));
  CHECK(a.G.isApprox(b.G, 0.0));
  CHECK(a.H.isApprox(b.H, 0.0));
  CHECK(a.q_diag.isApprox(b.q_diag, 0.0));
}

TEST_CASE("components sum to the data exactly") {
  const auto sim = fixtures::simulate_decomp(120, 2, 4, {0.6}, 0.05, 0.1, 1.0,
                                             0.5, 31u);
  const auto spec = make_spec(2, 1, 4, 1);
  const auto m = build_state_space(spec, {0.01, 0.01, 1.0}, {0.6});
  const auto init = default_filter_init(spec, sim.y);
  const auto fo = ss::kalman_filter(m, sim.y, init);
  const auto sm = ss::fixed_interval_smooth(m, fo);
  const auto cs = extract_components(spec, sm, sim.y);
  for (int i = 0; i < cs.length(); ++i) {
    const double sum = cs.trend[i] + cs.seasonal[i] + cs.ar[i] + cs.noise[i];
    CHECK(sum == doctest::Approx(sim.y[i]).epsilon(1e-12));
  }
}

TEST_CASE("inactive components are zero series") {
  const auto sim = fixtures::simulate_decomp(60, 1, 4, {}, 0.1, 0.1, 0.0, 0.5,
                                             32u);
  const auto spec = make_spec(1, 1, 4, 0);
  const auto m = build_state_space(spec, {0.1, 0.1}, {});
  const auto init = default_filter_init(spec, sim.y);
  const auto sm =
      ss::fixed_interval_smooth(m, ss::kalman_filter(m, sim.y, init));
  const auto cs = extract_components(spec, sm, sim.y);
  for (double v : cs.ar) CHECK(v == 0.0);
}

TEST_CASE("noise-free smoothed reconstruction has near-zero residual") {
  auto spec = make_spec(2, 1, 4, 1);
  spec.noise_mode = NoiseMode::noise_free;
  const auto sim = fixtures::simulate_decomp(150, 2, 4, {0.6}, 0.05, 0.1, 1.0,
                                             0.0, 33u);
  const auto m = build_state_space(spec, {0.0025, 0.01, 1.0}, {0.6});
  const auto init = default_filter_init(spec, sim.y);
  const auto sm =
      ss::fixed_interval_smooth(m, ss::kalman_filter(m, sim.y, init));
  const auto cs = extract_components(spec, sm, sim.y);
  double scale = 0.0;
  for (double v : sim.y) scale = std::max(scale, std::abs(v));
  for (int i = 5; i < cs.length(); ++i)
    CHECK(std::abs(cs.noise[i]) <= 1e-6 * scale);
}

TEST_CASE("H has one 1 per active component") {
  for (const auto& spec :
       {make_spec(2, 1, 12, 3), make_spec(1, 0, 12, 0), make_spec(0, 1, 4, 2)}) {
    std::vector<double> vars(spec.n_variances(), 1.0);
    std::vector<double> a(spec.m3, 0.0);
    if (spec.m3 > 0) a[0] = 0.3;
    const auto m = build_state_space(spec, vars, a);
    CHECK(m.H.sum() == spec.n_variances());
  }
}

TEST_CASE("default init puts the first value into the trend states") {
  const auto spec = make_spec(2, 1, 4, 1);
  const std::vector<double> y{7.5, 8.0, 8.5, 9.0, 9.5, 10.0};
  const auto init = default_filter_init(spec, y);
  CHECK(init.mean0(0) == 7.5);
  CHECK(init.mean0(1) == 7.5);
  for (int j = 2; j < spec.state_dim(); ++j) CHECK(init.mean0(j) == 0.0);
  CHECK(init.cov0(0, 0) > 0.0);
}
