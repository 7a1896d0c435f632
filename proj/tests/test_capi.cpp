// Exercises the public extern-C surface end to end.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "seasadj.h"

namespace {

// Small synthetic monthly-ish series with trend + period-4 seasonality.
std::vector<double> toy_series(int n = 120) {
  std::mt19937 rng(2024);
  std::normal_distribution<double> gauss(0.0, 0.3);
  std::vector<double> y(n);
  const double seas[4] = {1.0, -0.5, -1.2, 0.7};
  for (int i = 0; i < n; ++i)
    y[i] = 10.0 + 0.03 * i + seas[i % 4] + gauss(rng);
  return y;
}

sa_spec* toy_spec() {
  sa_spec* spec = sa_spec_new();
  REQUIRE(sa_spec_set(spec, "m1", "2") == SA_OK);
  REQUIRE(sa_spec_set(spec, "m2", "1") == SA_OK);
  REQUIRE(sa_spec_set(spec, "period", "4") == SA_OK);
  REQUIRE(sa_spec_set(spec, "m3", "1") == SA_OK);
  REQUIRE(sa_spec_set(spec, "opt.pilot_iter", "100") == SA_OK);
  REQUIRE(sa_spec_set(spec, "opt.max_iter", "800") == SA_OK);
  return spec;
}

}  // namespace

TEST_CASE("spec keys validate") {
  sa_spec* spec = sa_spec_new();
  CHECK(sa_spec_set(spec, "noise_mode", "noise_free") == SA_OK);
  CHECK(sa_spec_set(spec, "noise_mode", "banana") == SA_ERR_SPEC);
  CHECK(std::string(sa_last_error()).find("banana") != std::string::npos);
  CHECK(sa_spec_set(spec, "no_such_key", "1") == SA_ERR_SPEC);
  CHECK(sa_spec_set(spec, "m1", "not_a_number") == SA_ERR_SPEC);
  CHECK(sa_spec_set(nullptr, "m1", "1") == SA_ERR_USAGE);
  sa_spec_free(spec);
}

TEST_CASE("series from buffer and from file") {
  const auto y = toy_series(24);
  sa_series* s = sa_series_new(y.data(), 24);
  REQUIRE(s != nullptr);
  CHECK(sa_series_length(s) == 24);
  CHECK(sa_series_value(s, 3) == y[3]);
  sa_series_free(s);

  const std::string path = std::string(std::tmpnam(nullptr)) + ".csv";
  {
    std::ofstream out(path);
    out << "value\n1\n2\n\n3\n";
  }
  sa_series* from_file = nullptr;
  REQUIRE(sa_series_read(path.c_str(), -1, &from_file) == SA_OK);
  CHECK(sa_series_length(from_file) == 3);
  sa_series_free(from_file);
  std::remove(path.c_str());

  sa_series* missing = nullptr;
  CHECK(sa_series_read("/no/such/file.csv", -1, &missing) == SA_ERR_IO);
}

TEST_CASE("fit, components, forecast through the C API") {
  const auto y = toy_series();
  sa_spec* spec = toy_spec();
  sa_series* series = sa_series_new(y.data(), static_cast<int>(y.size()));
  sa_fit* fit = nullptr;
  REQUIRE(sa_fit_run(spec, series, &fit) == SA_OK);

  CHECK(std::isfinite(sa_fit_loglik(fit)));
  CHECK(sa_fit_aic(fit) ==
        doctest::Approx(-2.0 * sa_fit_loglik(fit) +
                        2.0 * sa_fit_param_count(fit)));
  CHECK(sa_fit_sigma2(fit) > 0.0);
  CHECK(sa_fit_length(fit) == static_cast<int>(y.size()));
  CHECK(sa_fit_ar_order(fit) == 1);
  CHECK(sa_fit_r_obs(fit) == 1.0);

  const int n = sa_fit_length(fit);
  std::vector<double> trend(n), seasonal(n), ar(n), noise(n);
  REQUIRE(sa_fit_component(fit, SA_COMP_TREND, trend.data(), n) == SA_OK);
  REQUIRE(sa_fit_component(fit, SA_COMP_SEASONAL, seasonal.data(), n) == SA_OK);
  REQUIRE(sa_fit_component(fit, SA_COMP_AR, ar.data(), n) == SA_OK);
  REQUIRE(sa_fit_component(fit, SA_COMP_NOISE, noise.data(), n) == SA_OK);
  for (int i = 0; i < n; ++i)
    CHECK(trend[i] + seasonal[i] + ar[i] + noise[i] ==
          doctest::Approx(y[i]).epsilon(1e-9));
  // Wrong buffer size is a usage error, not a crash.
  CHECK(sa_fit_component(fit, SA_COMP_TREND, trend.data(), n - 1) ==
        SA_ERR_USAGE);

  double a1 = 0.0, b1 = 0.0, re = 0.0, im = 0.0;
  REQUIRE(sa_fit_ar_coeffs(fit, &a1, 1) == SA_OK);
  REQUIRE(sa_fit_parcor(fit, &b1, 1) == SA_OK);
  REQUIRE(sa_fit_roots(fit, &re, &im, 1) == SA_OK);
  CHECK(std::abs(re) < 1.0);
  CHECK(a1 == doctest::Approx(b1));  // order 1: a = b

  std::vector<double> mean(6), var(6);
  REQUIRE(sa_fit_forecast(fit, 6, mean.data(), var.data()) == SA_OK);
  for (int h = 0; h < 6; ++h) {
    CHECK(std::isfinite(mean[h]));
    CHECK(var[h] > 0.0);
  }

  sa_fit_free(fit);
  sa_series_free(series);
  sa_spec_free(spec);
}

TEST_CASE("estimation failure surfaces as a status code") {
  sa_spec* spec = sa_spec_new();
  sa_spec_set(spec, "m1", "2");
  sa_spec_set(spec, "period", "12");
  const std::vector<double> y(5, 1.0);  // shorter than the state
  sa_series* series = sa_series_new(y.data(), 5);
  sa_fit* fit = nullptr;
  CHECK(sa_fit_run(spec, series, &fit) == SA_ERR_SPEC);
  CHECK(fit == nullptr);
  sa_series_free(series);
  sa_spec_free(spec);
}

TEST_CASE("order scan through the C API") {
  const auto y = toy_series();
  sa_spec* spec = toy_spec();
  sa_series* series = sa_series_new(y.data(), static_cast<int>(y.size()));
  const int m1s[] = {2};
  const int m3s[] = {0, 1};
  sa_scan* scan = nullptr;
  REQUIRE(sa_scan_run(spec, series, m1s, 1, m3s, 2, 2, &scan) == SA_OK);
  CHECK(sa_scan_rows(scan) == 2);
  const int min_row = sa_scan_min_aic_row(scan);
  CHECK(min_row >= 0);
  double best_aic = 0.0;
  for (int i = 0; i < 2; ++i) {
    int m1 = 0, m3 = 0, ok = 0;
    double ll = 0.0, aic = 0.0;
    REQUIRE(sa_scan_row(scan, i, &m1, &m3, nullptr, nullptr, &ll, &aic,
                        nullptr, &ok) == SA_OK);
    CHECK(ok == 1);
    CHECK(m1 == 2);
    if (i == min_row) best_aic = aic;
  }
  for (int i = 0; i < 2; ++i) {
    double aic = 0.0;
    sa_scan_row(scan, i, nullptr, nullptr, nullptr, nullptr, nullptr, &aic,
                nullptr, nullptr);
    CHECK(aic >= best_aic);
  }
  CHECK(sa_scan_row(scan, 99, nullptr, nullptr, nullptr, nullptr, nullptr,
                    nullptr, nullptr, nullptr) == SA_ERR_USAGE);
  sa_scan_free(scan);
  sa_series_free(series);
  sa_spec_free(spec);
}

TEST_CASE("lambda sweep through the C API") {
  const auto y = toy_series();
  sa_spec* spec = toy_spec();
  sa_spec_set(spec, "m3", "2");
  sa_spec_set(spec, "penalty", "l2");
  sa_series* series = sa_series_new(y.data(), static_cast<int>(y.size()));

  int n_grid = 0;
  REQUIRE(sa_default_lambda_grid(nullptr, &n_grid) == SA_OK);
  CHECK(n_grid == 26);

  const double grid[] = {0.0, 1.0, 10.0};
  sa_path* path = nullptr;
  REQUIRE(sa_sweep_run(spec, series, grid, 3, &path) == SA_OK);
  CHECK(sa_path_points(path) == 3);
  CHECK(sa_path_ar_order(path) == 2);
  for (int i = 0; i < 3; ++i) {
    double lam = 0.0, ll = 0.0, aic = 0.0;
    int conv = 0, ok = 0;
    REQUIRE(sa_path_point(path, i, &lam, &ll, &aic, &conv, &ok) == SA_OK);
    CHECK(lam == grid[i]);
    CHECK(ok == 1);
    std::vector<double> parcor(2);
    REQUIRE(sa_path_parcor(path, i, parcor.data(), 2) == SA_OK);
    for (double b : parcor) CHECK(std::abs(b) < 1.0);
  }
  sa_path_free(path);
  sa_series_free(series);
  sa_spec_free(spec);
}
