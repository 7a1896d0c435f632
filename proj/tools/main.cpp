// seasadj command-line tool: decompose / scan / sweep / forecast.
//
// Thin front end over the C API in seasadj.h; all numeric work happens
// in the shared library.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "seasadj.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitEstimation = 4;
constexpr int kExitInternal = 5;

int exit_code_for(sa_status st) {
  switch (st) {
    case SA_OK: return 0;
    case SA_ERR_SPEC:
    case SA_ERR_USAGE: return kExitConfig;
    case SA_ERR_IO: return kExitIo;
    case SA_ERR_NUMERIC:
    case SA_ERR_ESTIMATION: return kExitEstimation;
    default: return kExitInternal;
  }
}

[[noreturn]] void fail(sa_status st, const std::string& context) {
  std::cerr << "seasadj: " << context << ": " << sa_last_error() << "\n";
  std::exit(exit_code_for(st));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Options shared by every subcommand.
struct CommonOpts {
  std::string input;
  std::string config_path;
  std::string out_dir = ".";
  int column = -1;
  int jobs = 1;
  // spec flags; -1 / NaN = unset (config or default wins)
  int m1 = -1, m2 = -1, period = -1, m3 = -1, ar_type = -1, mr = -1, mi = -1;
  std::string noise_mode, penalty;
  double lambda = NAN, parcor_cap = NAN;
  double r_min = NAN, r_max = NAN, theta_min = NAN, theta_max = NAN;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("input", o.input, "series file (CSV or whitespace)")
      ->required();
  cmd->add_option("--config", o.config_path, "key=value config file");
  cmd->add_option("--column", o.column,
                  "zero-based value column (default: last)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--jobs", o.jobs, "parallel fits for scans");
  cmd->add_option("--m1", o.m1, "trend order (0..3)");
  cmd->add_option("--m2", o.m2, "seasonal order (0 or 1)");
  cmd->add_option("--period", o.period, "seasonal period");
  cmd->add_option("--m3", o.m3, "AR order");
  cmd->add_option("--ar-type", o.ar_type, "1=PARCOR, 2=root-constrained");
  cmd->add_option("--noise-mode", o.noise_mode, "with_noise | noise_free");
  cmd->add_option("--penalty", o.penalty, "none | l1 | l2");
  cmd->add_option("--lambda", o.lambda, "penalty weight");
  cmd->add_option("--parcor-cap", o.parcor_cap, "PARCOR bound for ar-type 1");
  cmd->add_option("--mr", o.mr, "real-root count (ar-type 2)");
  cmd->add_option("--mi", o.mi, "complex-pair count (ar-type 2)");
  cmd->add_option("--r-min", o.r_min, "root modulus lower bound");
  cmd->add_option("--r-max", o.r_max, "root modulus upper bound");
  cmd->add_option("--theta-min", o.theta_min, "root argument lower bound");
  cmd->add_option("--theta-max", o.theta_max, "root argument upper bound");
}

void spec_set_or_fail(sa_spec* spec, const std::string& key,
                      const std::string& value) {
  const sa_status st = sa_spec_set(spec, key.c_str(), value.c_str());
  if (st != SA_OK) fail(st, "config");
}

// Config files use dotted sections (spec.m1, bounds.r_max, opt.tol);
// strip the spec./bounds. prefixes down to the C API key names.
std::string config_key_to_api(const std::string& key) {
  static const std::map<std::string, std::string> aliases = {
      {"bounds.m_r", "mr"}, {"bounds.m_i", "mi"},
      {"bounds.r_min", "r_min"}, {"bounds.r_max", "r_max"},
      {"bounds.theta_min", "theta_min"}, {"bounds.theta_max", "theta_max"},
      {"bounds.negative_real", "negative_real"}};
  if (auto it = aliases.find(key); it != aliases.end()) return it->second;
  if (key.rfind("spec.", 0) == 0) return key.substr(5);
  return key;  // opt.*, init.* pass through
}

void apply_config_file(sa_spec* spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "seasadj: cannot open config file: " << path << "\n";
    std::exit(kExitIo);
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string s = line;
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "seasadj: " << path << ":" << lineno
                << ": expected key=value\n";
      std::exit(kExitConfig);
    }
    std::string key = s.substr(0, eq), value = s.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    spec_set_or_fail(spec, config_key_to_api(key), value);
  }
}

// Build the spec: defaults, then config file, then flags.
sa_spec* build_spec(const CommonOpts& o) {
  sa_spec* spec = sa_spec_new();
  if (!o.config_path.empty()) apply_config_file(spec, o.config_path);
  auto set_int = [&](const char* key, int v) {
    if (v >= 0) spec_set_or_fail(spec, key, std::to_string(v));
  };
  auto set_real = [&](const char* key, double v) {
    if (!std::isnan(v)) spec_set_or_fail(spec, key, fmt(v));
  };
  set_int("m1", o.m1);
  set_int("m2", o.m2);
  set_int("period", o.period);
  set_int("m3", o.m3);
  set_int("ar_type", o.ar_type);
  set_int("mr", o.mr);
  set_int("mi", o.mi);
  if (!o.noise_mode.empty()) spec_set_or_fail(spec, "noise_mode", o.noise_mode);
  if (!o.penalty.empty()) spec_set_or_fail(spec, "penalty", o.penalty);
  set_real("lambda", o.lambda);
  set_real("parcor_cap", o.parcor_cap);
  set_real("r_min", o.r_min);
  set_real("r_max", o.r_max);
  set_real("theta_min", o.theta_min);
  set_real("theta_max", o.theta_max);
  return spec;
}

sa_series* load_series(const CommonOpts& o) {
  sa_series* series = nullptr;
  const sa_status st = sa_series_read(o.input.c_str(), o.column, &series);
  if (st != SA_OK) fail(st, "reading " + o.input);
  return series;
}

std::ofstream open_output(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / name;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "seasadj: cannot write " << path.string() << "\n";
    std::exit(kExitIo);
  }
  return out;
}

sa_fit* run_fit(sa_spec* spec, sa_series* series) {
  sa_fit* fit = nullptr;
  const sa_status st = sa_fit_run(spec, series, &fit);
  if (st != SA_OK) fail(st, "fit");
  return fit;
}

nlohmann::json fit_report(sa_fit* fit) {
  const int m3 = sa_fit_ar_order(fit);
  std::vector<double> ar(m3), parcor(m3), re(m3), im(m3);
  if (m3 > 0) {
    sa_fit_ar_coeffs(fit, ar.data(), m3);
    sa_fit_parcor(fit, parcor.data(), m3);
    sa_fit_roots(fit, re.data(), im.data(), m3);
  }
  nlohmann::json roots = nlohmann::json::array();
  for (int j = 0; j < m3; ++j) {
    roots.push_back({{"re", re[j]},
                     {"im", im[j]},
                     {"modulus", std::hypot(re[j], im[j])},
                     {"argument", std::atan2(im[j], re[j])}});
  }
  return {{"loglik", sa_fit_loglik(fit)},
          {"aic", sa_fit_aic(fit)},
          {"sigma2_hat", sa_fit_sigma2(fit)},
          {"param_count", sa_fit_param_count(fit)},
          {"r_obs", sa_fit_r_obs(fit)},
          {"converged", sa_fit_converged(fit) != 0},
          {"iterations", sa_fit_iterations(fit)},
          {"ar_coeffs", ar},
          {"parcor", parcor},
          {"roots", roots}};
}

int cmd_decompose(const CommonOpts& o) {
  sa_spec* spec = build_spec(o);
  sa_series* series = load_series(o);
  sa_fit* fit = run_fit(spec, series);

  const int n = sa_fit_length(fit);
  std::vector<double> trend(n), seasonal(n), ar(n), noise(n);
  sa_fit_component(fit, SA_COMP_TREND, trend.data(), n);
  sa_fit_component(fit, SA_COMP_SEASONAL, seasonal.data(), n);
  sa_fit_component(fit, SA_COMP_AR, ar.data(), n);
  sa_fit_component(fit, SA_COMP_NOISE, noise.data(), n);

  auto table = open_output(o, "components.csv");
  table << "index,y,trend,seasonal,ar,noise\n";
  for (int i = 0; i < n; ++i) {
    table << (i + 1) << ',' << fmt(sa_series_value(series, i)) << ','
          << fmt(trend[i]) << ',' << fmt(seasonal[i]) << ',' << fmt(ar[i])
          << ',' << fmt(noise[i]) << '\n';
  }
  auto report = open_output(o, "report.json");
  report << fit_report(fit).dump(2) << '\n';

  std::cout << "loglik=" << fmt(sa_fit_loglik(fit))
            << " aic=" << fmt(sa_fit_aic(fit))
            << " sigma2=" << fmt(sa_fit_sigma2(fit))
            << " converged=" << sa_fit_converged(fit) << "\n";
  sa_fit_free(fit);
  sa_series_free(series);
  sa_spec_free(spec);
  return 0;
}

int cmd_scan(const CommonOpts& o, std::vector<int> m1_set,
             std::vector<int> m3_set, std::vector<int> mr_set,
             std::vector<int> mi_set) {
  sa_spec* spec = build_spec(o);
  sa_series* series = load_series(o);
  if (m1_set.empty()) m1_set = {o.m1 >= 0 ? o.m1 : 2};

  sa_scan* scan = nullptr;
  sa_status st;
  if (!mr_set.empty() || !mi_set.empty()) {
    if (mr_set.size() != mi_set.size()) {
      std::cerr << "seasadj: --scan-mr and --scan-mi need equal lengths\n";
      return kExitConfig;
    }
    st = sa_scan_run_roots(spec, series, m1_set.data(),
                           static_cast<int>(m1_set.size()), mr_set.data(),
                           mi_set.data(), static_cast<int>(mr_set.size()),
                           o.jobs, &scan);
  } else {
    if (m3_set.empty()) m3_set = {0, 1, 2, 3, 4, 5};
    st = sa_scan_run(spec, series, m1_set.data(),
                     static_cast<int>(m1_set.size()), m3_set.data(),
                     static_cast<int>(m3_set.size()), o.jobs, &scan);
  }
  if (st != SA_OK) fail(st, "scan");

  auto out = open_output(o, "scan.csv");
  out << "m1,m2,m3,ar_type,m_r,m_i,loglik,aic,converged,status,min_aic\n";
  const int rows = sa_scan_rows(scan);
  const int min_row = sa_scan_min_aic_row(scan);
  for (int i = 0; i < rows; ++i) {
    int m1 = 0, m3 = 0, mr = 0, mi = 0, conv = 0, ok = 0;
    double ll = 0, aic_v = 0;
    sa_scan_row(scan, i, &m1, &m3, &mr, &mi, &ll, &aic_v, &conv, &ok);
    out << m1 << ',' << (o.m2 >= 0 ? o.m2 : 1) << ',' << m3 << ','
        << (mr_set.empty() ? 1 : 2) << ',' << mr << ',' << mi << ',';
    if (ok)
      out << fmt(ll) << ',' << fmt(aic_v);
    else
      out << ',';
    out << ',' << conv << ',' << (ok ? "ok" : sa_scan_row_message(scan, i))
        << ',' << (i == min_row ? 1 : 0) << '\n';
  }
  if (min_row >= 0) {
    int m1 = 0, m3 = 0;
    double aic_v = 0;
    sa_scan_row(scan, min_row, &m1, &m3, nullptr, nullptr, nullptr, &aic_v,
                nullptr, nullptr);
    std::cout << "min AIC " << fmt(aic_v) << " at m1=" << m1 << " m3=" << m3
              << "\n";
  }
  sa_scan_free(scan);
  sa_series_free(series);
  sa_spec_free(spec);
  return 0;
}

int cmd_sweep(const CommonOpts& o, std::vector<double> grid) {
  sa_spec* spec = build_spec(o);
  sa_series* series = load_series(o);
  if (grid.empty()) {
    int n = 0;
    sa_default_lambda_grid(nullptr, &n);
    grid.resize(n);
    sa_default_lambda_grid(grid.data(), &n);
  }
  sa_path* path = nullptr;
  const sa_status st = sa_sweep_run(spec, series, grid.data(),
                                    static_cast<int>(grid.size()), &path);
  if (st != SA_OK) fail(st, "sweep");

  auto out = open_output(o, "sweep.csv");
  out << "lambda,name,value\n";
  const int pts = sa_path_points(path);
  const int m3 = sa_path_ar_order(path);
  std::vector<double> parcor(m3);
  for (int i = 0; i < pts; ++i) {
    double lam = 0, ll = 0, aic_v = 0;
    int conv = 0, ok = 0;
    sa_path_point(path, i, &lam, &ll, &aic_v, &conv, &ok);
    if (!ok) {
      out << fmt(lam) << ",status,failed\n";
      continue;
    }
    out << fmt(lam) << ",loglik," << fmt(ll) << '\n';
    out << fmt(lam) << ",aic," << fmt(aic_v) << '\n';
    out << fmt(lam) << ",converged," << conv << '\n';
    if (m3 > 0) {
      sa_path_parcor(path, i, parcor.data(), m3);
      for (int j = 0; j < m3; ++j)
        out << fmt(lam) << ",b" << (j + 1) << ',' << fmt(parcor[j]) << '\n';
    }
  }
  std::cout << "sweep wrote " << pts << " lambda points\n";
  sa_path_free(path);
  sa_series_free(series);
  sa_spec_free(spec);
  return 0;
}

int cmd_forecast(const CommonOpts& o, int horizon) {
  sa_spec* spec = build_spec(o);
  sa_series* series = load_series(o);
  sa_fit* fit = run_fit(spec, series);
  std::vector<double> mean(horizon), var(horizon);
  const sa_status st = sa_fit_forecast(fit, horizon, mean.data(), var.data());
  if (st != SA_OK) fail(st, "forecast");
  auto out = open_output(o, "forecast.csv");
  out << "h,mean,var\n";
  for (int h = 0; h < horizon; ++h)
    out << (h + 1) << ',' << fmt(mean[h]) << ',' << fmt(var[h]) << '\n';
  std::cout << "forecast horizon " << horizon
            << " from loglik=" << fmt(sa_fit_loglik(fit)) << "\n";
  sa_fit_free(fit);
  sa_series_free(series);
  sa_spec_free(spec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based seasonal adjustment: trend / seasonal / AR "
               "decomposition of a univariate series"};
  app.require_subcommand(1);

  CommonOpts dec_o, scan_o, sweep_o, fc_o;
  auto* dec = app.add_subcommand("decompose", "fit and decompose a series");
  add_common(dec, dec_o);

  auto* scan = app.add_subcommand("scan", "AIC order scan");
  add_common(scan, scan_o);
  std::vector<int> m1_set, m3_set, mr_set, mi_set;
  scan->add_option("--scan-m1", m1_set, "trend orders to scan");
  scan->add_option("--scan-m3", m3_set, "AR orders to scan (ar-type 1)");
  scan->add_option("--scan-mr", mr_set, "real-root counts (ar-type 2)");
  scan->add_option("--scan-mi", mi_set, "complex-pair counts (ar-type 2)");

  auto* sweep = app.add_subcommand("sweep", "regularization path over lambda");
  add_common(sweep, sweep_o);
  std::vector<double> grid;
  sweep->add_option("--lambda-grid", grid, "explicit lambda grid");

  auto* fc = app.add_subcommand("forecast", "fit and predict ahead");
  add_common(fc, fc_o);
  int horizon = 12;
  fc->add_option("--horizon", horizon, "forecast steps");

  CLI11_PARSE(app, argc, argv);

  if (dec->parsed()) return cmd_decompose(dec_o);
  if (scan->parsed()) return cmd_scan(scan_o, m1_set, m3_set, mr_set, mi_set);
  if (sweep->parsed()) return cmd_sweep(sweep_o, grid);
  if (fc->parsed()) return cmd_forecast(fc_o, horizon);
  return kExitInternal;
}
