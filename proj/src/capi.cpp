#include "seasadj.h"

#include <cstring>
#include <string>
#include <vector>

#include "decomp.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "series_io.hpp"

using namespace seasadj;

struct sa_spec {
  DecompSpec spec;
  est::FitOptions opts;
};

struct sa_series {
  std::vector<double> values;
};

struct sa_fit {
  DecompSpec spec;
  est::FitResult result;
};

struct sa_scan {
  est::ScanTable table;
};

struct sa_path {
  int m3 = 0;
  int theta_size = 0;
  est::LambdaPath path;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

sa_status status_for(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const SpecError*>(&e)) return SA_ERR_SPEC;
  if (dynamic_cast<const IoError*>(&e)) return SA_ERR_IO;
  if (dynamic_cast<const UsageError*>(&e)) return SA_ERR_USAGE;
  if (dynamic_cast<const ConstraintError*>(&e)) return SA_ERR_SPEC;
  if (dynamic_cast<const NumericError*>(&e)) return SA_ERR_NUMERIC;
  if (dynamic_cast<const EstimationError*>(&e)) return SA_ERR_ESTIMATION;
  return SA_ERR_INTERNAL;
}

template <typename Fn>
sa_status guarded(Fn&& fn) {
  try {
    fn();
    return SA_OK;
  } catch (const std::exception& e) {
    return status_for(e);
  } catch (...) {
    set_error("unknown error");
    return SA_ERR_INTERNAL;
  }
}

sa_status copy_out(const std::vector<double>& src, double* out, int n,
                   const char* what) {
  if (out == nullptr || n != static_cast<int>(src.size())) {
    set_error(std::string(what) + ": buffer size must be " +
              std::to_string(src.size()));
    return SA_ERR_USAGE;
  }
  std::memcpy(out, src.data(), src.size() * sizeof(double));
  return SA_OK;
}

bool parse_int(const std::string& v, int& out) {
  try {
    std::size_t pos = 0;
    out = std::stoi(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_real(const std::string& v, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(v, &pos);
    return pos == v.size();
  } catch (const std::exception&) {
    return false;
  }
}

void apply_key(sa_spec& s, const std::string& key, const std::string& value) {
  auto bad = [&]() {
    throw SpecError("invalid value '" + value + "' for key '" + key + "'");
  };
  int iv = 0;
  double dv = 0.0;
  const bool is_int = parse_int(value, iv);
  const bool is_real = parse_real(value, dv);

  auto need_int = [&]() { if (!is_int) bad(); return iv; };
  auto need_real = [&]() { if (!is_real) bad(); return dv; };

  if (key == "m1") s.spec.m1 = need_int();
  else if (key == "m2") s.spec.m2 = need_int();
  else if (key == "period") s.spec.period = need_int();
  else if (key == "m3") s.spec.m3 = need_int();
  else if (key == "noise_mode") {
    if (value == "with_noise") s.spec.noise_mode = NoiseMode::with_noise;
    else if (value == "noise_free") s.spec.noise_mode = NoiseMode::noise_free;
    else bad();
  } else if (key == "ar_type") {
    if (value == "1" || value == "parcor") s.spec.ar_type = ArType::parcor;
    else if (value == "2" || value == "roots") s.spec.ar_type = ArType::roots;
    else bad();
  } else if (key == "penalty") {
    if (value == "none") s.spec.penalty = Penalty::none;
    else if (value == "l1" || value == "L1") s.spec.penalty = Penalty::l1;
    else if (value == "l2" || value == "L2") s.spec.penalty = Penalty::l2;
    else bad();
  } else if (key == "lambda") s.spec.lambda = need_real();
  else if (key == "parcor_cap") s.spec.parcor_cap = need_real();
  else if (key == "mr") s.spec.bounds.m_r = need_int();
  else if (key == "mi") s.spec.bounds.m_i = need_int();
  else if (key == "r_min") s.spec.bounds.r_min = need_real();
  else if (key == "r_max") s.spec.bounds.r_max = need_real();
  else if (key == "theta_min") s.spec.bounds.theta_min = need_real();
  else if (key == "theta_max") s.spec.bounds.theta_max = need_real();
  else if (key == "negative_real") s.spec.bounds.negative_real = need_int() != 0;
  else if (key == "opt.optimizer") {
    if (value == "simplex") s.opts.optimizer = est::Optimizer::simplex;
    else if (value == "bfgs") s.opts.optimizer = est::Optimizer::bfgs;
    else bad();
  } else if (key == "opt.max_iter") s.opts.max_iter = need_int();
  else if (key == "opt.tol") s.opts.tol = need_real();
  else if (key == "opt.starts") s.opts.n_starts = need_int();
  else if (key == "opt.pilot_iter") s.opts.pilot_iter = need_int();
  else if (key == "init.cov_scale") s.opts.init_cov_scale = need_real();
  else throw SpecError("unknown config key '" + key + "'");
}

}  // namespace

extern "C" {

const char* sa_last_error(void) { return g_last_error.c_str(); }

sa_spec* sa_spec_new(void) { return new sa_spec(); }

void sa_spec_free(sa_spec* spec) { delete spec; }

sa_spec* sa_spec_clone(const sa_spec* spec) {
  return spec ? new sa_spec(*spec) : nullptr;
}

sa_status sa_spec_set(sa_spec* spec, const char* key, const char* value) {
  if (spec == nullptr || key == nullptr || value == nullptr) {
    set_error("sa_spec_set: null argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() { apply_key(*spec, key, value); });
}

sa_series* sa_series_new(const double* values, int n) {
  if (values == nullptr || n < 1) return nullptr;
  auto* s = new sa_series();
  s->values.assign(values, values + n);
  return s;
}

sa_status sa_series_read(const char* path, int column, sa_series** out) {
  if (path == nullptr || out == nullptr) {
    set_error("sa_series_read: null argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    io::SeriesFile sf = io::read_series(path, column);
    auto* s = new sa_series();
    s->values = std::move(sf.values);
    *out = s;
  });
}

int sa_series_length(const sa_series* s) {
  return s ? static_cast<int>(s->values.size()) : 0;
}

double sa_series_value(const sa_series* s, int i) {
  if (s == nullptr || i < 0 || i >= static_cast<int>(s->values.size()))
    return 0.0;
  return s->values[i];
}

void sa_series_free(sa_series* s) { delete s; }

sa_status sa_fit_run(const sa_spec* spec, const sa_series* y, sa_fit** out) {
  if (spec == nullptr || y == nullptr || out == nullptr) {
    set_error("sa_fit_run: null argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    auto* fit = new sa_fit();
    try {
      fit->spec = spec->spec.normalized();
      fit->result = est::fit(fit->spec, y->values, spec->opts);
    } catch (...) {
      delete fit;
      throw;
    }
    *out = fit;
  });
}

void sa_fit_free(sa_fit* fit) { delete fit; }

double sa_fit_loglik(const sa_fit* fit) { return fit->result.loglik; }
double sa_fit_aic(const sa_fit* fit) { return fit->result.aic; }
double sa_fit_sigma2(const sa_fit* fit) { return fit->result.sigma2; }
int sa_fit_converged(const sa_fit* fit) { return fit->result.converged ? 1 : 0; }
int sa_fit_iterations(const sa_fit* fit) { return fit->result.iterations; }
int sa_fit_param_count(const sa_fit* fit) { return fit->result.param_count; }
int sa_fit_length(const sa_fit* fit) { return fit->result.components.length(); }
int sa_fit_ar_order(const sa_fit* fit) { return fit->spec.m3; }
int sa_fit_theta_size(const sa_fit* fit) {
  return static_cast<int>(fit->result.theta.size());
}
double sa_fit_r_obs(const sa_fit* fit) { return fit->result.model.r_obs; }

sa_status sa_fit_component(const sa_fit* fit, sa_component which, double* out,
                           int n) {
  if (fit == nullptr) return SA_ERR_USAGE;
  const ComponentSeries& cs = fit->result.components;
  switch (which) {
    case SA_COMP_TREND: return copy_out(cs.trend, out, n, "component");
    case SA_COMP_SEASONAL: return copy_out(cs.seasonal, out, n, "component");
    case SA_COMP_AR: return copy_out(cs.ar, out, n, "component");
    case SA_COMP_NOISE: return copy_out(cs.noise, out, n, "component");
  }
  set_error("unknown component selector");
  return SA_ERR_USAGE;
}

sa_status sa_fit_ar_coeffs(const sa_fit* fit, double* out, int n) {
  return copy_out(fit->result.ar_coeffs, out, n, "ar_coeffs");
}

sa_status sa_fit_parcor(const sa_fit* fit, double* out, int n) {
  return copy_out(fit->result.parcor, out, n, "parcor");
}

sa_status sa_fit_roots(const sa_fit* fit, double* re, double* im, int n) {
  const auto& roots = fit->result.roots;
  if (re == nullptr || im == nullptr || n != static_cast<int>(roots.size())) {
    set_error("sa_fit_roots: buffer size must be " +
              std::to_string(roots.size()));
    return SA_ERR_USAGE;
  }
  for (int i = 0; i < n; ++i) {
    re[i] = roots[i].real();
    im[i] = roots[i].imag();
  }
  return SA_OK;
}

sa_status sa_fit_theta(const sa_fit* fit, double* out, int n) {
  return copy_out(fit->result.theta, out, n, "theta");
}

sa_status sa_fit_forecast(const sa_fit* fit, int horizon, double* mean,
                          double* var) {
  if (fit == nullptr || mean == nullptr || var == nullptr) {
    set_error("sa_fit_forecast: null argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    const auto pts =
        ss::forecast(fit->result.model, fit->result.last_filt_mean,
                     fit->result.last_filt_cov, horizon, fit->result.sigma2);
    for (int i = 0; i < horizon; ++i) {
      mean[i] = pts[i].mean;
      var[i] = pts[i].var;
    }
  });
}

sa_status sa_scan_run(const sa_spec* spec, const sa_series* y, const int* m1s,
                      int nm1, const int* m3s, int nm3, int jobs,
                      sa_scan** out) {
  if (spec == nullptr || y == nullptr || out == nullptr || m1s == nullptr ||
      m3s == nullptr || nm1 < 1 || nm3 < 1) {
    set_error("sa_scan_run: bad argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    auto* scan = new sa_scan();
    try {
      scan->table = est::order_scan(
          spec->spec, y->values, std::vector<int>(m1s, m1s + nm1),
          std::vector<int>(m3s, m3s + nm3), spec->opts, jobs);
    } catch (...) {
      delete scan;
      throw;
    }
    *out = scan;
  });
}

sa_status sa_scan_run_roots(const sa_spec* spec, const sa_series* y,
                            const int* m1s, int nm1, const int* mrs,
                            const int* mis, int npairs, int jobs,
                            sa_scan** out) {
  if (spec == nullptr || y == nullptr || out == nullptr || m1s == nullptr ||
      mrs == nullptr || mis == nullptr || nm1 < 1 || npairs < 1) {
    set_error("sa_scan_run_roots: bad argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < npairs; ++i) pairs.emplace_back(mrs[i], mis[i]);
    auto* scan = new sa_scan();
    try {
      scan->table = est::order_scan_roots(spec->spec, y->values,
                                          std::vector<int>(m1s, m1s + nm1),
                                          pairs, spec->opts, jobs);
    } catch (...) {
      delete scan;
      throw;
    }
    *out = scan;
  });
}

void sa_scan_free(sa_scan* scan) { delete scan; }

int sa_scan_rows(const sa_scan* scan) {
  return scan ? static_cast<int>(scan->table.rows.size()) : 0;
}

int sa_scan_min_aic_row(const sa_scan* scan) {
  return scan ? scan->table.min_aic_index : -1;
}

sa_status sa_scan_row(const sa_scan* scan, int i, int* m1, int* m3, int* mr,
                      int* mi, double* loglik, double* aic, int* converged,
                      int* ok) {
  if (scan == nullptr || i < 0 ||
      i >= static_cast<int>(scan->table.rows.size())) {
    set_error("sa_scan_row: index out of range");
    return SA_ERR_USAGE;
  }
  const est::ScanRow& r = scan->table.rows[i];
  if (m1) *m1 = r.m1;
  if (m3) *m3 = r.m3;
  if (mr) *mr = r.m_r;
  if (mi) *mi = r.m_i;
  if (loglik) *loglik = r.loglik;
  if (aic) *aic = r.aic;
  if (converged) *converged = r.converged ? 1 : 0;
  if (ok) *ok = r.ok ? 1 : 0;
  return SA_OK;
}

const char* sa_scan_row_message(const sa_scan* scan, int i) {
  if (scan == nullptr || i < 0 ||
      i >= static_cast<int>(scan->table.rows.size()))
    return "";
  return scan->table.rows[i].message.c_str();
}

sa_status sa_sweep_run(const sa_spec* spec, const sa_series* y,
                       const double* lambdas, int n, sa_path** out) {
  if (spec == nullptr || y == nullptr || out == nullptr ||
      lambdas == nullptr || n < 1) {
    set_error("sa_sweep_run: bad argument");
    return SA_ERR_USAGE;
  }
  return guarded([&]() {
    auto* path = new sa_path();
    try {
      path->m3 = spec->spec.m3;
      path->theta_size = est::schema_for(spec->spec.normalized()).size();
      path->path = est::lambda_sweep(spec->spec, y->values,
                                     std::vector<double>(lambdas, lambdas + n),
                                     spec->opts);
    } catch (...) {
      delete path;
      throw;
    }
    *out = path;
  });
}

void sa_path_free(sa_path* path) { delete path; }

int sa_path_points(const sa_path* path) {
  return path ? static_cast<int>(path->path.points.size()) : 0;
}

int sa_path_ar_order(const sa_path* path) { return path ? path->m3 : 0; }

int sa_path_theta_size(const sa_path* path) {
  return path ? path->theta_size : 0;
}

sa_status sa_path_point(const sa_path* path, int i, double* lambda,
                        double* loglik, double* aic, int* converged, int* ok) {
  if (path == nullptr || i < 0 ||
      i >= static_cast<int>(path->path.points.size())) {
    set_error("sa_path_point: index out of range");
    return SA_ERR_USAGE;
  }
  const est::LambdaPoint& p = path->path.points[i];
  if (lambda) *lambda = p.lambda;
  if (loglik) *loglik = p.loglik;
  if (aic) *aic = p.aic;
  if (converged) *converged = p.converged ? 1 : 0;
  if (ok) *ok = p.ok ? 1 : 0;
  return SA_OK;
}

sa_status sa_path_parcor(const sa_path* path, int i, double* out, int n) {
  if (path == nullptr || i < 0 ||
      i >= static_cast<int>(path->path.points.size())) {
    set_error("sa_path_parcor: index out of range");
    return SA_ERR_USAGE;
  }
  return copy_out(path->path.points[i].parcor, out, n, "parcor");
}

sa_status sa_path_theta(const sa_path* path, int i, double* out, int n) {
  if (path == nullptr || i < 0 ||
      i >= static_cast<int>(path->path.points.size())) {
    set_error("sa_path_theta: index out of range");
    return SA_ERR_USAGE;
  }
  return copy_out(path->path.points[i].theta, out, n, "theta");
}

sa_status sa_default_lambda_grid(double* out, int* n) {
  if (n == nullptr) {
    set_error("sa_default_lambda_grid: null size pointer");
    return SA_ERR_USAGE;
  }
  const auto grid = est::default_lambda_grid();
  if (out == nullptr) {
    *n = static_cast<int>(grid.size());
    return SA_OK;
  }
  if (*n != static_cast<int>(grid.size())) {
    set_error("sa_default_lambda_grid: buffer size must be " +
              std::to_string(grid.size()));
    return SA_ERR_USAGE;
  }
  std::memcpy(out, grid.data(), grid.size() * sizeof(double));
  return SA_OK;
}

}  // extern "C"
