#include "estimate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "errors.hpp"

namespace seasadj::est {

namespace {

constexpr double kBadObjective = 1e10;
constexpr double kL1ZeroTol = 1e-6;

struct OptimResult {
  std::vector<double> x;
  double f = kBadObjective;
  int iterations = 0;
  bool converged = false;
};

// Objective evaluation context: normalized spec, series, fixed init.
class Evaluator {
 public:
  Evaluator(const DecompSpec& spec, const std::vector<double>& y,
            const FitOptions& opts)
      : spec_(spec.normalized()), y_(y) {
    spec_.validate();
    init_ = default_filter_init(spec_, y_, opts.init_cov_scale);
    schema_ = schema_for(spec_);
  }

  const DecompSpec& spec() const { return spec_; }
  const ParamSchema& schema() const { return schema_; }
  const ss::FilterInit& init() const { return init_; }
  const std::vector<double>& series() const { return y_; }

  double penalty(const std::vector<double>& theta) const {
    if (spec_.penalty == Penalty::none || spec_.lambda == 0.0) return 0.0;
    double r = 0.0;
    for (int j = schema_.n_var; j < schema_.size(); ++j) {
      r += spec_.penalty == Penalty::l2 ? theta[j] * theta[j]
                                        : std::abs(theta[j]);
    }
    return spec_.lambda * r;
  }

  // -loglik at theta, or kBadObjective on any numerical failure.
  double neg_loglik(const std::vector<double>& theta) const {
    try {
      const UnpackedParams up = unpack(spec_, theta);
      const ss::StateSpaceModel model =
          build_state_space(spec_, up.variances, up.ar_coeffs);
      const ss::FilterOutput fo = ss::kalman_filter(model, y_, init_);
      const double ll = ss::log_likelihood(fo);
      if (!std::isfinite(ll)) return kBadObjective;
      return -ll;
    } catch (const std::exception&) {
      return kBadObjective;
    }
  }

  double operator()(const std::vector<double>& theta) const {
    const double nll = neg_loglik(theta);
    if (nll >= kBadObjective) return kBadObjective;
    return nll + penalty(theta);
  }

 private:
  DecompSpec spec_;
  std::vector<double> y_;
  ss::FilterInit init_;
  ParamSchema schema_;
};

using Objective = std::function<double(const std::vector<double>&)>;

OptimResult nelder_mead(const Objective& f, const std::vector<double>& x0,
                        double step, int max_iter, double tol) {
  const int n = static_cast<int>(x0.size());
  OptimResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.converged = true;
    return res;
  }
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  int iter = 0;
  std::vector<int> order(n + 1);
  while (iter < max_iter) {
    ++iter;
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (fv[worst] - fv[best] <= tol * (std::abs(fv[best]) + 1e-10)) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j)
        p[j] = centroid[j] + coef * (pts[worst][j] - centroid[j]);
      return p;
    };
    std::vector<double> refl = blend(-1.0);
    const double f_refl = f(refl);
    if (f_refl < fv[best]) {
      std::vector<double> exp_pt = blend(-2.0);
      const double f_exp = f(exp_pt);
      if (f_exp < f_refl) {
        pts[worst] = std::move(exp_pt);
        fv[worst] = f_exp;
      } else {
        pts[worst] = std::move(refl);
        fv[worst] = f_refl;
      }
    } else if (f_refl < fv[second]) {
      pts[worst] = std::move(refl);
      fv[worst] = f_refl;
    } else {
      const bool outside = f_refl < fv[worst];
      std::vector<double> contr = blend(outside ? -0.5 : 0.5);
      const double f_contr = f(contr);
      if (f_contr < std::min(f_refl, fv[worst])) {
        pts[worst] = std::move(contr);
        fv[worst] = f_contr;
      } else {
        // Shrink toward the best vertex.
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = pts[best];
  res.f = fv[best];
  res.iterations = iter;
  return res;
}

std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x,
                                double rel_step) {
  const int n = static_cast<int>(x.size());
  std::vector<double> g(n);
  std::vector<double> xp = x;
  for (int i = 0; i < n; ++i) {
    const double h = rel_step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

OptimResult bfgs(const Objective& f, const std::vector<double>& x0,
                 int max_iter, double tol, double fd_step) {
  const int n = static_cast<int>(x0.size());
  OptimResult res;
  res.x = x0;
  res.f = f(x0);
  if (n == 0) {
    res.converged = true;
    return res;
  }
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  std::vector<double> gv = fd_gradient(f, x0, fd_step);
  Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(gv.data(), n);
  double fx = res.f;
  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    Eigen::VectorXd dir = -(hinv * g);
    if (dir.dot(g) >= 0.0) dir = -g;  // reset on loss of descent direction
    double alpha = 1.0;
    const double slope = g.dot(dir);
    double f_new = kBadObjective;
    Eigen::VectorXd x_new;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + alpha * dir;
      std::vector<double> xt(x_new.data(), x_new.data() + n);
      f_new = f(xt);
      if (f_new <= fx + 1e-4 * alpha * slope) break;
      alpha *= 0.5;
    }
    if (!(f_new < fx)) {
      res.converged = true;
      break;
    }
    std::vector<double> xt(x_new.data(), x_new.data() + n);
    std::vector<double> gv_new = fd_gradient(f, xt, fd_step);
    Eigen::VectorXd g_new = Eigen::Map<const Eigen::VectorXd>(gv_new.data(), n);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      hinv = (eye - rho * s * yv.transpose()) * hinv *
                 (eye - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    const bool done = std::abs(fx - f_new) <= tol * (std::abs(f_new) + 1e-10);
    x = x_new;
    g = g_new;
    fx = f_new;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.x.assign(x.data(), x.data() + n);
  res.f = fx;
  res.iterations = iter;
  return res;
}

OptimResult minimize(const Objective& f, const std::vector<double>& x0,
                     const FitOptions& opts, double simplex_step,
                     int max_iter) {
  if (opts.optimizer == Optimizer::bfgs)
    return bfgs(f, x0, max_iter, opts.tol, opts.fd_step);
  return nelder_mead(f, x0, simplex_step, max_iter, opts.tol);
}

// Deterministic multi-start initial points.
std::vector<std::vector<double>> start_points(const ParamSchema& schema,
                                              int n_starts) {
  const int n = schema.size();
  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, 0.0);
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < schema.n_var; ++i) s[i] = 1.0;
  starts.push_back(s);
  for (int i = 0; i < schema.n_var; ++i) s[i] = -2.0;
  starts.push_back(s);
  s.assign(n, 0.0);
  for (int i = 0; i < schema.n_var; ++i) s[i] = 1.0;
  for (int j = schema.n_var; j < n; ++j)
    s[j] = (j - schema.n_var) % 2 == 0 ? 0.3 : -0.3;
  starts.push_back(s);
  s.assign(n, 0.0);
  for (int i = 0; i < schema.n_var; ++i) s[i] = -1.0;
  for (int j = schema.n_var; j < n; ++j) s[j] = 0.5;
  starts.push_back(s);
  if (n_starts < 1) n_starts = 1;
  if (n_starts < static_cast<int>(starts.size())) starts.resize(n_starts);
  return starts;
}

FitResult finalize_fit(const Evaluator& ev, const OptimResult& opt,
                       const FitOptions&) {
  const DecompSpec& spec = ev.spec();
  FitResult out;
  out.theta = opt.x;
  if (spec.penalty == Penalty::l1) {
    for (int j = ev.schema().n_var; j < ev.schema().size(); ++j)
      if (std::abs(out.theta[j]) < kL1ZeroTol) out.theta[j] = 0.0;
  }
  const UnpackedParams up = unpack(spec, out.theta);
  out.model = build_state_space(spec, up.variances, up.ar_coeffs);
  const ss::FilterOutput fo =
      ss::kalman_filter(out.model, ev.series(), ev.init());
  out.loglik = ss::log_likelihood(fo);
  out.sigma2 = fo.sigma2_hat;
  out.param_count = param_count(spec);
  out.aic = aic(out.loglik, out.param_count);
  const ss::SmoothedStates sm = ss::fixed_interval_smooth(out.model, fo);
  out.components = extract_components(spec, sm, ev.series());
  out.ar_coeffs = up.ar_coeffs;
  out.parcor = up.parcor;
  out.roots = ar::coeffs_to_roots(up.ar_coeffs);
  out.converged = opt.converged;
  out.iterations = opt.iterations;
  out.last_filt_mean = fo.filt_mean.back();
  out.last_filt_cov = fo.filt_cov.back();
  return out;
}

FitResult fit_internal(const DecompSpec& spec, const std::vector<double>& y,
                       const FitOptions& opts,
                       const std::vector<double>* warm_theta) {
  Evaluator ev(spec, y, opts);
  Objective f = [&ev](const std::vector<double>& x) { return ev(x); };
  if (static_cast<int>(y.size()) <= ev.spec().state_dim())
    throw SpecError("series length must exceed the state dimension");

  OptimResult best;
  if (warm_theta != nullptr) {
    best = minimize(f, *warm_theta, opts, 0.1, opts.max_iter);
  } else {
    // Short pilot run from each deterministic start, then polish the best.
    std::vector<double> best_x;
    double best_f = kBadObjective;
    for (const auto& s : start_points(ev.schema(), opts.n_starts)) {
      OptimResult pilot = minimize(f, s, opts, 0.5, opts.pilot_iter);
      if (pilot.f < best_f) {
        best_f = pilot.f;
        best_x = pilot.x;
      }
    }
    if (best_f >= kBadObjective)
      throw EstimationError("no start point produced a finite objective");
    best = minimize(f, best_x, opts, 0.25, opts.max_iter);
  }
  if (best.f >= kBadObjective)
    throw EstimationError("optimization failed to reach a finite objective");
  return finalize_fit(ev, best, opts);
}

void mark_min_aic(ScanTable& table) {
  table.min_aic_index = -1;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i].ok) continue;
    if (table.min_aic_index < 0 ||
        table.rows[i].aic < table.rows[table.min_aic_index].aic)
      table.min_aic_index = static_cast<int>(i);
  }
  if (table.min_aic_index >= 0)
    table.rows[table.min_aic_index].is_min_aic = true;
}

void run_rows(std::vector<DecompSpec>& specs, const std::vector<double>& y,
              const FitOptions& opts, int jobs, ScanTable& table) {
  const int n = static_cast<int>(specs.size());
  table.rows.resize(n);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      ScanRow& row = table.rows[i];
      const DecompSpec& s = specs[i];
      row.m1 = s.m1;
      row.m2 = s.m2;
      row.m3 = s.m3;
      row.ar_type = static_cast<int>(s.ar_type);
      row.m_r = s.ar_type == ArType::roots ? s.bounds.m_r : 0;
      row.m_i = s.ar_type == ArType::roots ? s.bounds.m_i : 0;
      try {
        const FitResult fr = fit_internal(s, y, opts, nullptr);
        row.loglik = fr.loglik;
        row.aic = fr.aic;
        row.converged = fr.converged;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  mark_min_aic(table);
}

}  // namespace

ParamSchema schema_for(const DecompSpec& spec) {
  spec.validate();
  ParamSchema s;
  s.n_var = spec.n_free_variances();
  s.n_ar = spec.n_ar_params();
  s.ar_type = spec.ar_type;
  return s;
}

UnpackedParams unpack(const DecompSpec& spec_in,
                      const std::vector<double>& theta) {
  const DecompSpec spec = spec_in.normalized();
  const ParamSchema schema = schema_for(spec);
  if (static_cast<int>(theta.size()) != schema.size())
    throw UsageError("theta length does not match the parameter schema");

  UnpackedParams up;
  up.variances.reserve(spec.n_variances());
  int idx = 0;
  if (spec.noise_mode == NoiseMode::noise_free)
    up.variances.push_back(1.0);  // scale anchor
  while (static_cast<int>(up.variances.size()) < spec.n_variances())
    up.variances.push_back(std::exp(theta[idx++]));

  std::vector<double> u(theta.begin() + schema.n_var, theta.end());
  if (spec.m3 == 0) return up;
  if (spec.ar_type == ArType::parcor) {
    up.parcor = ar::transform_parcor(u, spec.parcor_cap);
    up.ar_coeffs = ar::parcor_to_coeffs(up.parcor);
  } else {
    up.roots = ar::transform_roots(u, spec.bounds);
    up.ar_coeffs = ar::roots_to_coeffs(*up.roots);
    up.parcor = ar::coeffs_to_parcor(up.ar_coeffs);
  }
  return up;
}

int param_count(const DecompSpec& spec, bool literal_plus_one) {
  spec.validate();
  const int ids = spec.n_variances();
  return ids + spec.m3 + (literal_plus_one ? 1 : 0);
}

double aic(double loglik, int n_params) {
  return -2.0 * loglik + 2.0 * n_params;
}

double objective(const DecompSpec& spec, const std::vector<double>& y,
                 const std::vector<double>& theta, const FitOptions& opts) {
  Evaluator ev(spec, y, opts);
  return ev(theta);
}

FitResult fit(const DecompSpec& spec, const std::vector<double>& y,
              const FitOptions& opts) {
  return fit_internal(spec, y, opts, nullptr);
}

ScanTable order_scan(const DecompSpec& spec_template,
                     const std::vector<double>& y,
                     const std::vector<int>& m1_set,
                     const std::vector<int>& m3_set, const FitOptions& opts,
                     int jobs) {
  if (m1_set.empty() || m3_set.empty())
    throw UsageError("order sets must be non-empty");
  std::vector<int> m1s = m1_set, m3s = m3_set;
  std::sort(m1s.begin(), m1s.end());
  std::sort(m3s.begin(), m3s.end());
  std::vector<DecompSpec> specs;
  for (int m1 : m1s)
    for (int m3 : m3s) {
      DecompSpec s = spec_template;
      s.m1 = m1;
      s.m3 = m3;
      s.ar_type = ArType::parcor;
      specs.push_back(s);
    }
  ScanTable table;
  run_rows(specs, y, opts, jobs, table);
  return table;
}

ScanTable order_scan_roots(const DecompSpec& spec_template,
                           const std::vector<double>& y,
                           const std::vector<int>& m1_set,
                           const std::vector<std::pair<int, int>>& mrmi_set,
                           const FitOptions& opts, int jobs) {
  if (m1_set.empty() || mrmi_set.empty())
    throw UsageError("order sets must be non-empty");
  std::vector<int> m1s = m1_set;
  std::sort(m1s.begin(), m1s.end());
  std::vector<std::pair<int, int>> pairs = mrmi_set;
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) {
              const int ma = a.first + 2 * a.second, mb = b.first + 2 * b.second;
              if (ma != mb) return ma < mb;
              return a.first < b.first;
            });
  std::vector<DecompSpec> specs;
  for (int m1 : m1s)
    for (const auto& [mr, mi] : pairs) {
      DecompSpec s = spec_template;
      s.m1 = m1;
      s.m3 = mr + 2 * mi;
      s.ar_type = ArType::roots;
      s.bounds.m_r = mr;
      s.bounds.m_i = mi;
      specs.push_back(s);
    }
  ScanTable table;
  run_rows(specs, y, opts, jobs, table);
  return table;
}

LambdaPath lambda_sweep(const DecompSpec& spec, const std::vector<double>& y,
                        const std::vector<double>& grid,
                        const FitOptions& opts) {
  if (spec.penalty == Penalty::none)
    throw UsageError("lambda sweep requires an L1 or L2 penalty");
  if (grid.empty()) throw UsageError("lambda grid must be non-empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw UsageError("lambda grid must be strictly increasing");
  if (grid.front() < 0.0) throw UsageError("lambda values must be >= 0");

  LambdaPath path;
  path.points.reserve(grid.size());
  std::vector<double> warm;
  bool have_warm = false;
  for (double lam : grid) {
    DecompSpec s = spec;
    s.lambda = lam;
    LambdaPoint pt;
    pt.lambda = lam;
    try {
      const FitResult fr =
          fit_internal(s, y, opts, have_warm ? &warm : nullptr);
      pt.theta = fr.theta;
      pt.parcor = fr.parcor;
      pt.loglik = fr.loglik;
      pt.aic = fr.aic;
      pt.converged = fr.converged;
      pt.ok = true;
      warm = fr.theta;
      have_warm = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.message = e.what();
    }
    path.points.push_back(pt);
  }
  return path;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid{0.0};
  for (int j = -8; j <= 16; ++j) grid.push_back(std::pow(10.0, j / 10.0));
  return grid;
}

}  // namespace seasadj::est
