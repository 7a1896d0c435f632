#include "ar.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace seasadj::ar {

namespace {

constexpr double kStationarityMargin = 1e-12;
constexpr double kRealRootImagTol = 1e-9;

// Multiply the polynomial coefficient list (ascending in lambda powers is
// awkward here; we keep descending: c[0] lambda^d + ... + c[d]).
std::vector<double> poly_mul(const std::vector<double>& p,
                             const std::vector<double>& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  return out;
}

}  // namespace

void RootBounds::validate() const {
  if (m_r < 0 || m_i < 0) throw SpecError("root counts must be nonnegative");
  if (!(r_min >= 0.0 && r_min < r_max && r_max < 1.0))
    throw SpecError("require 0 <= r_min < r_max < 1");
  const double tmax = theta_max > 0.0 ? theta_max : std::numbers::pi;
  if (!(theta_min >= 0.0 && theta_min < tmax && tmax <= std::numbers::pi))
    throw SpecError("require 0 <= theta_min < theta_max <= pi");
}

void RootSet::canonicalize() {
  std::sort(real_roots.begin(), real_roots.end());
  std::sort(complex_pairs.begin(), complex_pairs.end(),
            [](const ComplexPair& a, const ComplexPair& b) {
              if (a.argument != b.argument) return a.argument < b.argument;
              return a.modulus < b.modulus;
            });
}

std::vector<double> roots_to_coeffs(const RootSet& rs) {
  std::vector<double> poly{1.0};
  for (double s : rs.real_roots) poly = poly_mul(poly, {1.0, -s});
  for (const auto& p : rs.complex_pairs) {
    const double r = p.modulus;
    poly = poly_mul(poly, {1.0, -2.0 * r * std::cos(p.argument), r * r});
  }
  // a(lambda) = lambda^m - sum a_j lambda^(m-j), so a_j = -poly[j].
  std::vector<double> a(poly.size() - 1);
  for (std::size_t j = 1; j < poly.size(); ++j) a[j - 1] = -poly[j];
  return a;
}

std::vector<std::complex<double>> coeffs_to_roots(const std::vector<double>& a) {
  const int m = static_cast<int>(a.size());
  if (m == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) companion(0, j) = a[j];
  for (int j = 1; j < m; ++j) companion(j, j - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> roots(m);
  for (int j = 0; j < m; ++j) roots[j] = es.eigenvalues()(j);

  // Canonical order: complex pairs first (ascending argument, positive
  // imaginary part leading its conjugate), then real roots ascending.
  std::vector<std::complex<double>> cplx, real;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) <= kRealRootImagTol)
      real.emplace_back(r.real(), 0.0);
    else if (r.imag() > 0.0)
      cplx.push_back(r);
  }
  std::sort(cplx.begin(), cplx.end(), [](const auto& x, const auto& y) {
    const double ax = std::arg(x), ay = std::arg(y);
    if (ax != ay) return ax < ay;
    return std::abs(x) < std::abs(y);
  });
  std::sort(real.begin(), real.end(),
            [](const auto& x, const auto& y) { return x.real() < y.real(); });
  std::vector<std::complex<double>> out;
  out.reserve(m);
  for (const auto& r : cplx) {
    out.push_back(r);
    out.push_back(std::conj(r));
  }
  for (const auto& r : real) out.push_back(r);
  return out;
}

RootSet roots_to_rootset(const std::vector<std::complex<double>>& roots) {
  RootSet rs;
  for (const auto& r : roots) {
    if (std::abs(r.imag()) <= kRealRootImagTol) {
      rs.real_roots.push_back(r.real());
    } else if (r.imag() > 0.0) {
      rs.complex_pairs.push_back({std::abs(r), std::arg(r)});
    }
  }
  rs.canonicalize();
  return rs;
}

std::vector<double> parcor_to_coeffs(const std::vector<double>& b) {
  for (double bj : b)
    if (!(std::abs(bj) < 1.0))
      throw ConstraintError("PARCOR coefficient outside (-1, 1)");
  std::vector<long double> a;
  for (std::size_t m = 0; m < b.size(); ++m) {
    std::vector<long double> next(m + 1);
    const long double bm = b[m];
    for (std::size_t j = 0; j < m; ++j) next[j] = a[j] - bm * a[m - 1 - j];
    next[m] = bm;
    a = std::move(next);
  }
  return std::vector<double>(a.begin(), a.end());
}

std::vector<double> coeffs_to_parcor(const std::vector<double>& a) {
  // The division by 1 - b_m^2 is ill conditioned near |b_m| = 1, so the
  // recursion runs in extended precision.
  std::vector<double> b(a.size());
  std::vector<long double> cur(a.begin(), a.end());
  for (int m = static_cast<int>(a.size()); m >= 1; --m) {
    const long double bm = cur[m - 1];
    if (!(std::abs(static_cast<double>(bm)) < 1.0))
      throw ConstraintError("nonstationary AR coefficients in PARCOR step-down");
    b[m - 1] = static_cast<double>(bm);
    std::vector<long double> prev(m - 1);
    const long double denom = 1.0L - bm * bm;
    for (int j = 0; j < m - 1; ++j)
      prev[j] = (cur[j] + bm * cur[m - 2 - j]) / denom;
    cur = std::move(prev);
  }
  return b;
}

bool is_stationary(const std::vector<double>& a) {
  if (a.empty()) return true;
  for (double aj : a)
    if (!std::isfinite(aj)) return false;
  double max_mod = 0.0;
  for (const auto& r : coeffs_to_roots(a)) max_mod = std::max(max_mod, std::abs(r));
  return max_mod < 1.0 - kStationarityMargin;
}

std::vector<double> transform_parcor(const std::vector<double>& u, double cap) {
  if (!(cap > 0.0 && cap <= 1.0)) throw SpecError("parcor_cap must be in (0, 1]");
  std::vector<double> b(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) b[j] = cap * std::tanh(u[j]);
  return b;
}

namespace {
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
}  // namespace

RootSet transform_roots(const std::vector<double>& u, const RootBounds& bounds) {
  bounds.validate();
  if (static_cast<int>(u.size()) != bounds.m_r + 2 * bounds.m_i)
    throw UsageError("unconstrained vector length does not match root counts");
  const double tmax = bounds.theta_max > 0.0 ? bounds.theta_max : std::numbers::pi;
  const double s_lo = bounds.negative_real ? -bounds.r_max : bounds.r_min;
  RootSet rs;
  int idx = 0;
  for (int j = 0; j < bounds.m_r; ++j)
    rs.real_roots.push_back(s_lo + (bounds.r_max - s_lo) * logistic(u[idx++]));
  for (int j = 0; j < bounds.m_i; ++j) {
    ComplexPair p;
    p.modulus =
        bounds.r_min + (bounds.r_max - bounds.r_min) * logistic(u[idx++]);
    p.argument = bounds.theta_min + (tmax - bounds.theta_min) * logistic(u[idx++]);
    rs.complex_pairs.push_back(p);
  }
  rs.canonicalize();
  return rs;
}

}  // namespace seasadj::ar
