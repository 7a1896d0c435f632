#pragma once

#include <complex>
#include <vector>

namespace seasadj::ar {

// Box constraint on the characteristic roots of the AR polynomial:
// m_r real roots in (r_min, r_max) and m_i complex-conjugate pairs with
// modulus in (r_min, r_max) and argument in (theta_min, theta_max).
struct RootBounds {
  int m_r = 0;
  int m_i = 0;
  double r_min = 0.0;
  double r_max = 0.98;
  double theta_min = 0.0;  // 0 means "resolve from the seasonal period"
  double theta_max = 0.0;  // 0 means pi
  bool negative_real = false;  // widen the real-root interval to (-r_max, r_max)

  int order() const { return m_r + 2 * m_i; }
  void validate() const;
};

struct ComplexPair {
  double modulus = 0.0;
  double argument = 0.0;  // in (0, pi)
};

// Characteristic roots in factored form, canonical order: complex pairs
// ascending by argument (ties by modulus), real roots ascending.
struct RootSet {
  std::vector<double> real_roots;
  std::vector<ComplexPair> complex_pairs;

  int order() const {
    return static_cast<int>(real_roots.size() + 2 * complex_pairs.size());
  }
  void canonicalize();
};

// Expand prod(lambda - s_j) * prod(lambda^2 - 2 r cos(theta) lambda + r^2)
// and return a_1..a_m with the convention
// a(lambda) = lambda^m - sum_j a_j lambda^(m-j).
std::vector<double> roots_to_coeffs(const RootSet& rs);

// Roots of the characteristic polynomial via the companion matrix.
// Conjugate pairs are adjacent (positive-imaginary first), canonical order.
std::vector<std::complex<double>> coeffs_to_roots(const std::vector<double>& a);

// Group companion-matrix roots back into a RootSet (imaginary parts below
// 1e-9 in magnitude are treated as real).
RootSet roots_to_rootset(const std::vector<std::complex<double>>& roots);

// Levinson step-up: PARCOR b_1..b_m -> AR coefficients a_1..a_m.
// Requires |b_j| < 1 for all j.
std::vector<double> parcor_to_coeffs(const std::vector<double>& b);

// Levinson step-down, the inverse map. Throws ConstraintError when the
// input is nonstationary (some |b_m| >= 1 along the recursion).
std::vector<double> coeffs_to_parcor(const std::vector<double>& a);

bool is_stationary(const std::vector<double>& a);

// Unconstrained -> PARCOR-constrained coefficients: b_j = cap * tanh(u_j).
std::vector<double> transform_parcor(const std::vector<double>& u, double cap);

// Unconstrained -> root-box-constrained RootSet via logistic squashing of
// each modulus/argument into its interval. Layout of u: m_r real-root
// entries, then (modulus, argument) per complex pair.
RootSet transform_roots(const std::vector<double>& u, const RootBounds& bounds);

}  // namespace seasadj::ar
