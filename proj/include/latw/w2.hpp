#pragma once
// The m = 2 case: cross-ratio coordinates, the cubic Volterra-type bracket
// they carry, the check that the operator bracket reduces to it, and RK4
// Hamiltonian flows.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "latw/dense_matrix.hpp"
#include "latw/laurent_operator.hpp"
#include "latw/poisson.hpp"
#include "latw/polygon.hpp"

namespace latw {

/// x_i = [p_{i-1}, p_i, p_{i+1}, p_{i+2}], i = 0..N-1.
template <class S>
struct CrossRatioChart {
  std::vector<S> x;

  int period() const { return int(x.size()); }
  const S& operator[](long i) const { return x[pos_mod(i, long(x.size()))]; }
  friend bool operator==(const CrossRatioChart&, const CrossRatioChart&) = default;
};

/// Throws Degenerate naming the first site where the chart is 0, 1 or non-finite.
template <class S>
void validate_chart(const CrossRatioChart<S>& c) {
  if (c.period() < 3) throw DomainError("cross-ratio chart needs N > 2");
  for (long i = 0; i < c.period(); ++i) {
    const S& v = c.x[i];
    if (!std::isfinite(to_double(v))) throw Degenerate("non-finite cross-ratio", i);
    if (is_zero(v)) throw Degenerate("cross-ratio equals 0", i);
    if (is_zero(S(v - S(1)))) throw Degenerate("cross-ratio equals 1", i);
  }
}

/// x_i = alpha_i gamma_{i-1} / (beta_{i-1} beta_i).
template <class S>
CrossRatioChart<S> cross_ratios_from_coeffs(const PeriodicSequence<S>& alpha, const PeriodicSequence<S>& beta,
                                            const PeriodicSequence<S>& gamma) {
  const int n = alpha.period();
  if (beta.period() != n) throw PeriodMismatch(n, beta.period());
  if (gamma.period() != n) throw PeriodMismatch(n, gamma.period());
  if (n < 3) throw DomainError("cross-ratio chart needs N > 2");
  long z = beta.first_zero();
  if (z >= 0) throw Degenerate("zero beta entry", z);
  CrossRatioChart<S> c;
  for (long i = 0; i < n; ++i) c.x.push_back(S(alpha[i] * gamma[i - 1]) / S(beta[i - 1] * beta[i]));
  return c;
}

template <class S>
CrossRatioChart<S> cross_ratios_from_operator(const LaurentOperator<S>& d) {
  if (d.lo() < 0 || d.normalized().hi() != 2) throw DomainError("cross-ratio chart needs an operator of support [0, 2]");
  return cross_ratios_from_coeffs(d.coeff(0), d.coeff(1), d.coeff(2));
}

/// Cross-ratios of consecutive vertex quadruples of a polygon in RP^1.
template <class S>
CrossRatioChart<S> cross_ratios_from_polygon(const TwistedPolygon<S>& p) {
  if (p.dim() != 2) throw DomainError("cross-ratio chart needs a polygon in RP^1 (m = 2)");
  if (p.period() < 3) throw DomainError("cross-ratio chart needs N > 2");
  CrossRatioChart<S> c;
  for (long i = 0; i < p.period(); ++i)
    c.x.push_back(cross_ratio_lifts(p.lift(i - 1), p.lift(i), p.lift(i + 1), p.lift(i + 2)));
  return c;
}

/// {x_i, x_j}: {x_i, x_{i+1}} = x_i x_{i+1}(x_i + x_{i+1} - 1), {x_i, x_{i+2}} =
/// x_i x_{i+1} x_{i+2}, skew; for small N every applicable relation is summed.
template <class S>
S w2_bracket(const CrossRatioChart<S>& c, long i, long j) {
  const long n = c.period();
  if (n < 3) throw DomainError("w2 bracket needs N > 2");
  auto near = [&](long a) { return S(c[a] * c[a + 1] * S(c[a] + c[a + 1] - S(1))); };
  auto far = [&](long a) { return S(c[a] * c[a + 1] * c[a + 2]); };
  S v(0);
  if (pos_mod(j - i, n) == 1) v += near(i);
  if (pos_mod(j - i, n) == 2) v += far(i);
  if (pos_mod(i - j, n) == 1) v -= near(j);
  if (pos_mod(i - j, n) == 2) v -= far(j);
  return v;
}

template <class S>
Matrix<S> w2_matrix(const CrossRatioChart<S>& c) {
  const int n = c.period();
  Matrix<S> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = w2_bracket(c, i, j);
  return m;
}

/// d x_i / d a^j_t for the chart of an operator of support [0, 2]; columns in
/// (power, site) order as in bracket_matrix.
template <class S>
Matrix<S> chart_jacobian(const LaurentOperator<S>& d) {
  auto c = cross_ratios_from_operator(d);
  const long n = d.period();
  Matrix<S> j(int(n), int(3 * n));
  auto col = [n](int power, long site) { return int(power * n + pos_mod(site, n)); };
  for (long i = 0; i < n; ++i) {
    const S& x = c.x[i];
    j(int(i), col(0, i)) += x / d.at(0, i);
    j(int(i), col(2, i - 1)) += x / d.at(2, pos_mod(i - 1, n));
    j(int(i), col(1, i - 1)) -= x / d.at(1, pos_mod(i - 1, n));
    j(int(i), col(1, i)) -= x / d.at(1, i);
  }
  return j;
}

/// J P J^T - W2, the pushforward of the operator bracket minus the cubic bracket.
template <class S>
Matrix<S> w2_reduction_defect(const LaurentOperator<S>& d) {
  auto c = cross_ratios_from_operator(d);
  long z = d.coeff(0).first_zero();
  if (z >= 0) throw Degenerate("chart undefined: zero alpha entry", z);
  z = d.coeff(2).first_zero();
  if (z >= 0) throw Degenerate("chart undefined: zero gamma entry", z);
  Matrix<S> jac = chart_jacobian(d);
  auto table = bracket_matrix(d);
  return jac * table.values * jac.transposed() - w2_matrix(c);
}

/// max |J P J^T - W2| over all index pairs.
template <class S>
S verify_w2_reduction(const LaurentOperator<S>& d) {
  Matrix<S> defect = w2_reduction_defect(d);
  S worst(0);
  for (int i = 0; i < defect.rows(); ++i)
    for (int j = 0; j < defect.cols(); ++j) {
      S a = scalar_abs(defect(i, j));
      if (a > worst) worst = a;
    }
  return worst;
}

/// A Hamiltonian on the f64 chart: value and gradient.
struct Hamiltonian {
  std::string name;
  std::function<double(const std::vector<double>&)> value;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
};

/// Builtins: "const", "sum" (sum x_i), "sum_log" (sum log x_i).
Hamiltonian builtin_hamiltonian(const std::string& name);

/// out_i = sum_j {x_i, x_j} g_j (dispatched SIMD kernel).
std::vector<double> w2_vector_field(const std::vector<double>& x, const std::vector<double>& grad);

/// One classical RK4 step of dx_i/dt = sum_j {x_i, x_j} dH/dx_j.
CrossRatioChart<double> hamiltonian_step(const CrossRatioChart<double>& x, const Hamiltonian& h, double dt);

}  // namespace latw
