#pragma once
// The multiplicative r-matrix Poisson structure on N-periodic difference
// operators: Poisson tensor, brackets of functionals and of coefficient
// coordinates, and the gauge maps that preserve it.

#include <functional>
#include <string>
#include <vector>

#include "latw/dense_matrix.hpp"
#include "latw/laurent_operator.hpp"

namespace latw {

/// The coordinate function a^power_site.
struct CoordinateIndex {
  int power = 0;
  long site = 0;
  friend bool operator==(const CoordinateIndex&, const CoordinateIndex&) = default;
};

/// d a^j_t = T^{-j} delta_t, i.e. the indicator of site t + j at power -j.
template <class S>
LaurentOperator<S> coordinate_differential(int period, CoordinateIndex c) {
  return LaurentOperator<S>::monomial(PeriodicSequence<S>::indicator(period, c.site + c.power), -c.power);
}

template <class S>
struct OperatorFunctional {
  using Op = LaurentOperator<S>;
  std::function<S(const Op&)> value;
  std::function<Op(const Op&)> differential;

  static OperatorFunctional coordinate(CoordinateIndex c) {
    return {[c](const Op& d) { return d.at(c.power, c.site); },
            [c](const Op& d) { return coordinate_differential<S>(d.period(), c); }};
  }

  static OperatorFunctional constant(S v) {
    return {[v](const Op&) { return v; }, [](const Op& d) { return Op::zero(d.period()); }};
  }

  /// Differential by central differences over every coefficient in the window of D.
  static OperatorFunctional finite_difference(std::function<S(const Op&)> f, S h = S(1e-6)) {
    static_assert(!scalar_traits<S>::exact, "finite differences are a float-mode tool");
    auto diff = [f, h](const Op& d) {
      const int n = d.period();
      Op out = Op::zero(n);
      for (long j = d.lo(); j <= d.hi(); ++j)
        for (long t = 0; t < n; ++t) {
          Op up = d, down = d;
          up.entry(j, t) += h;
          down.entry(j, t) -= h;
          S g = (f(up) - f(down)) / (S(2) * h);
          out.entry(-j, t + j) += g;
        }
      return out;
    };
    return {f, diff};
  }
};

/// pi_D(X) = D r(X D) - r(D X) D.
template <class S>
LaurentOperator<S> poisson_tensor_apply(const LaurentOperator<S>& d, const LaurentOperator<S>& x) {
  return op_multiply(d, r_apply(op_multiply(x, d))) - op_multiply(r_apply(op_multiply(d, x)), d);
}

/// The same tensor with r replaced by r + sign/2 Id.
template <class S>
LaurentOperator<S> poisson_tensor_apply_shifted(const LaurentOperator<S>& d, const LaurentOperator<S>& x,
                                                int sign) {
  return op_multiply(d, r_apply_shifted(op_multiply(x, d), sign)) -
         op_multiply(r_apply_shifted(op_multiply(d, x), sign), d);
}

namespace detail {

template <class S>
S bracket_from_differentials(const LaurentOperator<S>& d, const LaurentOperator<S>& df,
                             const LaurentOperator<S>& dg) {
  S left = inner_product(r_apply(op_multiply(df, d)), op_multiply(dg, d));
  S right = inner_product(r_apply(op_multiply(d, df)), op_multiply(d, dg));
  return left - right;
}

}  // namespace detail

/// {F,G}(D) = (r(dF D), dG D) - (r(D dF), D dG).
template <class S>
S bracket_functions(const OperatorFunctional<S>& f, const OperatorFunctional<S>& g,
                    const LaurentOperator<S>& d) {
  if (!f.differential || !g.differential) throw DomainError("functional has no differential");
  return detail::bracket_from_differentials(d, f.differential(d), g.differential(d));
}

template <class S>
void check_coordinate(const LaurentOperator<S>& d, CoordinateIndex c) {
  if (d.lo() < 0) throw DomainError("coordinate brackets need a difference operator (lo >= 0)");
  if (c.power < 0 || c.power > d.hi() || c.site < 0 || c.site >= d.period())
    throw DomainError("coordinate index (" + std::to_string(c.power) + ", " + std::to_string(c.site) +
                      ") out of range");
}

template <class S>
S bracket_coordinates(const LaurentOperator<S>& d, CoordinateIndex p, CoordinateIndex q) {
  check_coordinate(d, p);
  check_coordinate(d, q);
  const int n = d.period();
  return detail::bracket_from_differentials(d, coordinate_differential<S>(n, p),
                                            coordinate_differential<S>(n, q));
}

/// All coordinates a^j_t, j = 0..hi, t = 0..N-1, in row-major (power, site) order.
template <class S>
std::vector<CoordinateIndex> coordinate_list(const LaurentOperator<S>& d) {
  std::vector<CoordinateIndex> out;
  for (int j = 0; j <= int(d.hi()); ++j)
    for (long t = 0; t < d.period(); ++t) out.push_back({j, t});
  return out;
}

template <class S>
struct BracketTable {
  int period = 1;
  std::vector<CoordinateIndex> coords;
  Matrix<S> values;

  int index(CoordinateIndex c) const { return int(c.power * period + c.site); }
  const S& operator()(CoordinateIndex p, CoordinateIndex q) const { return values(index(p), index(q)); }
};

/// Full coordinate bracket matrix, sharing the products per coordinate.
template <class S>
BracketTable<S> bracket_matrix(const LaurentOperator<S>& d) {
  if (d.lo() < 0) throw DomainError("coordinate brackets need a difference operator (lo >= 0)");
  const int n = d.period();
  auto coords = coordinate_list(d);
  const int k = int(coords.size());
  std::vector<LaurentOperator<S>> rxd, xd, rdx, dx;
  for (const auto& c : coords) {
    auto x = coordinate_differential<S>(n, c);
    xd.push_back(op_multiply(x, d));
    dx.push_back(op_multiply(d, x));
    rxd.push_back(r_apply(xd.back()));
    rdx.push_back(r_apply(dx.back()));
  }
  Matrix<S> m(k, k);
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      S v = inner_product(rxd[p], xd[q]) - inner_product(rdx[p], dx[q]);
      m(q, p) = -v;
      m(p, q) = std::move(v);
    }
  return {n, std::move(coords), std::move(m)};
}

/// The m = 2 coordinate brackets of alpha + beta T + gamma T^2 written out
/// pair by pair, in the layout of bracket_matrix; unlisted pairs are 0.
template <class S>
Matrix<S> closed_form_bracket_m2(const LaurentOperator<S>& d) {
  if (d.lo() != 0 || d.hi() != 2) throw DomainError("closed-form table needs an operator of support [0, 2]");
  constexpr int A = 0, B = 1, G = 2;
  const long n = d.period();
  Matrix<S> e(int(3 * n), int(3 * n));
  auto idx = [n](int p, long s) { return int(p * n + pos_mod(s, n)); };
  auto put = [&](int p, long s, int q, long t, const S& v) {
    e(idx(p, s), idx(q, t)) += v;
    e(idx(q, t), idx(p, s)) -= v;
  };
  auto a = [&](long i) { return d.at(A, pos_mod(i, n)); };
  auto b = [&](long i) { return d.at(B, pos_mod(i, n)); };
  auto g = [&](long i) { return d.at(G, pos_mod(i, n)); };
  const S h = half<S>();
  for (long i = 0; i < n; ++i) {
    put(A, i, B, i - 1, S(-h * a(i) * b(i - 1)));
    put(A, i, B, i, S(h * a(i) * b(i)));
    put(A, i, G, i - 2, S(-h * a(i) * g(i - 2)));
    put(A, i, G, i, S(h * a(i) * g(i)));
    put(B, i, B, i + 1, S(a(i + 1) * g(i)));
    put(B, i, G, i - 1, S(-h * b(i) * g(i - 1)));
    put(B, i, G, i, S(h * b(i) * g(i)));
  }
  return e;
}

/// alpha D alpha^{-1}: a^i_s -> alpha_s a^i_s / alpha_{s+i}.
template <class S>
LaurentOperator<S> conjugate(const LaurentOperator<S>& d, const QuasiPeriodicSequence<S>& alpha) {
  if (alpha.period() != d.period()) throw PeriodMismatch(d.period(), alpha.period());
  long z = alpha.base().first_zero();
  if (z >= 0) throw NotInvertible("zero entry in conjugating sequence at site " + std::to_string(z));
  LaurentOperator<S> out = d;
  for (long i = d.lo(); i <= d.hi(); ++i) out.set_coeff(i, d.coeff_ref(i) * alpha.ratio_to_shift(i));
  return out;
}

/// alpha D for an order-0 periodic alpha.
template <class S>
LaurentOperator<S> left_multiply(const LaurentOperator<S>& d, const PeriodicSequence<S>& alpha) {
  if (alpha.period() != d.period()) throw PeriodMismatch(d.period(), alpha.period());
  long z = alpha.first_zero();
  if (z >= 0) throw NotInvertible("zero entry in multiplier at site " + std::to_string(z));
  return left_scale(alpha, d);
}

/// Cyclic sum {a_p,{a_q,a_r}} + {a_q,{a_r,a_p}} + {a_r,{a_p,a_q}}; the inner
/// bracket is differentiated by central differences with step h.
inline double jacobi_residual(const LaurentOperator<double>& d, CoordinateIndex p, CoordinateIndex q,
                              CoordinateIndex r, double h) {
  if (!(h > 0)) throw DomainError("finite-difference step must be positive");
  using F = OperatorFunctional<double>;
  auto outer = [&](CoordinateIndex a, CoordinateIndex b, CoordinateIndex c) {
    auto inner = F::finite_difference(
        [b, c](const LaurentOperator<double>& x) { return bracket_coordinates(x, b, c); }, h);
    return bracket_functions(F::coordinate(a), inner, d);
  };
  return outer(p, q, r) + outer(q, r, p) + outer(r, p, q);
}

}  // namespace latw
