#pragma once
// Discrete Drinfeld-Sokolov side: matrix sequences in G^N = GL(m)^N, the
// twisted bracket and gauge action, gradients of gauge-invariant extensions,
// the reduced bracket on the invariants a^r_s, and the polygon vector fields
// X^f (from Q^f) and Y^f (from the scalar operator side).

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "latw/dense_matrix.hpp"
#include "latw/laurent_operator.hpp"
#include "latw/poisson.hpp"
#include "latw/polygon.hpp"
#include "latw/random.hpp"

namespace latw {

/// N-tuple of m x m matrices, indexed cyclically.
template <class S>
struct MatrixSequence {
  std::vector<Matrix<S>> mats;

  MatrixSequence() = default;
  explicit MatrixSequence(std::vector<Matrix<S>> m) : mats(std::move(m)) {}
  MatrixSequence(int period, int dim) : mats(period, Matrix<S>(dim, dim)) {}

  int period() const { return int(mats.size()); }
  int dim() const { return mats.empty() ? 0 : mats.front().rows(); }
  const Matrix<S>& operator[](long s) const { return mats[pos_mod(s, long(mats.size()))]; }
  Matrix<S>& operator[](long s) { return mats[pos_mod(s, long(mats.size()))]; }

  /// (T X)_s = X_{s+1}.
  MatrixSequence shifted() const {
    MatrixSequence out;
    for (long s = 0; s < period(); ++s) out.mats.push_back((*this)[s + 1]);
    return out;
  }

  MatrixSequence& operator-=(const MatrixSequence& o) {
    for (long s = 0; s < period(); ++s) mats[s] -= o.mats[s];
    return *this;
  }
  friend MatrixSequence operator-(MatrixSequence a, const MatrixSequence& b) { return a -= b; }
  friend bool operator==(const MatrixSequence&, const MatrixSequence&) = default;
};

/// <X, Y> = sum_s tr(X_s Y_s).
template <class S>
S pairing(const MatrixSequence<S>& x, const MatrixSequence<S>& y) {
  S total(0);
  const int m = x.dim();
  for (long s = 0; s < x.period(); ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) total += x[s](i, j) * y[s](j, i);
  return total;
}

/// Left gradient (nabla F) and right gradient (nabla' F) at a point of G^N:
/// (nabla_s)_{ij} = d/de F((I + e E_ji) B_s), (nabla'_s)_{ij} = d/de F(B_s (I + e E_ji)).
template <class S>
struct GradientPair {
  MatrixSequence<S> left;
  MatrixSequence<S> right;
};

/// Polynomial in the invariants a^r_s: sum of c * prod a^{r_k}_{s_k}.
template <class S>
struct PolynomialFunctional {
  struct Term {
    S coeff;
    std::vector<std::pair<int, long>> factors;
  };
  int m = 0;
  int period = 0;
  std::vector<Term> terms;

  template <class T>
  T evaluate(const CompanionSequence<T>& a) const {
    T total(0);
    for (const auto& t : terms) {
      T v(t.coeff);
      for (const auto& [r, s] : t.factors) v *= a(r, s);
      total += v;
    }
    return total;
  }

  /// delta_{a^r_s} f as m periodic sequences.
  std::vector<PeriodicSequence<S>> variation(const CompanionSequence<S>& a) const {
    std::vector<PeriodicSequence<S>> g(m, PeriodicSequence<S>(period));
    for (const auto& t : terms)
      for (std::size_t k = 0; k < t.factors.size(); ++k) {
        S v = t.coeff;
        for (std::size_t l = 0; l < t.factors.size(); ++l)
          if (l != k) v *= a(t.factors[l].first, t.factors[l].second);
        g[t.factors[k].first][t.factors[k].second] += v;
      }
    return g;
  }

  static PolynomialFunctional coordinate(int m, int period, int r, long s) {
    return {m, period, {{S(1), {{r, pos_mod(s, period)}}}}};
  }
  static PolynomialFunctional constant(int m, int period, const S& c) { return {m, period, {{c, {}}}}; }

  /// Random polynomial of degree <= max_degree with a few terms.
  static PolynomialFunctional random(Rng& rng, int m, int period, int max_degree = 2, int n_terms = 3) {
    PolynomialFunctional p{m, period, {}};
    for (int t = 0; t < n_terms; ++t) {
      Term term{rng.ratio<S>(3, 3), {}};
      int deg = int(rng.uniform_int(0, max_degree));
      for (int k = 0; k < deg; ++k)
        term.factors.push_back({int(rng.uniform_int(0, m - 1)), rng.uniform_int(0, period - 1)});
      p.terms.push_back(std::move(term));
    }
    return p;
  }
};

/// A function of the invariants together with its variational derivatives.
template <class S>
struct InvariantFunctional {
  std::function<S(const CompanionSequence<S>&)> value;
  std::function<std::vector<PeriodicSequence<S>>(const CompanionSequence<S>&)> variation;

  static InvariantFunctional from_polynomial(PolynomialFunctional<S> p) {
    return {[p](const CompanionSequence<S>& a) { return p.evaluate(a); },
            [p](const CompanionSequence<S>& a) { return p.variation(a); }};
  }

  /// Variation by central differences (float mode).
  static InvariantFunctional finite_difference(std::function<S(const CompanionSequence<S>&)> f, S h = S(1e-6)) {
    static_assert(!scalar_traits<S>::exact, "finite differences are a float-mode tool");
    auto var = [f, h](const CompanionSequence<S>& a) {
      std::vector<PeriodicSequence<S>> g(a.m, PeriodicSequence<S>(a.period));
      for (int r = 0; r < a.m; ++r)
        for (long s = 0; s < a.period; ++s) {
          auto up = a, down = a;
          up(r, s) += h;
          down(r, s) -= h;
          g[r][s] = (f(up) - f(down)) / (S(2) * h);
        }
      return g;
    };
    return {f, var};
  }
};

/// Invariants of a point B of G^N: eta_{s+1} = B_s eta_s, eta_0 = I, gamma_s =
/// eta_s^{-1} e_1 and rho_s a_s = gamma_{s+m} with rho_s = (gamma_s, ..., gamma_{s+m-1}).
template <class T>
CompanionSequence<T> invariants_from_point(const MatrixSequence<T>& b) {
  const int m = b.dim(), n = b.period();
  Matrix<T> eta = Matrix<T>::identity(m);
  std::vector<T> e1(m, T(0));
  e1[0] = T(1);
  std::vector<std::vector<T>> gam;
  for (long s = 0; s < n + m; ++s) {
    gam.push_back(solve(eta, e1));
    eta = b[s] * eta;
  }
  CompanionSequence<T> inv{m, n, std::vector<PeriodicSequence<T>>(m, PeriodicSequence<T>(n))};
  for (long s = 0; s < n; ++s) {
    std::vector<std::vector<T>> cols(gam.begin() + s, gam.begin() + s + m);
    auto sol = solve(Matrix<T>::from_columns(cols), gam[s + m]);
    for (int r = 0; r < m; ++r) inv.a[r][s] = sol[r];
  }
  return inv;
}

/// The polygon gamma_0..gamma_{N-1} of a point, with monodromy R_0^{-1} R_N where
/// R_s has rows gamma_s, ..., gamma_{s+m-1}.
template <class S>
TwistedPolygon<S> polygon_from_point(const MatrixSequence<S>& b) {
  const int m = b.dim(), n = b.period();
  Matrix<S> eta = Matrix<S>::identity(m);
  std::vector<S> e1(m, S(0));
  e1[0] = S(1);
  std::vector<std::vector<S>> gam;
  for (long s = 0; s < n + m; ++s) {
    gam.push_back(solve(eta, e1));
    eta = b[s] * eta;
  }
  Matrix<S> r0(m, m), rn(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      r0(i, j) = gam[i][j];
      rn(i, j) = gam[n + i][j];
    }
  gam.resize(n);
  return TwistedPolygon<S>(m, std::move(gam), inverse(r0) * rn);
}

/// The point carrying the companion data: B_s = A_s^{-1}.
template <class S>
MatrixSequence<S> inverse_companion_point(const CompanionSequence<S>& a) {
  MatrixSequence<S> b;
  for (auto& m : companion_matrices(a)) b.mats.push_back(inverse(m));
  return b;
}

template <class S>
MatrixSequence<S> companion_point(const CompanionSequence<S>& a) {
  return MatrixSequence<S>(companion_matrices(a));
}

/// Gradients of the extension F(B) = f(invariants(B)) by forward-mode duals.
template <class S>
GradientPair<S> gradient_pair_dual(const PolynomialFunctional<S>& f, const MatrixSequence<S>& b) {
  using D = Dual<S>;
  const int m = b.dim(), n = b.period();
  MatrixSequence<D> base;
  for (const auto& mat : b.mats) {
    Matrix<D> dm(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dm(i, j) = D(mat(i, j));
    base.mats.push_back(std::move(dm));
  }
  GradientPair<S> out{MatrixSequence<S>(n, m), MatrixSequence<S>(n, m)};
  for (long s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        // B_s (I + e E_ji): column i gains e * (column j of B_s).
        MatrixSequence<D> pr = base;
        for (int p = 0; p < m; ++p) pr[s](p, i).deriv = b[s](p, j);
        out.right[s](i, j) = f.evaluate(invariants_from_point(pr)).deriv;
        // (I + e E_ji) B_s: row j gains e * (row i of B_s).
        MatrixSequence<D> pl = base;
        for (int q = 0; q < m; ++q) pl[s](j, q).deriv = b[s](i, q);
        out.left[s](i, j) = f.evaluate(invariants_from_point(pl)).deriv;
      }
  return out;
}

/// Gradients of an arbitrary function on G^N by central differences (float mode).
inline GradientPair<double> gradient_pair_fd(const std::function<double(const MatrixSequence<double>&)>& f,
                                             const MatrixSequence<double>& b, double h = 1e-6) {
  const int m = b.dim(), n = b.period();
  GradientPair<double> out{MatrixSequence<double>(n, m), MatrixSequence<double>(n, m)};
  for (long s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Matrix<double> e(m, m);
        e(j, i) = 1.0;
        auto eval = [&](bool right, double eps) {
          MatrixSequence<double> x = b;
          Matrix<double> step = Matrix<double>::identity(m) + e * eps;
          x[s] = right ? b[s] * step : step * b[s];
          return f(x);
        };
        out.right[s](i, j) = (eval(true, h) - eval(true, -h)) / (2 * h);
        out.left[s](i, j) = (eval(false, h) - eval(false, -h)) / (2 * h);
      }
  return out;
}

namespace detail {

// v^T A_s for the companion matrix A_s.
template <class S>
std::vector<S> row_times_companion(const std::vector<S>& v, const CompanionSequence<S>& a, long s) {
  const int m = a.m;
  std::vector<S> out(m);
  for (int j = 0; j + 1 < m; ++j) out[j] = v[j + 1];
  S last(0);
  for (int i = 0; i < m; ++i) last += v[i] * a(i, s);
  out[m - 1] = last;
  return out;
}

}  // namespace detail

/// Analytic gradients at B = A^{-1} from the variations of f: the first row of
/// nabla' and the last row of nabla are explicit, rows 1..m-1 of nabla'_s equal
/// those of nabla_{s-1}, and nabla_s = A_s^{-1} nabla'_s A_s fills the rest.
template <class S>
GradientPair<S> grad_from_invariants(const std::vector<PeriodicSequence<S>>& var, const CompanionSequence<S>& a) {
  const int m = a.m, n = a.period;
  for (long s = 0; s < n; ++s)
    if (is_zero(a(0, s))) throw Degenerate("zero a^0 in companion data", s);
  // rows[r][s] = row r of nabla_s.
  std::vector<std::vector<std::vector<S>>> rows(m, std::vector<std::vector<S>>(n));
  std::vector<std::vector<S>> first(n, std::vector<S>(m));
  for (long s = 0; s < n; ++s) {
    const S& a0 = a(0, s);
    first[s][0] = -a0 * var[0][s];
    for (int j = 1; j < m; ++j) first[s][j] = -a0 * var[j][s];
    std::vector<S> last(m);
    for (int j = 0; j + 1 < m; ++j) last[j] = -var[j + 1][s];
    S corner = -a0 * var[0][s];
    for (int i = 1; i < m; ++i) corner -= a(i, s) * var[i][s];
    last[m - 1] = corner;
    rows[m - 1][s] = std::move(last);
  }
  for (int r = m - 2; r >= 0; --r)
    for (long s = 0; s < n; ++s) {
      // e_r^T A^{-1} = -(a^{r+1}/a^0) e_0^T + e_{r+1}^T.
      const auto& below = rows[r + 1][pos_mod(s - 1, long(n))];
      S c = a(r + 1, s) / a(0, s);
      std::vector<S> v(m);
      for (int j = 0; j < m; ++j) v[j] = below[j] - c * first[s][j];
      rows[r][s] = detail::row_times_companion(v, a, s);
    }
  GradientPair<S> g{MatrixSequence<S>(n, m), MatrixSequence<S>(n, m)};
  for (long s = 0; s < n; ++s)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        g.left[s](i, j) = rows[i][s][j];
        g.right[s](i, j) = i == 0 ? first[s][j] : rows[i][pos_mod(s - 1, long(n))][j];
      }
  return g;
}

template <class S>
GradientPair<S> grad_from_invariants(const InvariantFunctional<S>& f, const CompanionSequence<S>& a) {
  return grad_from_invariants(f.variation(a), a);
}

/// <nabla F - T nabla'F, nabla G> - 1/2 <nabla F - T nabla'F, nabla G - T nabla'G>.
template <class S>
S reduced_bracket(const GradientPair<S>& f, const GradientPair<S>& g) {
  MatrixSequence<S> x = f.left - f.right.shifted();
  MatrixSequence<S> y = g.left - g.right.shifted();
  return pairing(x, g.left) - half<S>() * pairing(x, y);
}

template <class S>
S reduced_bracket(const InvariantFunctional<S>& f, const InvariantFunctional<S>& g, const CompanionSequence<S>& a) {
  return reduced_bracket(grad_from_invariants(f, a), grad_from_invariants(g, a));
}

/// r(xi (x) eta) = tr(xi_+ eta_-) + 1/2 tr(xi_0 eta_0); +, -, 0 are the strictly
/// upper, strictly lower and diagonal parts.
template <class S>
S rhat_pair(const Matrix<S>& xi, const Matrix<S>& eta) {
  const int m = xi.rows();
  S total(0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) total += xi(i, j) * eta(j, i);
  S diag(0);
  for (int i = 0; i < m; ++i) diag += xi(i, i) * eta(i, i);
  return total + half<S>() * diag;
}

/// Twisted bracket on G^N from the gradient pairs of F and G.
template <class S>
S twisted_bracket(const GradientPair<S>& f, const GradientPair<S>& g) {
  auto wedge = [](const Matrix<S>& x, const Matrix<S>& y) {
    return S(half<S>() * S(rhat_pair(x, y) - rhat_pair(y, x)));
  };
  S total(0);
  for (long s = 0; s < f.left.period(); ++s) {
    total += wedge(f.left[s], g.left[s]);
    total += wedge(f.right[s], g.right[s]);
    total -= rhat_pair(f.right[s + 1], g.left[s]);
    total += rhat_pair(g.right[s + 1], f.left[s]);
  }
  return total;
}

/// h_s e_1 = e_1 for every s.
template <class S>
bool in_isotropy(const MatrixSequence<S>& h) {
  for (const auto& m : h.mats)
    for (int i = 0; i < m.rows(); ++i)
      if (!(m(i, 0) == S(i == 0 ? 1 : 0))) return false;
  return true;
}

/// A'_s = h_{s+1} A_s h_s^{-1}, acting on the point B = A^{-1}.
template <class S>
MatrixSequence<S> gauge_act(const MatrixSequence<S>& h, const MatrixSequence<S>& a) {
  if (h.period() != a.period()) throw PeriodMismatch(a.period(), h.period());
  for (long s = 0; s < h.period(); ++s)
    for (int i = 0; i < h.dim(); ++i)
      if (!(h[s](i, 0) == S(i == 0 ? 1 : 0)))
        throw DomainError("gauge element does not fix e_1 at site " + std::to_string(s));
  MatrixSequence<S> out;
  for (long s = 0; s < a.period(); ++s) out.mats.push_back(h[s + 1] * a[s] * inverse(h[s]));
  return out;
}

/// Q^f_s e_1 from the variations of f, per site.
template <class S>
std::vector<std::vector<S>> qf_first_column(const std::vector<PeriodicSequence<S>>& var,
                                            const CompanionSequence<S>& a) {
  const int m = a.m;
  const long n = a.period;
  auto d = [&](int r, long t) -> const S& { return var[r][t]; };
  std::vector<std::vector<S>> out(n, std::vector<S>(m));
  for (long s = 0; s < n; ++s) {
    S top(0);
    for (int k = 1; k < m; ++k) top += a(k, s - k) * d(k, s - k);
    for (int k = 0; k < m; ++k) top -= a(k, s - m) * d(k, s - m);
    top -= a(0, s) * d(0, s);
    out[s][0] = half<S>() * top;
    // Entry r (1-based r = 2..m).
    for (int r = 2; r <= m; ++r) {
      S v(0);
      for (int k = 1; k <= m - r; ++k) v += a(r + k - 1, s - k) * d(k, s - k);
      v -= d(m - r + 1, s - m + r - 1);
      out[s][r - 1] = v;
    }
  }
  return out;
}

/// Full Q^f: column k of Q_s is A_s ... A_{s+k-1} q_{s+k}, so that rho Q = (X, T X, ...).
template <class S>
MatrixSequence<S> complete_q(const std::vector<std::vector<S>>& q, const CompanionSequence<S>& a) {
  const int m = a.m;
  const long n = a.period;
  auto mats = companion_matrices(a);
  MatrixSequence<S> out(int(n), m);
  for (long s = 0; s < n; ++s)
    for (int k = 0; k < m; ++k) {
      std::vector<S> col = q[pos_mod(s + k, n)];
      for (int l = k - 1; l >= 0; --l) col = mats[pos_mod(s + l, n)] * col;
      for (int i = 0; i < m; ++i) out[s](i, k) = col[i];
    }
  return out;
}

template <class S>
struct Evolution {
  CompanionSequence<S> rates;  ///< (a^r_s)_t
  S off_column_defect;         ///< max |entry| of A_t outside the last column
};

/// A_t,s = A_s Q_{s+1} - Q_s A_s; the last column holds the time derivatives.
template <class S>
Evolution<S> invariant_evolution(const MatrixSequence<S>& q, const CompanionSequence<S>& a) {
  const int m = a.m;
  const long n = a.period;
  auto mats = companion_matrices(a);
  Evolution<S> ev{{m, int(n), std::vector<PeriodicSequence<S>>(m, PeriodicSequence<S>(int(n)))}, S(0)};
  for (long s = 0; s < n; ++s) {
    Matrix<S> at = mats[s] * q[s + 1] - q[s] * mats[s];
    for (int r = 0; r < m; ++r) ev.rates(r, s) = at(r, m - 1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j + 1 < m; ++j) {
        S v = scalar_abs(at(i, j));
        if (v > ev.off_column_defect) ev.off_column_defect = v;
      }
  }
  return ev;
}

/// delta_D F = sum_{r<m} (T^{-m} a^r + T^{-r}) delta_{a^r} f on the section b^m = -1.
template <class S>
LaurentOperator<S> section_differential(const std::vector<PeriodicSequence<S>>& var, const CompanionSequence<S>& a) {
  const int m = a.m, n = a.period;
  LaurentOperator<S> out = LaurentOperator<S>::zero(n);
  for (int r = 0; r < m; ++r) {
    out.add_coeff(-r, var[r].shifted(-r));
    out.add_coeff(-m, (a.a[r] * var[r]).shifted(-m));
  }
  return out;
}

/// {F,G}_1(D) = <r(D dF), D dG> - <r(dF D), dG D> with D = sum a^r T^r - T^m.
template <class S>
S section_bracket(const std::vector<PeriodicSequence<S>>& var_f, const std::vector<PeriodicSequence<S>>& var_g,
                  const CompanionSequence<S>& a) {
  LaurentOperator<S> d = section_operator(a);
  LaurentOperator<S> df = section_differential(var_f, a), dg = section_differential(var_g, a);
  return inner_product(r_apply(op_multiply(d, df)), op_multiply(d, dg)) -
         inner_product(r_apply(op_multiply(df, d)), op_multiply(dg, d));
}

template <class S>
S section_bracket(const InvariantFunctional<S>& f, const InvariantFunctional<S>& g, const CompanionSequence<S>& a) {
  return section_bracket(f.variation(a), g.variation(a), a);
}

/// Vector field per site (s = 0..N-1) together with its coordinates in the
/// frame rho_s = (gamma_s, ..., gamma_{s+m-1}).
template <class S>
struct PolygonField {
  std::vector<std::vector<S>> vectors;
  std::vector<std::vector<S>> frame_coeffs;
  friend bool operator==(const PolygonField&, const PolygonField&) = default;
};

/// X^f_s = rho_s Q^f_s e_1.
template <class S>
PolygonField<S> xf_field(const InvariantFunctional<S>& f, const TwistedPolygon<S>& p) {
  auto a = invariants_of(p);
  auto q = qf_first_column(f.variation(a), a);
  PolygonField<S> out;
  for (long s = 0; s < p.period(); ++s) {
    out.vectors.push_back(p.frame(s) * q[s]);
    out.frame_coeffs.push_back(q[s]);
  }
  return out;
}

/// Y^f = r(delta_D F D) applied to the lifts: Y_s = sum_k c^k_s gamma_{s+k}.
template <class S>
PolygonField<S> yf_field(const InvariantFunctional<S>& f, const TwistedPolygon<S>& p) {
  auto a = invariants_of(p);
  const int m = a.m;
  LaurentOperator<S> d = section_operator(a);
  LaurentOperator<S> op = r_apply(op_multiply(section_differential(f.variation(a), a), d));
  PolygonField<S> out;
  for (long s = 0; s < p.period(); ++s) {
    std::vector<S> y(m, S(0));
    for (long k = op.lo(); k <= op.hi(); ++k) {
      const S& c = op.at(k, s);
      if (is_zero(c)) continue;
      auto g = p.lift(s + k);
      for (int i = 0; i < m; ++i) y[i] += c * g[i];
    }
    Matrix<S> rho = p.frame(s);
    out.frame_coeffs.push_back(solve(rho, y));
    out.vectors.push_back(std::move(y));
  }
  return out;
}

/// Largest entrywise |X - Y| over all sites.
template <class S>
S field_deviation(const PolygonField<S>& x, const PolygonField<S>& y) {
  S worst(0);
  for (std::size_t s = 0; s < x.vectors.size(); ++s)
    for (std::size_t i = 0; i < x.vectors[s].size(); ++i) {
      S v = scalar_abs(S(x.vectors[s][i] - y.vectors[s][i]));
      if (v > worst) worst = v;
    }
  return worst;
}

}  // namespace latw
