#pragma once
// Twisted polygons and the difference operators that annihilate their lifts:
// kernel recursion, monodromy, moving frames, companion matrices, the
// left-right gauge action and normalization to the monic section.

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "latw/dense_matrix.hpp"
#include "latw/laurent_operator.hpp"

namespace latw {

/// Kernel of a properly bounded D with support [0, m]: m solutions over the
/// window [0, N+m-1], seeded with the standard basis, and the monodromy M with
/// gamma_{i+N} = gamma_i M (gamma_i the row of solution values at i).
template <class S>
struct KernelBasis {
  int m = 0;
  int period = 0;
  std::vector<std::vector<S>> solutions;
  Matrix<S> monodromy;
};

template <class S>
void require_difference_operator(const LaurentOperator<S>& d0, LaurentOperator<S>& d) {
  d = d0.normalized();
  if (d0.truncated()) throw DomainError("expected a finite difference operator");
  if (d.lo() != 0 || d.hi() < 1) throw DomainError("expected a difference operator with support [0, m], m >= 1");
  long z = d.coeff_ref(0).first_zero();
  if (z >= 0) throw Degenerate("operator is not properly bounded: zero order-0 coefficient", z);
  z = d.coeff_ref(d.hi()).first_zero();
  if (z >= 0) throw Degenerate("operator is not properly bounded: zero leading coefficient", z);
}

template <class S>
KernelBasis<S> kernel_basis(const LaurentOperator<S>& d0) {
  LaurentOperator<S> d;
  require_difference_operator(d0, d);
  const int m = int(d.hi()), n = d.period();
  KernelBasis<S> kb;
  kb.m = m;
  kb.period = n;
  kb.solutions.assign(m, std::vector<S>(n + m, S(0)));
  for (int k = 0; k < m; ++k) {
    auto& v = kb.solutions[k];
    v[k] = S(1);
    for (int i = 0; i + m < n + m; ++i) {
      S acc(0);
      for (int r = 0; r < m; ++r) acc += d.at(r, i) * v[i + r];
      v[i + m] = -acc / d.at(m, i);
    }
  }
  kb.monodromy = Matrix<S>(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) kb.monodromy(i, k) = kb.solutions[k][n + i];
  return kb;
}

/// (D V)_i = sum_k a^k_i V_{i+k} for a scalar sequence given on a window
/// starting at index 0; evaluated where the window allows.
template <class S>
std::vector<S> apply_to_window(const LaurentOperator<S>& d, const std::vector<S>& v) {
  std::vector<S> out;
  for (long i = 0; i + d.hi() < long(v.size()); ++i) {
    S acc(0);
    for (long k = std::max(0L, d.lo()); k <= d.hi(); ++k) acc += d.at(k, i) * v[i + k];
    out.push_back(acc);
  }
  return out;
}

template <class S>
class TwistedPolygon {
 public:
  TwistedPolygon() = default;
  TwistedPolygon(int m, std::vector<std::vector<S>> lifts, Matrix<S> monodromy)
      : m_(m), lifts_(std::move(lifts)), monodromy_(std::move(monodromy)) {
    if (m_ < 1) throw DomainError("polygon dimension must be >= 1");
    if (lifts_.empty()) throw DomainError("polygon needs at least one vertex");
    for (const auto& g : lifts_)
      if (int(g.size()) != m_) throw DomainError("lift has wrong dimension");
    if (monodromy_.rows() != m_ || monodromy_.cols() != m_) throw DomainError("monodromy has wrong shape");
    if (is_zero(determinant(monodromy_))) throw NotInvertible("monodromy is singular");
  }

  int dim() const { return m_; }
  int period() const { return int(lifts_.size()); }
  const std::vector<std::vector<S>>& lifts() const { return lifts_; }
  const Matrix<S>& monodromy() const { return monodromy_; }

  /// gamma_s for any integer s: gamma_{s+N} = gamma_s M.
  std::vector<S> lift(long s) const {
    const long n = period();
    long q = floor_div(s, n);
    std::vector<S> v = lifts_[pos_mod(s, n)];
    if (q == 0) return v;
    Matrix<S> row(1, m_);
    for (int k = 0; k < m_; ++k) row(0, k) = v[k];
    Matrix<S> step = q > 0 ? monodromy_ : inverse(monodromy_);
    for (long t = 0; t < (q > 0 ? q : -q); ++t) row = row * step;
    return row.row(0);
  }

  /// rho_s = (gamma_s, ..., gamma_{s+m-1}) as columns.
  Matrix<S> frame(long s) const {
    Matrix<S> f(m_, m_);
    for (int k = 0; k < m_; ++k) {
      auto g = lift(s + k);
      for (int i = 0; i < m_; ++i) f(i, k) = g[i];
    }
    return f;
  }

  S frame_det(long s) const { return determinant(frame(s)); }

  /// First site in [0, N) with d_s = 0, or -1.
  long first_degenerate_site() const {
    for (long s = 0; s < period(); ++s)
      if (is_zero(frame_det(s))) return s;
    return -1;
  }

  friend bool operator==(const TwistedPolygon& a, const TwistedPolygon& b) {
    return a.m_ == b.m_ && a.lifts_ == b.lifts_ && a.monodromy_ == b.monodromy_;
  }

 private:
  int m_ = 1;
  std::vector<std::vector<S>> lifts_;
  Matrix<S> monodromy_;
};

/// gamma -> g gamma; the monodromy becomes g^{-T} M g^T.
template <class S>
TwistedPolygon<S> transform(const TwistedPolygon<S>& p, const Matrix<S>& g) {
  const int m = p.dim();
  if (g.rows() != m || g.cols() != m) throw DomainError("transform has wrong shape");
  std::vector<std::vector<S>> lifts;
  for (const auto& v : p.lifts()) lifts.push_back(g * v);
  Matrix<S> gt = g.transposed();
  return TwistedPolygon<S>(m, std::move(lifts), inverse(gt) * p.monodromy() * gt);
}

template <class S>
TwistedPolygon<S> polygon_from_operator(const LaurentOperator<S>& d) {
  auto kb = kernel_basis(d);
  std::vector<std::vector<S>> lifts(kb.period, std::vector<S>(kb.m));
  for (int i = 0; i < kb.period; ++i)
    for (int k = 0; k < kb.m; ++k) lifts[i][k] = kb.solutions[k][i];
  TwistedPolygon<S> p(kb.m, std::move(lifts), kb.monodromy);
  long s = p.first_degenerate_site();
  if (s >= 0) throw Degenerate("degenerate polygon: d_s = 0", s);
  return p;
}

/// Invariants a^r_s with T^m gamma = sum_r a^r T^r gamma, r = 0..m-1.
template <class S>
struct CompanionSequence {
  int m = 0;
  int period = 0;
  std::vector<PeriodicSequence<S>> a;

  const S& operator()(int r, long s) const { return a[r][s]; }
  S& operator()(int r, long s) { return a[r][s]; }
  friend bool operator==(const CompanionSequence&, const CompanionSequence&) = default;
};

template <class S>
CompanionSequence<S> invariants_of(const TwistedPolygon<S>& p) {
  const int m = p.dim(), n = p.period();
  CompanionSequence<S> inv{m, n, std::vector<PeriodicSequence<S>>(m, PeriodicSequence<S>(n))};
  for (long s = 0; s < n; ++s) {
    Matrix<S> rho = p.frame(s);
    std::vector<S> sol;
    try {
      sol = solve(rho, p.lift(s + m));
    } catch (const NotInvertible&) {
      throw Degenerate("singular frame", s);
    }
    for (int r = 0; r < m; ++r) inv.a[r][s] = sol[r];
  }
  return inv;
}

/// D = sum_r a^r T^r - T^m.
template <class S>
LaurentOperator<S> section_operator(const CompanionSequence<S>& inv) {
  std::vector<PeriodicSequence<S>> c = inv.a;
  c.push_back(PeriodicSequence<S>::constant(inv.period, S(-1)));
  return LaurentOperator<S>(inv.period, 0, std::move(c));
}

/// Invariants of the monic form of D: a^r = -D^r / D^m.
template <class S>
CompanionSequence<S> invariants_of(const LaurentOperator<S>& d0) {
  LaurentOperator<S> d;
  require_difference_operator(d0, d);
  const int m = int(d.hi()), n = d.period();
  PeriodicSequence<S> scale = -d.coeff_ref(m).reciprocal();
  CompanionSequence<S> inv{m, n, {}};
  for (int r = 0; r < m; ++r) inv.a.push_back(d.coeff_ref(r) * scale);
  return inv;
}

template <class S>
LaurentOperator<S> operator_from_polygon(const TwistedPolygon<S>& p) {
  return section_operator(invariants_of(p));
}

/// A_s: ones below the diagonal, last column (a^0_s, ..., a^{m-1}_s).
template <class S>
std::vector<Matrix<S>> companion_matrices(const CompanionSequence<S>& inv) {
  std::vector<Matrix<S>> out;
  const int m = inv.m;
  for (long s = 0; s < inv.period; ++s) {
    if (is_zero(inv(0, s))) throw Degenerate("zero a^0 in companion data", s);
    Matrix<S> a(m, m);
    for (int i = 0; i + 1 < m; ++i) a(i + 1, i) = S(1);
    for (int r = 0; r < m; ++r) a(r, m - 1) = inv(r, s);
    out.push_back(std::move(a));
  }
  return out;
}

/// (f D g^{-1})^i_s = f_s a^i_s / g_{s+i}.
template <class S>
LaurentOperator<S> left_right_act(const LaurentOperator<S>& d, const QuasiPeriodicSequence<S>& f,
                                  const QuasiPeriodicSequence<S>& g) {
  if (f.period() != d.period()) throw PeriodMismatch(d.period(), f.period());
  if (g.period() != d.period()) throw PeriodMismatch(d.period(), g.period());
  if (!(f.monodromy() == g.monodromy())) throw DomainError("left and right gauges have different monodromy");
  long z = f.base().first_zero();
  if (z >= 0) throw NotInvertible("zero entry in left gauge at site " + std::to_string(z));
  z = g.base().first_zero();
  if (z >= 0) throw NotInvertible("zero entry in right gauge at site " + std::to_string(z));
  const long n = d.period();
  LaurentOperator<S> out = d;
  for (long i = d.lo(); i <= d.hi(); ++i) {
    PeriodicSequence<S> c{int(n)};
    for (long s = 0; s < n; ++s) c[s] = f(s) * d.at(i, s) / g(s + i);
    out.set_coeff(i, std::move(c));
  }
  return out;
}

template <class S>
struct SectionForm {
  LaurentOperator<S> op;
  QuasiPeriodicSequence<S> f;
  QuasiPeriodicSequence<S> g;
};

/// Gauge D into (-1)^m + v^1 T + ... + T^m; needs gcd(m, N) = 1.
template <class S>
SectionForm<S> normalize_to_section(const LaurentOperator<S>& d0) {
  LaurentOperator<S> d;
  require_difference_operator(d0, d);
  const long m = d.hi(), n = d.period();
  if (std::gcd(m, n) != 1)
    throw DomainError("normalization needs gcd(m, N) = 1, got m=" + std::to_string(m) + ", N=" + std::to_string(n));
  const S sign = (m % 2 == 0) ? S(1) : S(-1);
  // g_{s+m} = c_s g_s along the single step-m cycle through all residues.
  PeriodicSequence<S> c{int(n)};
  for (long s = 0; s < n; ++s) c[s] = sign * d.at(m, s) / d.at(0, s);
  S total(1);
  for (long s = 0; s < n; ++s) total *= c[s];
  S lambda;
  if constexpr (scalar_traits<S>::exact) {
    if (!exact_root(total, (unsigned long)m, lambda))
      throw DomainError("section monodromy " + scalar_traits<S>::to_string(total) + "^(1/" + std::to_string(m) +
                        ") is not exactly representable in rational mode");
  } else {
    if (total < 0 && m % 2 == 0) throw DomainError("operator is outside the real section: even root of a negative product");
    lambda = total < 0 ? -std::pow(-total, 1.0 / double(m)) : std::pow(total, 1.0 / double(m));
  }
  std::vector<S> gv(n);
  S running(1);
  for (long k = 0; k < n; ++k) {
    long idx = k * m;
    gv[pos_mod(idx, n)] = running / int_pow(lambda, floor_div(idx, n));
    running *= c[pos_mod(idx, n)];
  }
  std::vector<S> fv(n);
  for (long s = 0; s < n; ++s) fv[s] = sign * gv[s] / d.at(0, s);
  QuasiPeriodicSequence<S> f(std::move(fv), lambda), g(std::move(gv), lambda);
  LaurentOperator<S> out = left_right_act(d, f, g);
  return {std::move(out), std::move(f), std::move(g)};
}

/// [a,b,c,d] = (a-b)(c-d) / ((a-c)(b-d)).
template <class S>
S cross_ratio(const S& a, const S& b, const S& c, const S& d) {
  S den = (a - c) * (b - d);
  if (is_zero(den)) throw DomainError("cross-ratio undefined: coincident points");
  return S((a - b) * (c - d)) / den;
}

/// Cross-ratio of four points of RP^1 given by lifts in R^2.
template <class S>
S cross_ratio_lifts(const std::vector<S>& a, const std::vector<S>& b, const std::vector<S>& c,
                    const std::vector<S>& d) {
  auto det = [](const std::vector<S>& u, const std::vector<S>& v) { return S(u[0] * v[1] - u[1] * v[0]); };
  S den = det(a, c) * det(b, d);
  if (is_zero(den)) throw DomainError("cross-ratio undefined: coincident points");
  return S(det(a, b) * det(c, d)) / den;
}

}  // namespace latw
