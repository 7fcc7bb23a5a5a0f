#pragma once
// Loop representation: an N-periodic difference operator becomes an N x N
// matrix whose entries are Laurent polynomials in the spectral parameter z.

#include <map>
#include <vector>

#include "latw/dense_matrix.hpp"
#include "latw/laurent_operator.hpp"

namespace latw {

/// Finite Laurent polynomial sum_k c_k z^k; zero terms are never stored.
template <class S>
class LaurentPoly {
 public:
  LaurentPoly() = default;
  static LaurentPoly monomial(const S& c, long k) {
    LaurentPoly p;
    p.add(k, c);
    return p;
  }

  void add(long k, const S& c) {
    if (latw::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (latw::is_zero(it->second)) terms_.erase(it);
    }
  }
  S coeff(long k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? S(0) : it->second;
  }
  const std::map<long, S>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  S evaluate(const S& z) const {
    S out(0);
    for (const auto& [k, c] : terms_) out += c * int_pow(z, k);
    return out;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [i, x] : a.terms_)
      for (const auto& [j, y] : b.terms_) out.add(i + j, S(x * y));
    return out;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }

 private:
  std::map<long, S> terms_;
};

template <class S>
class LaurentMatrix {
 public:
  explicit LaurentMatrix(int n) : n_(n), entries_(std::size_t(n) * n) {}
  int size() const { return n_; }
  LaurentPoly<S>& operator()(int i, int j) { return entries_[std::size_t(i) * n_ + j]; }
  const LaurentPoly<S>& operator()(int i, int j) const { return entries_[std::size_t(i) * n_ + j]; }

  LaurentPoly<S> trace() const {
    LaurentPoly<S> t;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }
  Matrix<S> evaluate(const S& z) const {
    Matrix<S> m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).evaluate(z);
    return m;
  }

  friend LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) {
    LaurentMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int l = 0; l < a.n_; ++l) {
        if (a(i, l).is_zero()) continue;
        for (int j = 0; j < a.n_; ++j) c(i, j) += a(i, l) * b(l, j);
      }
    return c;
  }
  friend bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  int n_;
  std::vector<LaurentPoly<S>> entries_;
};

/// a -> diag(a), T -> sum E_{i,i+1} + z E_{N,1}, as exact Laurent data in z.
template <class S>
LaurentMatrix<S> loop_matrix(const LaurentOperator<S>& d) {
  if (d.truncated()) throw DomainError("loop representation needs a finite operator");
  const long n = d.period();
  LaurentMatrix<S> m{int(n)};
  for (long k = d.lo(); k <= d.hi(); ++k) {
    const auto& a = d.coeff_ref(k);
    for (long i = 0; i < n; ++i) m(int(i), int(pos_mod(i + k, n))).add(floor_div(i + k, n), a[i]);
  }
  return m;
}

/// The representation evaluated at a nonzero z.
template <class S>
Matrix<S> matrix_rep(const LaurentOperator<S>& d, const S& z) {
  if (latw::is_zero(z)) throw DomainError("spectral parameter must be nonzero");
  return loop_matrix(d).evaluate(z);
}

}  // namespace latw
