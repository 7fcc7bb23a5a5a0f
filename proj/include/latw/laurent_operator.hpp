#pragma once
// N-periodic pseudo-difference operators sum_i a^i T^i with a finite window of
// powers [lo, hi]. Truncated series (inverses and products involving them)
// carry an exact-from floor: coefficients at powers >= floor are exact, lower
// powers are dropped.

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "latw/errors.hpp"
#include "latw/kernels/kernels.hpp"
#include "latw/scalar.hpp"
#include "latw/sequence.hpp"

namespace latw {

template <class S>
class LaurentOperator {
 public:
  using Seq = PeriodicSequence<S>;

  LaurentOperator() : LaurentOperator(1) {}
  explicit LaurentOperator(int period) : n_(period), lo_(0), coeffs_{Seq(period)} {}
  LaurentOperator(int period, long lo, std::vector<Seq> coeffs, std::optional<long> floor = {})
      : n_(period), lo_(lo), coeffs_(std::move(coeffs)), floor_(floor) {
    if (coeffs_.empty()) coeffs_.push_back(Seq(period));
    for (const auto& c : coeffs_)
      if (c.period() != n_) throw PeriodMismatch(n_, c.period());
    clip();
  }

  static LaurentOperator zero(int period) { return LaurentOperator(period); }
  static LaurentOperator identity(int period) { return monomial(Seq::constant(period, S(1)), 0); }
  /// T^k.
  static LaurentOperator shift(int period, long k) { return monomial(Seq::constant(period, S(1)), k); }
  /// a T^k.
  static LaurentOperator monomial(Seq a, long k) {
    int n = a.period();
    return LaurentOperator(n, k, {std::move(a)});
  }

  int period() const { return n_; }
  long lo() const { return lo_; }
  long hi() const { return lo_ + long(coeffs_.size()) - 1; }

  /// Lowest power known exactly; nullopt for a finite (exact) operator.
  const std::optional<long>& exact_from() const { return floor_; }
  bool truncated() const { return floor_.has_value(); }
  void set_exact_from(std::optional<long> f) {
    floor_ = f;
    clip();
  }

  /// Highest power with a nonzero coefficient (lo() for the zero operator).
  long top() const {
    for (long i = hi(); i > lo_; --i)
      if (!coeffs_[i - lo_].is_zero()) return i;
    return lo_;
  }

  bool has_power(long i) const { return i >= lo_ && i <= hi(); }
  /// Coefficient at power i (zero outside the window).
  Seq coeff(long i) const { return has_power(i) ? coeffs_[i - lo_] : Seq(n_); }
  const Seq& coeff_ref(long i) const { return coeffs_.at(i - lo_); }
  S at(long power, long site) const { return has_power(power) ? coeffs_[power - lo_][site] : S(0); }

  void set_coeff(long i, Seq c) {
    if (c.period() != n_) throw PeriodMismatch(n_, c.period());
    extend_to(i);
    coeffs_[i - lo_] = std::move(c);
  }
  void add_coeff(long i, const Seq& c) {
    if (c.period() != n_) throw PeriodMismatch(n_, c.period());
    extend_to(i);
    coeffs_[i - lo_] += c;
  }
  S& entry(long power, long site) {
    extend_to(power);
    return coeffs_[power - lo_][site];
  }

  /// Widen the window to include power i (new coefficients are zero).
  void extend_to(long i) {
    if (i < lo_) {
      coeffs_.insert(coeffs_.begin(), std::size_t(lo_ - i), Seq(n_));
      lo_ = i;
    } else if (i > hi()) {
      coeffs_.resize(std::size_t(i - lo_ + 1), Seq(n_));
    }
  }

  /// Trim all-zero extreme powers; the zero operator becomes a single zero at power 0.
  LaurentOperator normalized() const {
    long a = lo_, b = hi();
    while (a <= b && coeffs_[a - lo_].is_zero()) ++a;
    while (b >= a && coeffs_[b - lo_].is_zero()) --b;
    if (a > b) {
      LaurentOperator z(n_);
      z.floor_ = floor_;
      return z;
    }
    std::vector<Seq> c(coeffs_.begin() + (a - lo_), coeffs_.begin() + (b - lo_ + 1));
    return LaurentOperator(n_, a, std::move(c), floor_);
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Seq& c) { return c.is_zero(); });
  }

  /// Leading and trailing coefficients entrywise nonzero.
  bool properly_bounded() const {
    LaurentOperator t = normalized();
    return !t.is_zero() && t.coeffs_.front().all_nonzero() && t.coeffs_.back().all_nonzero();
  }

  LaurentOperator& operator+=(const LaurentOperator& o) {
    same_period(o);
    for (long i = o.lo_; i <= o.hi(); ++i) add_coeff(i, o.coeffs_[i - o.lo_]);
    floor_ = combine_floor(floor_, o.floor_);
    clip();
    return *this;
  }
  LaurentOperator& operator-=(const LaurentOperator& o) {
    same_period(o);
    for (long i = o.lo_; i <= o.hi(); ++i) {
      extend_to(i);
      coeffs_[i - lo_] -= o.coeffs_[i - o.lo_];
    }
    floor_ = combine_floor(floor_, o.floor_);
    clip();
    return *this;
  }
  LaurentOperator& operator*=(const S& c) {
    for (auto& s : coeffs_) s *= c;
    return *this;
  }
  friend LaurentOperator operator+(LaurentOperator a, const LaurentOperator& b) { return a += b; }
  friend LaurentOperator operator-(LaurentOperator a, const LaurentOperator& b) { return a -= b; }
  friend LaurentOperator operator*(LaurentOperator a, const S& c) { return a *= c; }
  friend LaurentOperator operator*(const S& c, LaurentOperator a) { return a *= c; }
  friend LaurentOperator operator-(LaurentOperator a) {
    for (auto& s : a.coeffs_) s = -s;
    return a;
  }

  /// Equal as operators: same coefficients after trimming zero powers.
  friend bool operator==(const LaurentOperator& a, const LaurentOperator& b) {
    if (a.n_ != b.n_) return false;
    long from = std::min(a.lo_, b.lo_), to = std::max(a.hi(), b.hi());
    for (long i = from; i <= to; ++i) {
      bool ha = a.has_power(i), hb = b.has_power(i);
      if (ha && hb) {
        if (!(a.coeffs_[i - a.lo_] == b.coeffs_[i - b.lo_])) return false;
      } else if (ha) {
        if (!a.coeffs_[i - a.lo_].is_zero()) return false;
      } else if (hb) {
        if (!b.coeffs_[i - b.lo_].is_zero()) return false;
      }
    }
    return true;
  }

  static std::optional<long> combine_floor(const std::optional<long>& a, const std::optional<long>& b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
  }

 private:
  void same_period(const LaurentOperator& o) const {
    if (o.n_ != n_) throw PeriodMismatch(n_, o.n_);
  }
  // Drop coefficients below the exact-from floor.
  void clip() {
    if (!floor_ || *floor_ <= lo_) return;
    if (*floor_ > hi()) {
      coeffs_.assign(1, Seq(n_));
      lo_ = *floor_;
      return;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + (*floor_ - lo_));
    lo_ = *floor_;
  }

  int n_;
  long lo_;
  std::vector<Seq> coeffs_;
  std::optional<long> floor_;
};

namespace detail {

// acc += a * shift(b, k), term-wise.
template <class S>
void shifted_mul_acc(PeriodicSequence<S>& acc, const PeriodicSequence<S>& a,
                     const PeriodicSequence<S>& b, long k) {
  if constexpr (std::is_same_v<S, double>) {
    kernels::shifted_mul_acc(acc.values(), a.values(), b.values(), k);
  } else {
    const long n = acc.period();
    for (long s = 0; s < n; ++s) {
      if (latw::is_zero(a[s])) continue;
      acc[s] += a[s] * b[s + k];
    }
  }
}

}  // namespace detail

/// (sum a^i T^i)(sum b^j T^j) = sum a^i (T^i b^j) T^{i+j}.
template <class S>
LaurentOperator<S> op_multiply(const LaurentOperator<S>& x, const LaurentOperator<S>& y) {
  if (x.period() != y.period()) throw PeriodMismatch(x.period(), y.period());
  const int n = x.period();
  std::optional<long> floor;
  if (x.exact_from()) floor = *x.exact_from() + y.top();
  if (y.exact_from()) {
    long f = *y.exact_from() + x.top();
    floor = floor ? std::max(*floor, f) : f;
  }
  long lo = x.lo() + y.lo(), hi = x.hi() + y.hi();
  if (floor && *floor > lo) lo = std::min(*floor, hi);
  std::vector<PeriodicSequence<S>> c(std::size_t(hi - lo + 1), PeriodicSequence<S>(n));
  for (long i = x.lo(); i <= x.hi(); ++i) {
    const auto& a = x.coeff_ref(i);
    if (a.is_zero()) continue;
    for (long j = y.lo(); j <= y.hi(); ++j) {
      if (i + j < lo) continue;
      detail::shifted_mul_acc(c[i + j - lo], a, y.coeff_ref(j), i);
    }
  }
  return LaurentOperator<S>(n, lo, std::move(c), floor);
}

template <class S>
LaurentOperator<S> operator*(const LaurentOperator<S>& x, const LaurentOperator<S>& y) {
  return op_multiply(x, y);
}

/// Tr D = sum over one period of the order-0 coefficient.
template <class S>
S trace(const LaurentOperator<S>& d) {
  return d.has_power(0) ? d.coeff_ref(0).sum() : S(0);
}

/// (X, Y) = Tr(XY) = sum_i sum_s X^i_s Y^{-i}_{s+i}, without forming XY.
template <class S>
S inner_product(const LaurentOperator<S>& x, const LaurentOperator<S>& y) {
  if (x.period() != y.period()) throw PeriodMismatch(x.period(), y.period());
  const long n = x.period();
  S total(0);
  long from = std::max(x.lo(), -y.hi()), to = std::min(x.hi(), -y.lo());
  for (long i = from; i <= to; ++i) {
    const auto& a = x.coeff_ref(i);
    const auto& b = y.coeff_ref(-i);
    for (long s = 0; s < n; ++s) {
      if (latw::is_zero(a[s])) continue;
      total += a[s] * b[s + i];
    }
  }
  return total;
}

template <class S>
struct OperatorParts {
  LaurentOperator<S> minus, zero, plus;
};

namespace detail {

template <class S>
LaurentOperator<S> restrict_powers(const LaurentOperator<S>& d, long from, long to) {
  const int n = d.period();
  long a = std::max(from, d.lo()), b = std::min(to, d.hi());
  if (a > b) return LaurentOperator<S>::zero(n);
  std::vector<PeriodicSequence<S>> c;
  for (long i = a; i <= b; ++i) c.push_back(d.coeff_ref(i));
  std::optional<long> floor;
  if (d.exact_from() && from < 0) floor = d.exact_from();
  return LaurentOperator<S>(n, a, std::move(c), floor);
}

}  // namespace detail

/// Split by the grading into negative, zero and positive powers.
template <class S>
OperatorParts<S> project_parts(const LaurentOperator<S>& d) {
  constexpr long inf = std::numeric_limits<long>::max() / 4;
  return {detail::restrict_powers(d, -inf, -1), detail::restrict_powers(d, 0, 0),
          detail::restrict_powers(d, 1, inf)};
}

/// r = (p_+ - p_-) / 2.
template <class S>
LaurentOperator<S> r_apply(const LaurentOperator<S>& d) {
  auto parts = project_parts(d);
  return (parts.plus - parts.minus) * half<S>();
}

/// r + sign/2 Id, sign = +1 or -1.
template <class S>
LaurentOperator<S> r_apply_shifted(const LaurentOperator<S>& d, int sign) {
  LaurentOperator<S> out = r_apply(d);
  out += d * (sign > 0 ? half<S>() : S(-half<S>()));
  return out;
}

/// Inverse truncated so that D * E = 1 on all powers >= -depth.
template <class S>
LaurentOperator<S> op_invert(const LaurentOperator<S>& d0, long depth) {
  if (depth < 0) throw DomainError("inversion depth must be non-negative");
  if (d0.truncated()) throw DomainError("cannot invert a truncated operator");
  LaurentOperator<S> d = d0.normalized();
  const int n = d.period();
  const long hi = d.hi();
  const auto& lead = d.coeff_ref(hi);
  long z = lead.first_zero();
  if (z >= 0) throw NotInvertible("zero entry in leading coefficient at site " + std::to_string(z));
  // D = a T^hi (1 + R), R = sum_{i<hi} T^{-hi}(a^i / a) T^{i-hi}.
  PeriodicSequence<S> inv_lead = lead.reciprocal();
  PeriodicSequence<S> tail_factor = inv_lead.shifted(-hi);
  if (d.lo() == hi) return LaurentOperator<S>::monomial(tail_factor, -hi);

  std::vector<PeriodicSequence<S>> rc;
  for (long i = d.lo(); i < hi; ++i) rc.push_back(-(d.coeff_ref(i) * inv_lead).shifted(-hi));
  LaurentOperator<S> minus_r(n, d.lo() - hi, std::move(rc));

  LaurentOperator<S> series = LaurentOperator<S>::identity(n);
  LaurentOperator<S> term = LaurentOperator<S>::identity(n);
  for (long k = 1; k <= depth; ++k) {
    term = op_multiply(term, minus_r);
    term.set_exact_from(-depth);
    if (term.is_zero()) break;
    series += term;
  }
  series.set_exact_from(-depth);
  LaurentOperator<S> out = op_multiply(series, LaurentOperator<S>::monomial(tail_factor, -hi));
  out.set_exact_from(-hi - depth);
  return out;
}

/// Term-wise a -> f a (left multiplication by an order-0 operator).
template <class S>
LaurentOperator<S> left_scale(const PeriodicSequence<S>& f, const LaurentOperator<S>& d) {
  LaurentOperator<S> out = d;
  for (long i = d.lo(); i <= d.hi(); ++i) out.set_coeff(i, f * d.coeff_ref(i));
  return out;
}

}  // namespace latw
