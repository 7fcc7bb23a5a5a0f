#pragma once
// N-periodic and N-quasi-periodic bi-infinite sequences; one period is stored.

#include <span>
#include <vector>

#include "latw/errors.hpp"
#include "latw/scalar.hpp"

namespace latw {

template <class S>
class PeriodicSequence {
 public:
  PeriodicSequence() = default;
  explicit PeriodicSequence(int period, const S& fill = S(0)) : values_(check(period), fill) {}
  explicit PeriodicSequence(std::vector<S> values) : values_(std::move(values)) {
    check(int(values_.size()));
  }

  static PeriodicSequence constant(int period, const S& c) { return PeriodicSequence(period, c); }

  /// delta_t: 1 at indices congruent to t mod N, 0 elsewhere.
  static PeriodicSequence indicator(int period, long t) {
    PeriodicSequence d(period);
    d.values_[pos_mod(t, period)] = S(1);
    return d;
  }

  int period() const { return int(values_.size()); }

  const S& operator[](long i) const { return values_[pos_mod(i, long(values_.size()))]; }
  S& operator[](long i) { return values_[pos_mod(i, long(values_.size()))]; }

  std::span<const S> values() const { return values_; }
  std::span<S> values() { return values_; }

  /// result(i) = u(i + k): the action of T^k on a sequence.
  PeriodicSequence shifted(long k) const {
    const long n = period();
    std::vector<S> out(values_.size());
    for (long i = 0; i < n; ++i) out[i] = values_[pos_mod(i + k, n)];
    return PeriodicSequence(std::move(out));
  }

  bool is_zero() const {
    for (const auto& v : values_)
      if (!latw::is_zero(v)) return false;
    return true;
  }
  bool all_nonzero() const {
    for (const auto& v : values_)
      if (latw::is_zero(v)) return false;
    return true;
  }
  /// First index with a zero entry, or -1.
  long first_zero() const {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (latw::is_zero(values_[i])) return long(i);
    return -1;
  }

  PeriodicSequence reciprocal() const {
    std::vector<S> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (latw::is_zero(values_[i])) throw NotInvertible("zero entry in sequence at site " + std::to_string(i));
      out[i] = S(1) / values_[i];
    }
    return PeriodicSequence(std::move(out));
  }

  S sum() const {
    S s(0);
    for (const auto& v : values_) s += v;
    return s;
  }

  PeriodicSequence& operator+=(const PeriodicSequence& o) {
    same_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  PeriodicSequence& operator-=(const PeriodicSequence& o) {
    same_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  /// Term-wise product.
  PeriodicSequence& operator*=(const PeriodicSequence& o) {
    same_period(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
  }
  PeriodicSequence& operator*=(const S& c) {
    for (auto& v : values_) v *= c;
    return *this;
  }
  friend PeriodicSequence operator+(PeriodicSequence a, const PeriodicSequence& b) { return a += b; }
  friend PeriodicSequence operator-(PeriodicSequence a, const PeriodicSequence& b) { return a -= b; }
  friend PeriodicSequence operator*(PeriodicSequence a, const PeriodicSequence& b) { return a *= b; }
  friend PeriodicSequence operator*(PeriodicSequence a, const S& c) { return a *= c; }
  friend PeriodicSequence operator*(const S& c, PeriodicSequence a) { return a *= c; }
  friend PeriodicSequence operator-(PeriodicSequence a) {
    for (auto& v : a.values_) v = S(-v);
    return a;
  }
  friend bool operator==(const PeriodicSequence& a, const PeriodicSequence& b) {
    return a.values_ == b.values_;
  }

 private:
  static int check(int period) {
    if (period < 1) throw DomainError("sequence period must be >= 1");
    return period;
  }
  void same_period(const PeriodicSequence& o) const {
    if (o.period() != period()) throw PeriodMismatch(period(), o.period());
  }

  std::vector<S> values_;
};

template <class S>
PeriodicSequence<S> seq_shift(const PeriodicSequence<S>& u, long k) {
  return u.shifted(k);
}

/// value(i + N) = z * value(i).
template <class S>
class QuasiPeriodicSequence {
 public:
  QuasiPeriodicSequence(std::vector<S> values, S monodromy)
      : base_(std::move(values)), z_(std::move(monodromy)) {
    if (latw::is_zero(z_)) throw DomainError("quasi-periodic monodromy must be nonzero");
  }
  explicit QuasiPeriodicSequence(PeriodicSequence<S> periodic)
      : base_(std::move(periodic)), z_(1) {}

  int period() const { return base_.period(); }
  const S& monodromy() const { return z_; }
  const PeriodicSequence<S>& base() const { return base_; }

  S operator()(long i) const {
    const long n = period();
    long q = floor_div(i, n);
    if (q == 0) return base_[i];
    return S(int_pow(z_, q) * base_[i]);
  }

  bool all_nonzero() const { return base_.all_nonzero(); }

  /// Ratio sequence s -> value(s) / value(s + k); N-periodic.
  PeriodicSequence<S> ratio_to_shift(long k) const {
    const int n = period();
    std::vector<S> out(n);
    for (int s = 0; s < n; ++s) {
      S den = (*this)(s + k);
      if (latw::is_zero(den)) throw NotInvertible("zero entry in quasi-periodic sequence");
      out[s] = (*this)(s) / den;
    }
    return PeriodicSequence<S>(std::move(out));
  }

 private:
  PeriodicSequence<S> base_;
  S z_;
};

}  // namespace latw
