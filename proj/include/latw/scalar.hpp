#pragma once
// Scalar fields used throughout the library: exact rationals (GMP) and
// binary doubles, plus forward-mode dual numbers over either.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace latw {

using Rational = mpq_class;

enum class ScalarMode { rational, f64 };

std::string to_string(ScalarMode mode);
ScalarMode parse_scalar_mode(std::string_view text);

/// Forward-mode dual number: value + eps * derivative, eps^2 = 0.
template <class S>
struct Dual {
  S value{0};
  S deriv{0};

  Dual() = default;
  Dual(const S& v) : value(v), deriv(0) {}  // NOLINT(implicit)
  Dual(const S& v, const S& d) : value(v), deriv(d) {}
  Dual(long v) : value(v), deriv(0) {}  // NOLINT(implicit)
  Dual(int v) : value(v), deriv(0) {}   // NOLINT(implicit)

  Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    S d = value * o.deriv + deriv * o.value;
    value *= o.value;
    deriv = d;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    S d = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    deriv = d;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(S(-a.value), S(-a.deriv)); }
  friend bool operator==(const Dual& a, const Dual& b) {
    return a.value == b.value && a.deriv == b.deriv;
  }
};

template <class S>
struct is_dual : std::false_type {};
template <class S>
struct is_dual<Dual<S>> : std::true_type {};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static std::string to_string(const Rational& x);
  static Rational parse(std::string_view text);
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_ratio(long p, long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::fabs(x); }
  static std::string to_string(double x);
  static double parse(std::string_view text);
};

// Pivoting and zero tests on duals look at the value part only.
template <class S>
struct scalar_traits<Dual<S>> {
  static constexpr bool exact = scalar_traits<S>::exact;
  static Dual<S> from_ratio(long p, long q) {
    return Dual<S>(scalar_traits<S>::from_ratio(p, q));
  }
  static bool is_zero(const Dual<S>& x) { return scalar_traits<S>::is_zero(x.value); }
  static double to_double(const Dual<S>& x) { return scalar_traits<S>::to_double(x.value); }
  static Dual<S> abs(const Dual<S>& x) {
    return scalar_traits<S>::to_double(x.value) < 0 ? -x : x;
  }
};

template <class S>
bool is_zero(const S& x) {
  return scalar_traits<S>::is_zero(x);
}

template <class S>
double to_double(const S& x) {
  return scalar_traits<S>::to_double(x);
}

template <class S>
S scalar_abs(const S& x) {
  return scalar_traits<S>::abs(x);
}

template <class S>
S half() {
  return scalar_traits<S>::from_ratio(1, 2);
}

/// x^k for integer k (k < 0 requires x != 0).
template <class S>
S int_pow(const S& x, long k) {
  S base = x;
  if (k < 0) {
    base = S(1) / x;
    k = -k;
  }
  S result(1);
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

/// Floor division and non-negative remainder.
inline long floor_div(long a, long n) {
  long q = a / n;
  if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
  return q;
}
inline long pos_mod(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

/// Exact real k-th root of a rational if one exists.
bool exact_root(const Rational& x, unsigned long k, Rational& out);

}  // namespace latw
