#include "latw/scalar.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace latw {

std::string to_string(ScalarMode mode) {
  return mode == ScalarMode::rational ? "rational" : "f64";
}

ScalarMode parse_scalar_mode(std::string_view text) {
  if (text == "rational") return ScalarMode::rational;
  if (text == "f64") return ScalarMode::f64;
  throw std::invalid_argument("unknown scalar mode '" + std::string(text) + "'");
}

std::string scalar_traits<Rational>::to_string(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str(10);
}

Rational scalar_traits<Rational>::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  // Decimal literals are accepted and converted exactly.
  auto dot = s.find('.');
  if (dot != std::string::npos && s.find('/') == std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string scalar_traits<double>::to_string(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

double scalar_traits<double>::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return scalar_traits<Rational>::parse(text).get_d();
  }
  std::string s(text);
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad f64 literal '" + s + "'");
  return v;
}

namespace {

bool exact_root_z(const mpz_class& x, unsigned long k, mpz_class& out) {
  if (x < 0) {
    if (k % 2 == 0) return false;
    mpz_class pos = -x;
    if (!exact_root_z(pos, k, out)) return false;
    out = -out;
    return true;
  }
  return mpz_root(out.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

}  // namespace

bool exact_root(const Rational& x, unsigned long k, Rational& out) {
  mpz_class num, den;
  if (!exact_root_z(x.get_num(), k, num)) return false;
  if (!exact_root_z(x.get_den(), k, den)) return false;
  out = Rational(num, den);
  out.canonicalize();
  return true;
}

}  // namespace latw
