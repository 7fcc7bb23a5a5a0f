#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "latw/kernels/kernels.hpp"
#include "latw/random.hpp"
#include "latw/scalar.hpp"
#include "latw/sequence.hpp"

using namespace latw;

TEST_CASE("rational parse and print") {
  CHECK(scalar_traits<Rational>::parse("3/6") == Rational(1, 2));
  CHECK(scalar_traits<Rational>::parse("-7") == Rational(-7));
  CHECK(scalar_traits<Rational>::parse("0.25") == Rational(1, 4));
  CHECK(scalar_traits<Rational>::to_string(Rational(-2, 4)) == "-1/2");
  CHECK_THROWS(scalar_traits<Rational>::parse("1/0"));
  CHECK_THROWS(scalar_traits<Rational>::parse("abc"));
}

TEST_CASE("double parse accepts fractions") {
  CHECK(scalar_traits<double>::parse("1/4") == 0.25);
  CHECK(scalar_traits<double>::parse("-1.5e1") == -15.0);
  CHECK_THROWS(scalar_traits<double>::parse("x"));
}

TEST_CASE("exact roots") {
  Rational r;
  CHECK(exact_root(Rational(8, 27), 3, r));
  CHECK(r == Rational(2, 3));
  CHECK(exact_root(Rational(-8, 27), 3, r));
  CHECK(r == Rational(-2, 3));
  CHECK_FALSE(exact_root(Rational(2), 2, r));
  CHECK_FALSE(exact_root(Rational(-4), 2, r));
}

TEST_CASE("dual numbers differentiate rational expressions") {
  using D = Dual<Rational>;
  D x(Rational(3), Rational(1));
  D y = x * x / (x + D(1));
  // d/dx x^2/(x+1) = (x^2 + 2x)/(x+1)^2 = 15/16 at x = 3.
  CHECK(y.value == Rational(9, 4));
  CHECK(y.deriv == Rational(15, 16));
}

TEST_CASE("integer helpers") {
  CHECK(floor_div(-1, 3) == -1);
  CHECK(floor_div(3, 3) == 1);
  CHECK(pos_mod(-4, 3) == 2);
  CHECK(int_pow(Rational(2), -3) == Rational(1, 8));
}

TEST_CASE("sequence shift") {
  PeriodicSequence<Rational> u(std::vector<Rational>{1, 2, 3});
  CHECK(seq_shift(u, 0) == u);
  CHECK(seq_shift(u, 1) == PeriodicSequence<Rational>(std::vector<Rational>{2, 3, 1}));
  CHECK(seq_shift(u, -3) == u);
  CHECK(u[-1] == 3);
}

TEST_CASE("quasi-periodic sequence") {
  QuasiPeriodicSequence<Rational> q({1, 2}, Rational(3));
  CHECK(q(2) == 3);
  CHECK(q(-1) == Rational(2, 3));
  CHECK_THROWS_AS(QuasiPeriodicSequence<Rational>({1, 2}, Rational(0)), DomainError);
  auto r = q.ratio_to_shift(1);
  CHECK(r[0] == Rational(1, 2));
  CHECK(r[1] == Rational(2, 3));
}

namespace {

std::vector<double> random_vec(Rng& rng, int n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform_real(-2.0, 2.0);
  return v;
}

}  // namespace

TEST_CASE("simd kernels are bitwise equal to the scalar reference") {
  if (!kernels::isa_available(kernels::Isa::avx2)) {
    MESSAGE("avx2 unavailable; only the scalar path is exercised");
    return;
  }
  Rng rng(7);
  for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 16, 17, 31}) {
    for (long shift : {-9L, -1L, 0L, 1L, 3L, 12L}) {
      auto a = random_vec(rng, n), b = random_vec(rng, n), acc = random_vec(rng, n);
      auto acc2 = acc;
      kernels::scalar::shifted_mul_acc(acc, a, b, shift);
      kernels::avx2::shifted_mul_acc(acc2, a, b, shift);
      CHECK(acc == acc2);
    }
    if (n < 3) continue;
    auto x = random_vec(rng, n), g = random_vec(rng, n);
    std::vector<double> o1(n), o2(n);
    kernels::scalar::volterra_field(x, g, o1);
    kernels::avx2::volterra_field(x, g, o2);
    CHECK(o1 == o2);
  }
}

TEST_CASE("shifted multiply-accumulate against direct indexing") {
  std::vector<double> acc{0, 0, 0}, a{1, 2, 3}, b{4, 5, 6};
  kernels::shifted_mul_acc(acc, a, b, 1);
  CHECK(acc == std::vector<double>{5, 12, 12});
}

TEST_CASE("isa override") {
  auto before = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  kernels::set_active_isa(before);
}
