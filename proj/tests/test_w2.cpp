#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "latw/kernels/kernels.hpp"
#include "latw/random.hpp"
#include "latw/w2.hpp"

using namespace latw;
using Q = Rational;
using Seq = PeriodicSequence<Q>;
using Op = LaurentOperator<Q>;

namespace {

LaurentOperator<double> to_f64(const Op& d) {
  std::vector<PeriodicSequence<double>> c;
  for (long i = d.lo(); i <= d.hi(); ++i) {
    std::vector<double> v;
    for (const auto& q : d.coeff_ref(i).values()) v.push_back(q.get_d());
    c.emplace_back(v);
  }
  return LaurentOperator<double>(d.period(), d.lo(), c);
}

// Chart of a random operator with x_i away from 0 and 1.
Op chart_operator(Rng& rng, int n) {
  for (;;) {
    Op d = rng.laurent<Q>(n, 0, 2);
    d.set_coeff(1, rng.sequence<Q>(n));
    try {
      validate_chart(cross_ratios_from_operator(d));
      return d;
    } catch (const Degenerate&) {
    }
  }
}

}  // namespace

TEST_CASE("chart from coefficients") {
  Seq one = Seq::constant(5, Q(1)), two = Seq::constant(5, Q(2));
  for (const auto& x : cross_ratios_from_coeffs(one, two, one).x) CHECK(x == Q(1, 4));
  for (const auto& x : cross_ratios_from_coeffs(one, one, one).x) CHECK(x == 1);
  CHECK_THROWS_AS(cross_ratios_from_coeffs(one, Seq({1, 0, 1, 1, 1}), one), Degenerate);
}

TEST_CASE("chart from coefficients matches cross-ratios of the polygon") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    int n = int(rng.uniform_int(3, 8));
    Op d = rng.laurent<Q>(n, 0, 2);
    d.set_coeff(1, rng.sequence<Q>(n));
    auto p = polygon_from_operator(d);
    CHECK(cross_ratios_from_polygon(p) == cross_ratios_from_operator(d));
  }
  Op d(5, 0, {Seq::constant(5, Q(1)), Seq::constant(5, Q(2)), Seq::constant(5, Q(1))});
  for (const auto& x : cross_ratios_from_polygon(polygon_from_operator(d)).x) CHECK(x == Q(1, 4));
}

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(validate_chart(CrossRatioChart<double>{{2.0, 0.0, 3.0}}), Degenerate);
  CHECK_THROWS_AS(validate_chart(CrossRatioChart<double>{{2.0, 1.0, 3.0}}), Degenerate);
  CHECK_THROWS_AS(validate_chart(CrossRatioChart<double>{{2.0, NAN, 3.0}}), Degenerate);
  CHECK_NOTHROW(validate_chart(CrossRatioChart<double>{{2.0, 4.0, 3.0}}));
}

TEST_CASE("w2 bracket values") {
  CrossRatioChart<Q> c{{1, 1, 2, 3, 5, 7, 11, 13}};
  CHECK(w2_bracket(c, 0, 1) == 1);
  CHECK(w2_bracket(c, 2, 4) == 2 * 3 * 5);
  CHECK(w2_bracket(c, 4, 2) == -30);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      long dist = std::min(pos_mod(i - j, 8), pos_mod(j - i, 8));
      if (dist >= 3) CHECK(w2_bracket(c, i, j) == 0);
      CHECK(w2_bracket(c, i, j) == -w2_bracket(c, j, i));
    }
}

TEST_CASE("w2 bracket satisfies Jacobi exactly") {
  // Cyclic sum of {x_i, {x_j, x_k}} with the inner bracket differentiated
  // symbolically through the polynomial stencil.
  Rng rng(32);
  for (int n : {3, 4, 5, 7, 8}) {
    CrossRatioChart<Q> c;
    for (int i = 0; i < n; ++i) c.x.push_back(rng.ratio<Q>());
    auto deriv = [&](long j, long k, long l) {
      // d/dx_l {x_j, x_k} via dual numbers.
      CrossRatioChart<Dual<Q>> dc;
      for (int i = 0; i < n; ++i) dc.x.push_back(Dual<Q>(c.x[i], i == pos_mod(l, n) ? Q(1) : Q(0)));
      return w2_bracket(dc, j, k).deriv;
    };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Q sum(0);
          for (int l = 0; l < n; ++l) {
            sum += w2_bracket(c, i, l) * deriv(j, k, l);
            sum += w2_bracket(c, j, l) * deriv(k, i, l);
            sum += w2_bracket(c, k, l) * deriv(i, j, l);
          }
          CHECK(sum == 0);
        }
  }
}

TEST_CASE("operator bracket reduces to the cubic bracket") {
  Rng rng(33);
  for (int n = 3; n <= 8; ++n)
    for (int t = 0; t < 4; ++t) {
      Op d = chart_operator(rng, n);
      CHECK(verify_w2_reduction(d) == 0);
      CHECK(verify_w2_reduction(to_f64(d)) <= 1e-10);
    }
  Op flat(5, 0, {Seq::constant(5, Q(1)), Seq::constant(5, Q(1)), Seq::constant(5, Q(1))});
  CHECK(verify_w2_reduction(flat) == 0);
}

TEST_CASE("vector field kernel matches the bracket matrix") {
  Rng rng(34);
  for (int n : {3, 4, 5, 6, 9, 13}) {
    std::vector<double> x(n), g(n);
    for (int i = 0; i < n; ++i) {
      x[i] = rng.uniform_real(0.1, 2.0);
      g[i] = rng.uniform_real(-1.0, 1.0);
    }
    auto f = w2_vector_field(x, g);
    auto m = w2_matrix(CrossRatioChart<double>{x});
    for (int i = 0; i < n; ++i) {
      double want = 0;
      for (int j = 0; j < n; ++j) want += m(i, j) * g[j];
      CHECK(f[i] == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("hamiltonian flows") {
  CrossRatioChart<double> c{{0.3, 0.5, 0.7, 0.2, 0.9}};
  auto h_const = builtin_hamiltonian("const");
  CHECK(hamiltonian_step(c, h_const, 0.1) == c);
  auto h_sum = builtin_hamiltonian("sum");
  CHECK(hamiltonian_step(c, h_sum, 0.0) == c);
  // The bracket is skew, so H is conserved along its own flow up to RK4 error.
  CrossRatioChart<double> x = c;
  double h0 = h_sum.value(x.x);
  for (int s = 0; s < 1000; ++s) x = hamiltonian_step(x, h_sum, 1e-3);
  CHECK(std::fabs(h_sum.value(x.x) - h0) <= 1e-8);
  auto h_log = builtin_hamiltonian("sum_log");
  x = c;
  double l0 = h_log.value(x.x);
  for (int s = 0; s < 100; ++s) x = hamiltonian_step(x, h_log, 1e-3);
  CHECK(std::fabs(h_log.value(x.x) - l0) <= 1e-8);
  CHECK_THROWS(builtin_hamiltonian("nope"));
}

TEST_CASE("flows agree bitwise across kernel variants") {
  if (!kernels::isa_available(kernels::Isa::avx2)) return;
  CrossRatioChart<double> c{{0.3, 0.5, 0.7, 0.2, 0.9, 0.4, 0.6}};
  auto h = builtin_hamiltonian("sum_log");
  auto before = kernels::active_isa();
  kernels::set_active_isa(kernels::Isa::scalar);
  auto a = c;
  for (int s = 0; s < 50; ++s) a = hamiltonian_step(a, h, 1e-2);
  kernels::set_active_isa(kernels::Isa::avx2);
  auto b = c;
  for (int s = 0; s < 50; ++s) b = hamiltonian_step(b, h, 1e-2);
  kernels::set_active_isa(before);
  CHECK(a == b);
}
