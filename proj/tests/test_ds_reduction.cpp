#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <vector>

#include "latw/ds_reduction.hpp"
#include "latw/polygon.hpp"
#include "latw/random.hpp"

using namespace latw;
using Q = Rational;
using Seq = PeriodicSequence<Q>;
using Poly = PolynomialFunctional<Q>;
using Fun = InvariantFunctional<Q>;

namespace {

CompanionSequence<Q> random_companion(Rng& rng, int m, int n) {
  CompanionSequence<Q> a{m, n, {}};
  a.a.push_back(rng.sequence<Q>(n, true));
  for (int r = 1; r < m; ++r) a.a.push_back(rng.sequence<Q>(n, false));
  return a;
}

Matrix<Q> random_matrix(Rng& rng, int m) {
  for (;;) {
    Matrix<Q> g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = rng.ratio<Q>(5, 3, false);
    if (!is_zero(determinant(g))) return g;
  }
}

MatrixSequence<Q> random_isotropy(Rng& rng, int m, int n) {
  MatrixSequence<Q> h;
  for (int s = 0; s < n; ++s) {
    for (;;) {
      Matrix<Q> g = random_matrix(rng, m);
      for (int i = 0; i < m; ++i) g(i, 0) = Q(i == 0 ? 1 : 0);
      if (!is_zero(determinant(g))) {
        h.mats.push_back(g);
        break;
      }
    }
  }
  return h;
}

Q coordinate_bracket_reduced(int r, long s, int q, long t, const CompanionSequence<Q>& a) {
  return reduced_bracket(Fun::from_polynomial(Poly::coordinate(a.m, a.period, r, s)),
                         Fun::from_polynomial(Poly::coordinate(a.m, a.period, q, t)), a);
}

Matrix<Q> unit(int m, int i, int j) {
  Matrix<Q> e(m, m);
  e(i, j) = Q(1);
  return e;
}

}  // namespace

TEST_CASE("rhat pairing examples") {
  CHECK(rhat_pair(unit(2, 1, 0), unit(2, 0, 1)) == Q(0));
  CHECK(rhat_pair(unit(2, 0, 1), unit(2, 1, 0)) == Q(1));
  CHECK(rhat_pair(unit(3, 0, 2), unit(3, 1, 2)) == Q(0));
  CHECK(rhat_pair(Matrix<Q>::identity(2), Matrix<Q>::identity(2)) == Q(1));
  CHECK(rhat_pair(Matrix<Q>::identity(3), Matrix<Q>::identity(3)) == Q(3, 2));
}

TEST_CASE("invariants of the inverse companion point") {
  Rng rng(11);
  for (int m = 1; m <= 4; ++m) {
    auto a = random_companion(rng, m, 5);
    auto b = inverse_companion_point(a);
    CHECK(invariants_from_point(b) == a);
    auto p = polygon_from_point(b);
    CHECK(invariants_of(p) == a);
  }
}

TEST_CASE("gradient rows for coordinate functions") {
  Rng rng(3);
  auto a = random_companion(rng, 2, 5);
  auto b = inverse_companion_point(a);
  for (long s = 0; s < 5; ++s) {
    auto g0 = gradient_pair_dual(Poly::coordinate(2, 5, 0, s), b);
    CHECK(g0.right[s](0, 0) == -a(0, s));
    CHECK(g0.right[s](0, 1) == Q(0));
    auto g1 = gradient_pair_dual(Poly::coordinate(2, 5, 1, s), b);
    CHECK(g1.right[s](0, 1) == -a(0, s));
    CHECK(g1.right[s](0, 0) == Q(0));
  }
  auto gc = grad_from_invariants(Fun::from_polynomial(Poly::constant(3, 5, Q(7))), random_companion(rng, 3, 5));
  for (long s = 0; s < 5; ++s) {
    CHECK(gc.left[s] == Matrix<Q>(3, 3));
    CHECK(gc.right[s] == Matrix<Q>(3, 3));
  }
}

TEST_CASE("analytic gradients agree with the differentiated extension") {
  Rng rng(5);
  for (int m = 1; m <= 4; ++m)
    for (int n : {5, 7}) {
      auto a = random_companion(rng, m, n);
      auto f = Poly::random(rng, m, n);
      auto dual = gradient_pair_dual(f, inverse_companion_point(a));
      auto analytic = grad_from_invariants(Fun::from_polynomial(f), a);
      CHECK(dual.left == analytic.left);
      CHECK(dual.right == analytic.right);
    }
}

TEST_CASE("gradient structure: conjugation and first-row support") {
  Rng rng(7);
  for (int m = 2; m <= 4; ++m) {
    const int n = 5;
    auto a = random_companion(rng, m, n);
    auto b = inverse_companion_point(a);
    auto g = gradient_pair_dual(Poly::random(rng, m, n), b);
    auto diff = g.right.shifted() - g.left;
    for (long s = 0; s < n; ++s) {
      CHECK(g.left[s] == b[s] * g.right[s] * inverse(b[s]));
      for (int i = 1; i < m; ++i)
        for (int j = 0; j < m; ++j) CHECK(diff[s](i, j) == Q(0));
    }
  }
}

TEST_CASE("twisted bracket equals the reduced bracket and is skew") {
  Rng rng(13);
  for (int m = 1; m <= 3; ++m)
    for (int n : {5, 7}) {
      auto a = random_companion(rng, m, n);
      auto f = Fun::from_polynomial(Poly::random(rng, m, n));
      auto g = Fun::from_polynomial(Poly::random(rng, m, n));
      auto gf = grad_from_invariants(f, a), gg = grad_from_invariants(g, a);
      Q red = reduced_bracket(gf, gg);
      CHECK(twisted_bracket(gf, gg) == red);
      CHECK(reduced_bracket(gg, gf) == -red);
      CHECK(twisted_bracket(gf, gf) == Q(0));
      CHECK(reduced_bracket(gf, gf) == Q(0));
    }
}

TEST_CASE("twisted bracket with finite-difference gradients") {
  Rng rng(17);
  const int m = 3, n = 5;
  MatrixSequence<double> b;
  for (int s = 0; s < n; ++s) {
    Matrix<double> x = Matrix<double>::identity(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) x(i, j) += rng.uniform_real(-0.4, 0.4);
    b.mats.push_back(x);
  }
  PolynomialFunctional<double> pf = PolynomialFunctional<double>::random(rng, m, n);
  PolynomialFunctional<double> pg = PolynomialFunctional<double>::random(rng, m, n);
  auto ff = [pf](const MatrixSequence<double>& x) { return pf.evaluate(invariants_from_point(x)); };
  auto fg = [pg](const MatrixSequence<double>& x) { return pg.evaluate(invariants_from_point(x)); };
  double exact = twisted_bracket(gradient_pair_dual(pf, b), gradient_pair_dual(pg, b));
  double fd = twisted_bracket(gradient_pair_fd(ff, b), gradient_pair_fd(fg, b));
  CHECK(std::fabs(exact - fd) <= 1e-8 * std::max(1.0, std::fabs(exact)));
}

TEST_CASE("gauge action") {
  Rng rng(19);
  for (int m : {2, 3}) {
    const int n = 5;
    auto a = random_companion(rng, m, n);
    auto b = inverse_companion_point(a);
    MatrixSequence<Q> id(std::vector<Matrix<Q>>(n, Matrix<Q>::identity(m)));
    CHECK(gauge_act(id, b) == b);

    auto h = random_isotropy(rng, m, n), h2 = random_isotropy(rng, m, n);
    auto moved = gauge_act(h, b);
    CHECK(invariants_from_point(moved) == a);
    CHECK(operator_from_polygon(polygon_from_point(moved)) == section_operator(a));

    MatrixSequence<Q> prod;
    for (int s = 0; s < n; ++s) prod.mats.push_back(h2[s] * h[s]);
    CHECK(gauge_act(h2, moved) == gauge_act(prod, b));

    auto f = Poly::random(rng, m, n), g = Poly::random(rng, m, n);
    Q before = twisted_bracket(gradient_pair_dual(f, b), gradient_pair_dual(g, b));
    Q after = twisted_bracket(gradient_pair_dual(f, moved), gradient_pair_dual(g, moved));
    CHECK(before == after);
  }
  MatrixSequence<Q> bad(std::vector<Matrix<Q>>(3, Matrix<Q>::identity(2)));
  bad[1](1, 0) = Q(1);
  MatrixSequence<Q> pt(std::vector<Matrix<Q>>(3, Matrix<Q>::identity(2)));
  CHECK_THROWS_AS(gauge_act(bad, pt), DomainError);
}

TEST_CASE("first column of Q from the gradients") {
  Rng rng(23);
  for (int m = 1; m <= 4; ++m) {
    const int n = 7;
    auto a = random_companion(rng, m, n);
    auto f = Fun::from_polynomial(Poly::random(rng, m, n));
    auto g = grad_from_invariants(f, a);
    auto q = qf_first_column(f.variation(a), a);
    for (long s = 0; s < n; ++s)
      for (int i = 0; i < m; ++i) CHECK(q[s][i] == half<Q>() * (g.left[s - 1](i, 0) + g.right[s](i, 0)));
  }
  auto a = random_companion(rng, 2, 5);
  auto f = Fun::from_polynomial(Poly::random(rng, 2, 5));
  auto var = f.variation(a);
  auto q = qf_first_column(var, a);
  for (long s = 0; s < 5; ++s) CHECK(q[s][1] == -var[1][s - 1]);
  auto a3 = random_companion(rng, 3, 5);
  for (const auto& col : qf_first_column(Fun::from_polynomial(Poly::constant(3, 5, Q(2))).variation(a3), a3))
    for (const auto& e : col) CHECK(e == Q(0));
}

TEST_CASE("X equals Y on polygons") {
  Rng rng(29);
  for (int m = 2; m <= 4; ++m)
    for (int n : {5, 7}) {
      if (std::gcd(m, n) != 1) continue;
      for (int trial = 0; trial < 3; ++trial) {
        auto a = random_companion(rng, m, n);
        auto p = polygon_from_operator(section_operator(a));
        auto f = Fun::from_polynomial(Poly::random(rng, m, n));
        auto x = xf_field(f, p), y = yf_field(f, p);
        CHECK(x == y);
        CHECK(field_deviation(x, y) == Q(0));
      }
    }
  Rng r2(1);
  auto a = random_companion(r2, 3, 5);
  auto p = polygon_from_operator(section_operator(a));
  auto c = Fun::from_polynomial(Poly::constant(3, 5, Q(4)));
  for (const auto& v : xf_field(c, p).vectors)
    for (const auto& e : v) CHECK(e == Q(0));
  for (const auto& v : yf_field(c, p).vectors)
    for (const auto& e : v) CHECK(e == Q(0));
}

TEST_CASE("X is GL(m)-equivariant") {
  Rng rng(31);
  for (int m : {2, 3}) {
    auto a = random_companion(rng, m, 5);
    auto p = polygon_from_operator(section_operator(a));
    auto g = random_matrix(rng, m);
    auto f = Fun::from_polynomial(Poly::random(rng, m, 5));
    auto x = xf_field(f, p), gx = xf_field(f, transform(p, g));
    for (long s = 0; s < 5; ++s) CHECK(gx.vectors[s] == g * x.vectors[s]);
  }
}

TEST_CASE("evolution driven by Q is the reduced Hamiltonian flow") {
  Rng rng(37);
  for (int m = 1; m <= 3; ++m)
    for (int n : {5, 7}) {
      auto a = random_companion(rng, m, n);
      auto f = Fun::from_polynomial(Poly::random(rng, m, n));
      auto q = complete_q(qf_first_column(f.variation(a), a), a);
      auto ev = invariant_evolution(q, a);
      CHECK(ev.off_column_defect == Q(0));
      for (int r = 0; r < m; ++r)
        for (long s = 0; s < n; ++s) {
          Q br = reduced_bracket(f, Fun::from_polynomial(Poly::coordinate(m, n, r, s)), a);
          CHECK(ev.rates(r, s) == br);
        }
      MatrixSequence<Q> shifted = q;
      for (auto& mat : shifted.mats) mat += Matrix<Q>::identity(m);
      CHECK(invariant_evolution(shifted, a).rates == ev.rates);
      MatrixSequence<Q> id(std::vector<Matrix<Q>>(n, Matrix<Q>::identity(m)));
      auto still = invariant_evolution(id, a);
      for (int r = 0; r < m; ++r) CHECK(still.rates.a[r] == Seq(n));
    }
}

TEST_CASE("reduced bracket equals the scalar bracket on the section") {
  Rng rng(41);
  for (int m : {2, 3})
    for (int n : {5, 7}) {
      auto a = random_companion(rng, m, n);
      auto f = Fun::from_polynomial(Poly::random(rng, m, n));
      auto g = Fun::from_polynomial(Poly::random(rng, m, n));
      CHECK(reduced_bracket(f, g, a) == section_bracket(f, g, a));
    }
}

TEST_CASE("left-scale identity on the section") {
  // F(b) = f(-b^r / b^m): d/d b^m_s at b^m = -1 equals sum_r b^r_s delta_{b^r_s} F.
  using D = Dual<Q>;
  Rng rng(43);
  for (int m : {2, 3}) {
    const int n = 5;
    auto a = random_companion(rng, m, n);
    auto f = Poly::random(rng, m, n);
    auto var = f.variation(a);
    for (long s = 0; s < n; ++s) {
      CompanionSequence<D> ad{m, n, std::vector<PeriodicSequence<D>>(m, PeriodicSequence<D>(n))};
      for (int r = 0; r < m; ++r)
        for (long t = 0; t < n; ++t) {
          D bm = t == s ? D(Q(-1), Q(1)) : D(Q(-1));
          ad.a[r][t] = D(-a(r, t)) / bm;
        }
      Q expected(0);
      for (int r = 0; r < m; ++r) expected += a(r, s) * var[r][s];
      CHECK(f.evaluate(ad).deriv == expected);
    }
  }
}

TEST_CASE("reduced bracket is local") {
  Rng rng(47);
  auto a = random_companion(rng, 2, 8);
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < 2; ++q)
      for (long s = 0; s < 8; ++s) CHECK(coordinate_bracket_reduced(r, s, q, s + 4, a) == Q(0));
  bool any_nonzero = false;
  for (long s = 0; s < 8; ++s)
    if (!is_zero(coordinate_bracket_reduced(0, s, 1, s + 1, a))) any_nonzero = true;
  CHECK(any_nonzero);
}
