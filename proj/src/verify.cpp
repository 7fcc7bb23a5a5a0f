#include "latw/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "latw/ds_reduction.hpp"
#include "latw/loop_rep.hpp"
#include "latw/poisson.hpp"
#include "latw/polygon.hpp"
#include "latw/random.hpp"
#include "latw/w2.hpp"

namespace latw {

namespace {

// Running maximum of |x - y| kept in the scalar type, so exact mode can tell
// a tiny nonzero rational from zero.
template <class S>
struct Deviation {
  S worst{0};
  void add(const S& x, const S& y) {
    S d = scalar_abs(S(x - y));
    if (d > worst) worst = d;
  }
  void add_abs(const S& x) {
    S d = scalar_abs(x);
    if (d > worst) worst = d;
  }
  void add(const Matrix<S>& a, const Matrix<S>& b) {
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) add(a(i, j), b(i, j));
  }
  void add(const LaurentOperator<S>& a, const LaurentOperator<S>& b) {
    for (long k = std::min(a.lo(), b.lo()); k <= std::max(a.hi(), b.hi()); ++k)
      for (long s = 0; s < a.period(); ++s) add(a.at(k, s), b.at(k, s));
  }
  void add(const CompanionSequence<S>& a, const CompanionSequence<S>& b) {
    for (int r = 0; r < a.m; ++r)
      for (long s = 0; s < a.period; ++s) add(a(r, s), b(r, s));
  }
  // Forces a nonzero deviation for an exact-equality failure with no numeric witness.
  void require(bool ok) {
    if (!ok && is_zero(worst)) worst = S(1);
  }
  double value() const {
    double v = to_double(worst);
    if (v == 0 && !is_zero(worst)) v = std::numeric_limits<double>::denorm_min();
    return v;
  }
};

template <class S>
Matrix<S> random_invertible(Rng& rng, int m) {
  for (;;) {
    Matrix<S> g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g(i, j) = rng.ratio<S>(5, 3, false);
    if (!is_zero(determinant(g))) return g;
  }
}

template <class S>
MatrixSequence<S> random_isotropy(Rng& rng, int m, int n) {
  MatrixSequence<S> h;
  while (h.period() < n) {
    Matrix<S> g = random_invertible<S>(rng, m);
    for (int i = 0; i < m; ++i) g(i, 0) = S(i == 0 ? 1 : 0);
    if (!is_zero(determinant(g))) h.mats.push_back(std::move(g));
  }
  return h;
}

template <class S>
CompanionSequence<S> random_companion(Rng& rng, int m, int n) {
  CompanionSequence<S> a{m, n, {}};
  a.a.push_back(rng.sequence<S>(n, true));
  for (int r = 1; r < m; ++r) a.a.push_back(rng.sequence<S>(n, false));
  return a;
}

CoordinateIndex random_coordinate(Rng& rng, int m, int n) {
  return {int(rng.uniform_int(0, m)), rng.uniform_int(0, n - 1)};
}

// Criterion-level trial bodies; each returns the largest deviation found.

template <class S>
Deviation<S> trial_pbformulas(Rng& rng, int, int n) {
  auto d = rng.laurent<S>(n, 0, 2);
  Deviation<S> dev;
  dev.add(bracket_matrix(d).values, closed_form_bracket_m2(d));
  return dev;
}

// Operators whose cross-ratio chart is defined: nonzero coefficients, x_i not 0 or 1.
// Float mode draws |a| in [1/2, 2] so chart values stay O(10).
template <class S>
LaurentOperator<S> random_chart_operator(Rng& rng, int n) {
  auto row = [&] {
    if constexpr (scalar_traits<S>::exact) {
      return rng.sequence<S>(n);
    } else {
      PeriodicSequence<S> v(n);
      for (int s = 0; s < n; ++s) v[s] = (rng.uniform_int(0, 1) ? 1.0 : -1.0) * rng.uniform_real(0.5, 2.0);
      return v;
    }
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    LaurentOperator<S> d(n, 0, {row(), row(), row()});
    try {
      validate_chart(cross_ratios_from_operator(d));
      return d;
    } catch (const Degenerate&) {
    }
  }
  throw DomainError("could not draw a nondegenerate cross-ratio chart");
}

template <class S>
Deviation<S> trial_w2(Rng& rng, int, int n) {
  Deviation<S> dev;
  dev.add_abs(verify_w2_reduction(random_chart_operator<S>(rng, n)));
  return dev;
}

template <class S>
Deviation<S> trial_submanifold(Rng& rng, int m, int n) {
  auto d = rng.laurent<S>(n, 0, m);
  auto x = rng.laurent<S>(n, -m - 1, m + 1);
  auto pi = poisson_tensor_apply(d, x);
  Deviation<S> dev;
  for (long k = pi.lo(); k <= pi.hi(); ++k)
    if (k < 0 || k > m)
      for (long s = 0; s < n; ++s) dev.add_abs(pi.at(k, s));
  auto d0 = LaurentOperator<S>::monomial(rng.sequence<S>(n), 0);
  auto pi0 = poisson_tensor_apply(d0, x);
  for (long k = pi0.lo(); k <= pi0.hi(); ++k)
    for (long s = 0; s < n; ++s) dev.add_abs(pi0.at(k, s));
  return dev;
}

template <class S>
Deviation<S> trial_conjugation(Rng& rng, int m, int n) {
  auto d = rng.laurent<S>(n, 0, m);
  std::vector<S> av;
  for (int s = 0; s < n; ++s) av.push_back(rng.ratio<S>());
  QuasiPeriodicSequence<S> alpha(av, rng.ratio<S>());
  auto lm = rng.sequence<S>(n);
  auto before = bracket_matrix(d);
  auto after_c = bracket_matrix(conjugate(d, alpha));
  auto after_l = bracket_matrix(left_multiply(d, lm));
  Deviation<S> dev;
  for (const auto& p : before.coords)
    for (const auto& q : before.coords) {
      // a^p pulls back to k_p a^p with k_p constant at D.
      S kc = alpha.ratio_to_shift(p.power)[p.site] * alpha.ratio_to_shift(q.power)[q.site];
      S kl = lm[p.site] * lm[q.site];
      dev.add(after_c(p, q), S(kc * before(p, q)));
      dev.add(after_l(p, q), S(kl * before(p, q)));
    }
  return dev;
}

Deviation<double> trial_jacobi(Rng& rng, int m, int n) {
  auto d = rng.laurent<double>(n, 0, m);
  auto p = random_coordinate(rng, m, n), q = random_coordinate(rng, m, n), r = random_coordinate(rng, m, n);
  Deviation<double> dev;
  dev.add_abs(jacobi_residual(d, p, q, r, 1e-5));
  return dev;
}

template <class S>
Deviation<S> trial_xy(Rng& rng, int m, int n) {
  auto a = random_companion<S>(rng, m, n);
  auto p = transform(polygon_from_operator(section_operator(a)), random_invertible<S>(rng, m));
  auto f = InvariantFunctional<S>::from_polynomial(PolynomialFunctional<S>::random(rng, m, n, 2));
  auto x = xf_field(f, p), y = yf_field(f, p);
  Deviation<S> dev;
  dev.add_abs(field_deviation(x, y));
  return dev;
}

template <class S>
Deviation<S> trial_bracket_equiv(Rng& rng, int m, int n) {
  auto a = random_companion<S>(rng, m, n);
  auto f = InvariantFunctional<S>::from_polynomial(PolynomialFunctional<S>::random(rng, m, n, 2));
  auto g = InvariantFunctional<S>::from_polynomial(PolynomialFunctional<S>::random(rng, m, n, 2));
  Deviation<S> dev;
  dev.add(reduced_bracket(f, g, a), section_bracket(f, g, a));
  return dev;
}

template <class S>
Deviation<S> trial_loop(Rng& rng, int, int n) {
  auto x = rng.laurent<S>(n, rng.uniform_int(-3, 0), rng.uniform_int(0, 3));
  auto y = rng.laurent<S>(n, rng.uniform_int(-3, 0), rng.uniform_int(0, 3));
  auto xy = op_multiply(x, y);
  S z = rng.ratio<S>();
  Deviation<S> dev;
  dev.add(matrix_rep(xy, z), matrix_rep(x, z) * matrix_rep(y, z));
  auto lx = loop_matrix(x);
  dev.add(lx.trace().coeff(0), trace(x));
  if constexpr (scalar_traits<S>::exact) dev.require(loop_matrix(xy) == lx * loop_matrix(y));
  return dev;
}

template <class S>
Deviation<S> trial_roundtrip(Rng& rng, int m, int n) {
  Deviation<S> dev;
  auto d = rng.laurent<S>(n, 0, m);
  auto monic = section_operator(invariants_of(d));
  auto p = polygon_from_operator(d);
  auto back = operator_from_polygon(p);
  dev.add(back, monic);
  auto gp = transform(p, random_invertible<S>(rng, m));
  dev.add(operator_from_polygon(gp), back);
  auto inv = invariants_of(gp);
  dev.add(invariants_of(polygon_from_operator(operator_from_polygon(gp))), inv);
  auto b = inverse_companion_point(inv);
  auto moved = gauge_act(random_isotropy<S>(rng, m, n), b);
  dev.add(invariants_from_point(moved), inv);
  dev.add(operator_from_polygon(polygon_from_point(moved)), back);
  return dev;
}

struct SuiteEntry {
  std::string name;
  bool exact_capable;  // false: float-only
  double default_tol;
  int min_m, max_m, min_n;
  std::function<double(Rng&, int, int, bool exact, bool& zero)> run;
};

template <template <class> class Body>
std::function<double(Rng&, int, int, bool, bool&)> both_modes() {
  return [](Rng& rng, int m, int n, bool exact, bool& zero) {
    if (exact) {
      auto d = Body<Rational>::run(rng, m, n);
      zero = is_zero(d.worst);
      return d.value();
    }
    auto d = Body<double>::run(rng, m, n);
    zero = d.worst == 0;
    return d.value();
  };
}

#define LATW_BODY(NAME, FN) \
  template <class S>        \
  struct NAME {             \
    static Deviation<S> run(Rng& rng, int m, int n) { return FN<S>(rng, m, n); } \
  };
LATW_BODY(PbBody, trial_pbformulas)
LATW_BODY(W2Body, trial_w2)
LATW_BODY(SubBody, trial_submanifold)
LATW_BODY(ConjBody, trial_conjugation)
LATW_BODY(XyBody, trial_xy)
LATW_BODY(BrBody, trial_bracket_equiv)
LATW_BODY(LoopBody, trial_loop)
LATW_BODY(RtBody, trial_roundtrip)
#undef LATW_BODY

const std::vector<SuiteEntry>& suites() {
  static const std::vector<SuiteEntry> all = {
      {"pbformulas", true, 1e-9, 2, 2, 3, both_modes<PbBody>()},
      {"w2", true, 1e-10, 2, 2, 3, both_modes<W2Body>()},
      {"submanifold", true, 1e-9, 1, 16, 1, both_modes<SubBody>()},
      {"conjugation", true, 1e-9, 1, 16, 1, both_modes<ConjBody>()},
      {"jacobi", false, 1e-6, 1, 16, 1,
       [](Rng& rng, int m, int n, bool, bool& zero) {
         auto d = trial_jacobi(rng, m, n);
         zero = d.worst == 0;
         return d.value();
       }},
      {"xy-equiv", true, 1e-8, 1, 16, 2, both_modes<XyBody>()},
      {"bracket-equiv", true, 1e-8, 1, 16, 2, both_modes<BrBody>()},
      {"loop-rep", true, 1e-9, 1, 16, 1, both_modes<LoopBody>()},
      {"roundtrip", true, 1e-8, 1, 16, 1, both_modes<RtBody>()},
  };
  return all;
}

const SuiteEntry& find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return s;
  throw DomainError("unknown suite '" + name + "'");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.name);
    return out;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  return std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end();
}

std::vector<TrialResult> run_parallel(int count, unsigned threads, const std::function<TrialResult(int)>& fn) {
  std::vector<TrialResult> results(std::max(count, 0));
  if (count <= 0) return results;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) results[i] = fn(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

SuiteReport run_suite(const SuiteConfig& config) {
  const SuiteEntry& entry = find_suite(config.suite);
  if (config.trials < 0) throw DomainError("trials must be >= 0");
  if (config.m < entry.min_m || config.m > entry.max_m)
    throw DomainError("suite '" + entry.name + "' needs m in [" + std::to_string(entry.min_m) + ", " +
                      std::to_string(entry.max_m) + "]");
  if (config.n < entry.min_n) throw DomainError("suite '" + entry.name + "' needs N >= " + std::to_string(entry.min_n));
  if (config.tol && !(*config.tol >= 0)) throw DomainError("tolerance must be >= 0");

  SuiteReport report;
  report.config = config;
  const bool exact = entry.exact_capable && config.mode == ScalarMode::rational;
  report.mode = exact ? ScalarMode::rational : ScalarMode::f64;
  report.tolerance = exact ? 0.0 : config.tol.value_or(entry.default_tol);

  report.trials = run_parallel(config.trials, config.threads, [&](int i) {
    TrialResult r;
    r.trial = config.first_trial + i;
    r.m = config.m;
    r.n = config.n;
    r.seed = trial_seed(config.seed, std::uint64_t(r.trial));
    Rng rng(r.seed);
    try {
      bool zero = false;
      r.max_deviation = entry.run(rng, config.m, config.n, exact, zero);
      r.passed = exact ? zero : r.max_deviation <= report.tolerance;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.passed = false;
      r.max_deviation = std::numeric_limits<double>::infinity();
    }
    return r;
  });
  return report;
}

bool SuiteReport::passed() const {
  return std::all_of(trials.begin(), trials.end(), [](const TrialResult& t) { return t.passed; });
}

double SuiteReport::max_deviation() const {
  double worst = 0;
  for (const auto& t : trials) worst = std::max(worst, t.max_deviation);
  return worst;
}

nlohmann::json SuiteReport::to_json() const {
  auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : trials) {
    nlohmann::json row = {{"trial", t.trial}, {"m", t.m},  {"N", t.n}, {"seed", t.seed},
                          {"max_deviation", num(t.max_deviation)}, {"passed", t.passed}};
    if (!t.error.empty()) row["error"] = t.error;
    rows.push_back(std::move(row));
  }
  return {{"suite", config.suite},
          {"m", config.m},
          {"N", config.n},
          {"seed", config.seed},
          {"scalar_mode", to_string(mode)},
          {"tolerance", tolerance},
          {"passed", passed()},
          {"max_deviation", num(max_deviation())},
          {"trials", rows}};
}

}  // namespace latw
