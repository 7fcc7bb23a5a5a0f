// Acceptance run: the nine end-to-end criteria at their stated sizes,
// tolerances and time limits. One line per criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "latw/verify.hpp"

using namespace latw;

namespace {

struct Run {
  std::string suite;
  int m;
  int n;
  int trials;
  ScalarMode mode = ScalarMode::rational;
  std::optional<double> tol = {};
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::vector<Run> runs;
};

constexpr std::uint64_t kSeed = 20240601;

bool check(const Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  int trials = 0, failed = 0;
  double worst = 0;
  std::string first_failure;
  for (const auto& r : c.runs) {
    SuiteConfig cfg;
    cfg.suite = r.suite;
    cfg.m = r.m;
    cfg.n = r.n;
    cfg.trials = r.trials;
    cfg.mode = r.mode;
    cfg.tol = r.tol;
    cfg.seed = kSeed + std::uint64_t(c.id) * 1000 + std::uint64_t(r.m) * 10 + std::uint64_t(r.n);
    SuiteReport rep = run_suite(cfg);
    trials += int(rep.trials.size());
    worst = std::max(worst, rep.max_deviation());
    for (const auto& t : rep.trials)
      if (!t.passed) {
        ++failed;
        if (first_failure.empty())
          first_failure = r.suite + " m=" + std::to_string(t.m) + " N=" + std::to_string(t.n) + " trial " +
                          std::to_string(t.trial) + " seed " + std::to_string(t.seed) +
                          (t.error.empty() ? "" : " (" + t.error + ")");
      }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = failed == 0 && secs < c.limit_seconds;
  std::printf("[%s] criterion %d: %s: %d trials, %d failed, max deviation %.3g, %.2f s (limit %.0f s)\n",
              ok ? "PASS" : "FAIL", c.id, c.title.c_str(), trials, failed, worst, secs, c.limit_seconds);
  if (!first_failure.empty()) std::printf("         first failure: %s\n", first_failure.c_str());
  std::fflush(stdout);
  return ok;
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> out;
  const auto f64 = ScalarMode::f64;

  Criterion c1{1, "m=2 coordinate bracket table, exact", 10, {}};
  for (int n = 3; n <= 8; ++n) c1.runs.push_back({"pbformulas", 2, n, 100});
  out.push_back(c1);

  Criterion c2{2, "W2 reduction, exact and f64 <= 1e-10", 30, {}};
  for (int n = 4; n <= 8; ++n) c2.runs.push_back({"w2", 2, n, 50});
  for (int n = 4; n <= 8; ++n) c2.runs.push_back({"w2", 2, n, 50, f64, 1e-10});
  out.push_back(c2);

  out.push_back({3, "Poisson submanifold and vanishing at order 0, exact", 10,
                 {{"submanifold", 1, 4, 67}, {"submanifold", 2, 5, 67}, {"submanifold", 3, 6, 66}}});

  out.push_back({4, "conjugation and left multiplication are Poisson, exact", 20,
                 {{"conjugation", 2, 5, 50}, {"conjugation", 3, 5, 50}}});

  Criterion c5{5, "Jacobi identity, f64 with h = 1e-5, residual <= 1e-6", 60, {}};
  for (int m : {2, 3})
    for (int n : {4, 5}) c5.runs.push_back({"jacobi", m, n, 25, f64, 1e-6});
  out.push_back(c5);

  Criterion c6{6, "X^f = Y^f on twisted polygons, exact", 120, {}};
  for (int m : {2, 3, 4})
    for (int n : {5, 7})
      if (std::gcd(m, n) == 1) c6.runs.push_back({"xy-equiv", m, n, 50});
  out.push_back(c6);

  Criterion c7{7, "reduced bracket = scalar bracket on the monic section, exact", 60, {}};
  for (int m : {2, 3})
    for (int n : {5, 7}) c7.runs.push_back({"bracket-equiv", m, n, 50});
  out.push_back(c7);

  Criterion c8{8, "loop representation homomorphism and trace, exact", 10, {}};
  for (int n = 1; n <= 5; ++n) c8.runs.push_back({"loop-rep", 1, n, 20});
  out.push_back(c8);

  out.push_back({9, "polygon/operator roundtrips and gauge invariance, exact", 10,
                 {{"roundtrip", 2, 5, 50}, {"roundtrip", 3, 7, 50}}});
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  for (const auto& c : criteria())
    if (!check(c)) ++failed;
  std::printf("%s: %d of 9 criteria failed\n", failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failed);
  return failed == 0 ? 0 : 1;
}
