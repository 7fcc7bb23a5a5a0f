#pragma once
// Randomized verification suites. Each trial draws its data from a seed
// derived from the run seed and the trial index, so any failing trial can be
// replayed alone. Trials run on a worker pool; reports are ordered by trial.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latw/scalar.hpp"

namespace latw {

struct SuiteConfig {
  std::string suite;
  int m = 2;
  int n = 5;
  std::uint64_t seed = 1;
  ScalarMode mode = ScalarMode::rational;
  std::optional<double> tol;  ///< f64 only; rational mode always demands exact 0
  int trials = 10;
  int first_trial = 0;        ///< replay: run trials first_trial .. first_trial + trials - 1
  unsigned threads = 0;       ///< 0: hardware concurrency
};

struct TrialResult {
  int trial = 0;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double max_deviation = 0;
  bool passed = false;
  std::string error;
};

struct SuiteReport {
  SuiteConfig config;
  ScalarMode mode = ScalarMode::rational;  ///< mode actually used
  double tolerance = 0;
  std::vector<TrialResult> trials;

  bool passed() const;
  double max_deviation() const;
  nlohmann::json to_json() const;
};

/// Known suite names.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs config.trials trials; throws DomainError for an unknown suite or bad sizes.
SuiteReport run_suite(const SuiteConfig& config);

/// Runs fn(i) for i in [0, count) on up to `threads` workers; results[i] = fn(i).
std::vector<TrialResult> run_parallel(int count, unsigned threads, const std::function<TrialResult(int)>& fn);

}  // namespace latw
