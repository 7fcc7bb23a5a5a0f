#pragma once
// Seeded random data generators. Every trial derives its own seed from the run
// seed, so a single trial can be replayed in isolation.

#include <cstdint>
#include <random>
#include <vector>

#include "latw/laurent_operator.hpp"
#include "latw/scalar.hpp"
#include "latw/sequence.hpp"

namespace latw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t run_seed, std::uint64_t trial) {
  return splitmix64(run_seed ^ splitmix64(trial + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  long uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }
  double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  /// p/q with |p| <= num, 1 <= q <= den; optionally nonzero or positive.
  template <class S>
  S ratio(long num = 9, long den = 5, bool nonzero = true, bool positive = false) {
    long p;
    do {
      p = uniform_int(positive ? 1 : -num, num);
    } while (nonzero && p == 0);
    long q = uniform_int(1, den);
    return scalar_traits<S>::from_ratio(p, q);
  }

  template <class S>
  PeriodicSequence<S> sequence(int n, bool nonzero = true, bool positive = false) {
    std::vector<S> v(n);
    for (auto& x : v) x = ratio<S>(9, 5, nonzero, positive);
    return PeriodicSequence<S>(std::move(v));
  }

  /// Random finite operator on powers [lo, hi]; end coefficients entrywise nonzero.
  template <class S>
  LaurentOperator<S> laurent(int n, long lo, long hi, bool positive = false) {
    std::vector<PeriodicSequence<S>> c;
    for (long i = lo; i <= hi; ++i) c.push_back(sequence<S>(n, i == lo || i == hi, positive));
    return LaurentOperator<S>(n, lo, std::move(c));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace latw
