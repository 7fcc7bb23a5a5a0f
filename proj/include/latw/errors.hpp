#pragma once

#include <stdexcept>
#include <string>

namespace latw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PeriodMismatch : Error {
  PeriodMismatch(int a, int b)
      : Error("period mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// A matrix, sequence entry, or operator that must be invertible is not.
struct NotInvertible : Error {
  using Error::Error;
};

/// Degenerate geometric data; `site` names the first offending index.
struct Degenerate : Error {
  long site;
  Degenerate(const std::string& what, long s)
      : Error(what + " at site " + std::to_string(s)), site(s) {}
};

struct DomainError : Error {
  using Error::Error;
};

/// Malformed external input (JSON, scalar literals, CLI values).
struct ParseError : Error {
  using Error::Error;
};

}  // namespace latw
