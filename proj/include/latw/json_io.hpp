#pragma once
// JSON encodings of operators, polygons, matrix sequences, cross-ratio charts
// and verification reports. Rationals are written as "p/q" strings; f64 values
// as JSON numbers. Readers accept either form where the mode allows it.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "latw/dense_matrix.hpp"
#include "latw/ds_reduction.hpp"
#include "latw/errors.hpp"
#include "latw/laurent_operator.hpp"
#include "latw/polygon.hpp"
#include "latw/w2.hpp"

namespace latw {

using Json = nlohmann::json;

template <class S>
ScalarMode scalar_mode_of() {
  return scalar_traits<S>::exact ? ScalarMode::rational : ScalarMode::f64;
}

template <class S>
Json scalar_to_json(const S& x) {
  if constexpr (scalar_traits<S>::exact)
    return scalar_traits<S>::to_string(x);
  else
    return x;
}

template <class S>
S scalar_from_json(const Json& j) {
  try {
    if (j.is_string()) return scalar_traits<S>::parse(j.get<std::string>());
    if (j.is_number_integer()) return scalar_traits<S>::from_ratio(j.get<long>(), 1);
    if (j.is_number_float()) {
      double v = j.get<double>();
      if constexpr (scalar_traits<S>::exact) {
        if (!std::isfinite(v)) throw ParseError("non-finite number in rational mode");
        return S(v);  // binary doubles are exact rationals
      } else {
        return v;
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected a scalar, got " + j.dump());
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

inline long int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

inline const Json& array_of(const Json& j, std::size_t size, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + " must be an array");
  if (j.size() != size)
    throw ParseError(what + " has length " + std::to_string(j.size()) + ", expected " + std::to_string(size));
  return j;
}

template <class S>
std::vector<S> vector_from_json(const Json& j, std::size_t size, const std::string& what) {
  array_of(j, size, what);
  std::vector<S> out;
  for (const auto& v : j) out.push_back(scalar_from_json<S>(v));
  return out;
}

template <class Range>
Json vector_to_json(const Range& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <class S>
Json matrix_to_json(const Matrix<S>& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

template <class S>
Matrix<S> matrix_from_json(const Json& j, int n, const std::string& what) {
  array_of(j, std::size_t(n), what);
  Matrix<S> m(n, n);
  for (int i = 0; i < n; ++i) {
    auto row = vector_from_json<S>(j[i], std::size_t(n), what + " row");
    for (int k = 0; k < n; ++k) m(i, k) = row[k];
  }
  return m;
}

// The optional "scalar_mode" tag must name a known mode; values are read in
// the caller's mode either way.
inline void check_mode(const Json& j) {
  auto it = j.find("scalar_mode");
  if (it == j.end()) return;
  if (!it->is_string()) throw ParseError("scalar_mode must be a string");
  try {
    parse_scalar_mode(it->get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

/// {"N", "lo", "hi", "coeffs": [[scalar x N] per power lo..hi], "scalar_mode"}.
template <class S>
Json operator_to_json(const LaurentOperator<S>& d) {
  Json coeffs = Json::array();
  for (long k = d.lo(); k <= d.hi(); ++k) coeffs.push_back(detail::vector_to_json(d.coeff(k).values()));
  return {{"N", d.period()},
          {"lo", d.lo()},
          {"hi", d.hi()},
          {"coeffs", coeffs},
          {"scalar_mode", to_string(scalar_mode_of<S>())}};
}

template <class S>
LaurentOperator<S> operator_from_json(const Json& j) {
  long n = detail::int_field(j, "N"), lo = detail::int_field(j, "lo"), hi = detail::int_field(j, "hi");
  if (n < 1) throw DomainError("period N must be >= 1");
  if (hi < lo) throw DomainError("operator needs lo <= hi");
  detail::check_mode(j);
  const Json& c = detail::array_of(detail::field(j, "coeffs"), std::size_t(hi - lo + 1), "coeffs");
  std::vector<PeriodicSequence<S>> seqs;
  for (long k = 0; k <= hi - lo; ++k)
    seqs.emplace_back(detail::vector_from_json<S>(c[k], std::size_t(n), "coefficient row"));
  return LaurentOperator<S>(int(n), lo, std::move(seqs));
}

/// {"m", "N", "lifts": [[scalar x m] x N], "monodromy": [[scalar x m] x m]}.
template <class S>
Json polygon_to_json(const TwistedPolygon<S>& p) {
  Json lifts = Json::array();
  for (const auto& g : p.lifts()) lifts.push_back(detail::vector_to_json(g));
  return {{"m", p.dim()},
          {"N", p.period()},
          {"lifts", lifts},
          {"monodromy", detail::matrix_to_json(p.monodromy())},
          {"scalar_mode", to_string(scalar_mode_of<S>())}};
}

template <class S>
TwistedPolygon<S> polygon_from_json(const Json& j) {
  long m = detail::int_field(j, "m"), n = detail::int_field(j, "N");
  if (m < 1 || n < 1) throw DomainError("polygon needs m >= 1 and N >= 1");
  detail::check_mode(j);
  const Json& l = detail::array_of(detail::field(j, "lifts"), std::size_t(n), "lifts");
  std::vector<std::vector<S>> lifts;
  for (const auto& g : l) lifts.push_back(detail::vector_from_json<S>(g, std::size_t(m), "lift"));
  return TwistedPolygon<S>(int(m), std::move(lifts),
                           detail::matrix_from_json<S>(detail::field(j, "monodromy"), int(m), "monodromy"));
}

/// {"m", "N", "mats": [[[scalar x m] x m] x N]}.
template <class S>
Json matrix_sequence_to_json(const MatrixSequence<S>& a) {
  Json mats = Json::array();
  for (const auto& m : a.mats) mats.push_back(detail::matrix_to_json(m));
  return {{"m", a.dim()}, {"N", a.period()}, {"mats", mats}, {"scalar_mode", to_string(scalar_mode_of<S>())}};
}

template <class S>
MatrixSequence<S> matrix_sequence_from_json(const Json& j) {
  long m = detail::int_field(j, "m"), n = detail::int_field(j, "N");
  if (m < 1 || n < 1) throw DomainError("matrix sequence needs m >= 1 and N >= 1");
  const Json& mats = detail::array_of(detail::field(j, "mats"), std::size_t(n), "mats");
  MatrixSequence<S> out;
  for (const auto& x : mats) out.mats.push_back(detail::matrix_from_json<S>(x, int(m), "matrix"));
  return out;
}

/// {"N", "x": [scalar x N]}.
template <class S>
Json chart_to_json(const CrossRatioChart<S>& c) {
  return {{"N", c.period()}, {"x", detail::vector_to_json(c.x)}, {"scalar_mode", to_string(scalar_mode_of<S>())}};
}

template <class S>
CrossRatioChart<S> chart_from_json(const Json& j) {
  long n = detail::int_field(j, "N");
  if (n < 1) throw DomainError("period N must be >= 1");
  return {detail::vector_from_json<S>(detail::field(j, "x"), std::size_t(n), "x")};
}

/// Which object a JSON document holds, by its fields.
enum class JsonKind { op, polygon, matrix_sequence, chart, unknown };

inline JsonKind json_kind(const Json& j) {
  if (!j.is_object()) return JsonKind::unknown;
  if (j.contains("coeffs")) return JsonKind::op;
  if (j.contains("lifts")) return JsonKind::polygon;
  if (j.contains("mats")) return JsonKind::matrix_sequence;
  if (j.contains("x")) return JsonKind::chart;
  return JsonKind::unknown;
}

/// {"pairs": [{"p": [j, t], "q": [j, t], "value": scalar}]}.
template <class S>
Json bracket_report(const BracketTable<S>& t, bool upper_only = true) {
  Json pairs = Json::array();
  const int k = int(t.coords.size());
  for (int a = 0; a < k; ++a)
    for (int b = upper_only ? a : 0; b < k; ++b) {
      const auto& p = t.coords[a];
      const auto& q = t.coords[b];
      pairs.push_back({{"p", {p.power, p.site}}, {"q", {q.power, q.site}}, {"value", scalar_to_json(t.values(a, b))}});
    }
  return {{"pairs", pairs}};
}

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace latw
