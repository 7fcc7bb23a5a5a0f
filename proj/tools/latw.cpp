// latw: command-line front end for the lattice W_m library.
//
//   latw generate --kind operator|polygon|chart|matrices --m 3 --n 7 --seed 1
//   latw bracket  --in op.json [--pair 1,2,0,3 ...] [--format csv]
//   latw polygon  --in op-or-polygon.json
//   latw verify   --suite xy-equiv --m 3 --n 5 --trials 50
//   latw flow     --in chart.json --hamiltonian sum --dt 1e-3 --steps 1000
//
// Exit codes: 0 success, 1 verification or computation failure, 2 usage/parse error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latw/ds_reduction.hpp"
#include "latw/json_io.hpp"
#include "latw/poisson.hpp"
#include "latw/polygon.hpp"
#include "latw/random.hpp"
#include "latw/verify.hpp"
#include "latw/w2.hpp"

using namespace latw;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Options {
  int m = 2;
  int n = 5;
  std::uint64_t seed = 1;
  std::string mode = "rational";
  std::optional<double> tol;
  int trials = 10;
  int first_trial = 0;
  unsigned threads = 0;
  std::string suite;
  std::string in = "-";
  std::string out;
  std::vector<std::string> pairs;
  std::string format = "json";
  std::string kind = "operator";
  double dt = 1e-3;
  long steps = 0;
  std::string hamiltonian = "sum";
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// "j,t,j,t" -> pair of coordinates.
std::pair<CoordinateIndex, CoordinateIndex> parse_pair(const std::string& text) {
  std::vector<long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stol(item, &used));
      if (used != item.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("bad --pair '" + text + "': expected j,t,j,t");
    }
  }
  if (v.size() != 4) throw ParseError("bad --pair '" + text + "': expected j,t,j,t");
  return {{int(v[0]), v[1]}, {int(v[2]), v[3]}};
}

template <class S>
Json pair_row(CoordinateIndex p, CoordinateIndex q, const S& v) {
  return {{"p", {p.power, p.site}}, {"q", {q.power, q.site}}, {"value", scalar_to_json(v)}};
}

std::string pairs_csv(const Json& report) {
  std::string out = "p_power,p_site,q_power,q_site,value\n";
  for (const auto& row : report["pairs"]) {
    std::string v = row["value"].is_string() ? row["value"].get<std::string>() : row["value"].dump();
    out += row["p"][0].dump() + "," + row["p"][1].dump() + "," + row["q"][0].dump() + "," + row["q"][1].dump() + "," +
           v + "\n";
  }
  return out;
}

template <class S>
Json bracket_command(const Json& input, const Options& o) {
  JsonKind kind = json_kind(input);
  if (kind == JsonKind::op) {
    auto d = operator_from_json<S>(input);
    if (o.pairs.empty()) return bracket_report(bracket_matrix(d));
    Json rows = Json::array();
    for (const auto& text : o.pairs) {
      auto [p, q] = parse_pair(text);
      rows.push_back(pair_row(p, q, bracket_coordinates(d, p, q)));
    }
    return {{"pairs", rows}};
  }
  if (kind == JsonKind::chart) {
    // Chart coordinates x_i are reported as [0, i].
    auto c = chart_from_json<S>(input);
    validate_chart(c);
    Json rows = Json::array();
    auto emit = [&](long i, long j) { rows.push_back(pair_row(CoordinateIndex{0, i}, CoordinateIndex{0, j}, w2_bracket(c, i, j))); };
    if (o.pairs.empty()) {
      for (long i = 0; i < c.period(); ++i)
        for (long j = i; j < c.period(); ++j) emit(i, j);
    } else {
      for (const auto& text : o.pairs) {
        auto [p, q] = parse_pair(text);
        if (p.power != 0 || q.power != 0 || p.site < 0 || q.site < 0 || p.site >= c.period() || q.site >= c.period())
          throw DomainError("chart coordinate out of range in --pair '" + text + "'");
        emit(p.site, q.site);
      }
    }
    return {{"pairs", rows}};
  }
  throw ParseError("bracket input must be an operator or a cross-ratio chart");
}

template <class S>
Json quasi_to_json(const QuasiPeriodicSequence<S>& q) {
  return {{"values", detail::vector_to_json(q.base().values())}, {"monodromy", scalar_to_json(q.monodromy())}};
}

template <class S>
Json polygon_diagnostics(const TwistedPolygon<S>& p) {
  Json dets = Json::array();
  for (long s = 0; s < p.period(); ++s) dets.push_back(scalar_to_json(p.frame_det(s)));
  Json out = {{"frame_determinants", dets}};
  long bad = p.first_degenerate_site();
  if (bad >= 0) throw Degenerate("degenerate polygon: frame determinant vanishes", bad);
  auto d = operator_from_polygon(p);
  out["operator"] = operator_to_json(d);
  if (p.dim() == 2 && p.period() > 2) out["cross_ratios"] = chart_to_json(cross_ratios_from_polygon(p));
  if (std::gcd(p.dim(), p.period()) == 1) {
    try {
      auto sec = normalize_to_section(d);
      out["canonical"] = {{"operator", operator_to_json(sec.op)}, {"f", quasi_to_json(sec.f)}, {"g", quasi_to_json(sec.g)}};
    } catch (const Error& e) {
      out["canonical_error"] = e.what();
    }
  }
  return out;
}

template <class S>
Json polygon_command(const Json& input) {
  JsonKind kind = json_kind(input);
  if (kind == JsonKind::op) {
    auto d = operator_from_json<S>(input);
    auto p = polygon_from_operator(d);
    Json out = {{"polygon", polygon_to_json(p)}, {"monodromy", detail::matrix_to_json(p.monodromy())}};
    out.update(polygon_diagnostics(p));
    return out;
  }
  if (kind == JsonKind::polygon) {
    auto p = polygon_from_json<S>(input);
    Json out = {{"monodromy", detail::matrix_to_json(p.monodromy())}};
    out.update(polygon_diagnostics(p));
    return out;
  }
  if (kind == JsonKind::matrix_sequence) {
    auto b = matrix_sequence_from_json<S>(input);
    auto p = polygon_from_point(b);
    Json out = {{"polygon", polygon_to_json(p)}, {"monodromy", detail::matrix_to_json(p.monodromy())}};
    out.update(polygon_diagnostics(p));
    return out;
  }
  throw ParseError("polygon input must be an operator, a polygon or a matrix sequence");
}

template <class S>
Json generate_command(const Options& o) {
  if (o.n < 1 || o.m < 1) throw DomainError("generate needs m >= 1 and N >= 1");
  Rng rng(o.seed);
  if (o.kind == "operator") return operator_to_json(rng.laurent<S>(o.n, 0, o.m));
  if (o.kind == "polygon") {
    auto p = polygon_from_operator(rng.laurent<S>(o.n, 0, o.m));
    for (;;) {
      Matrix<S> g(o.m, o.m);
      for (int i = 0; i < o.m; ++i)
        for (int j = 0; j < o.m; ++j) g(i, j) = rng.ratio<S>(5, 3, false);
      if (!is_zero(determinant(g))) return polygon_to_json(transform(p, g));
    }
  }
  if (o.kind == "chart") {
    if (o.n < 3) throw DomainError("a cross-ratio chart needs N > 2");
    for (;;) {
      try {
        auto c = cross_ratios_from_operator(rng.laurent<S>(o.n, 0, 2, true));
        validate_chart(c);
        return chart_to_json(c);
      } catch (const Degenerate&) {
      }
    }
  }
  if (o.kind == "matrices") {
    CompanionSequence<S> a{o.m, o.n, {}};
    a.a.push_back(rng.sequence<S>(o.n, true));
    for (int r = 1; r < o.m; ++r) a.a.push_back(rng.sequence<S>(o.n, false));
    return matrix_sequence_to_json(inverse_companion_point(a));
  }
  throw DomainError("unknown --kind '" + o.kind + "' (expected operator, polygon, chart or matrices)");
}

int flow_command(const Options& o) {
  if (o.mode != "f64") throw DomainError("flow integrates in f64 mode only (pass --mode f64 or omit --mode)");
  if (o.steps < 0) throw DomainError("--steps must be >= 0");
  if (!(o.dt > 0) || !std::isfinite(o.dt)) throw DomainError("--dt must be positive");
  auto chart = chart_from_json<double>(read_json_file(o.in));
  validate_chart(chart);
  Hamiltonian h = builtin_hamiltonian(o.hamiltonian);
  const double h0 = h.value(chart.x);
  std::ostringstream csv;
  csv.precision(17);
  csv << "step";
  for (int i = 0; i < chart.period(); ++i) csv << ",x" << i;
  csv << ",H,drift\n";
  auto row = [&](long step) {
    csv << step;
    for (double v : chart.x) csv << "," << v;
    double hv = h.value(chart.x);
    csv << "," << hv << "," << (hv - h0) << "\n";
  };
  row(0);
  int status = 0;
  for (long step = 1; step <= o.steps; ++step) {
    try {
      chart = hamiltonian_step(chart, h, o.dt);
      validate_chart(chart);
    } catch (const Degenerate& e) {
      std::cerr << "latw flow: chart degenerated at step " << step << ": " << e.what() << "\n";
      status = kFailure;
      break;
    }
    row(step);
  }
  write_text_file(o.out, csv.str());
  return status;
}

int verify_command(const Options& o) {
  SuiteConfig cfg;
  cfg.suite = o.suite;
  cfg.m = o.m;
  cfg.n = o.n;
  cfg.seed = o.seed;
  cfg.mode = parse_scalar_mode(o.mode);
  cfg.tol = o.tol;
  cfg.trials = o.trials;
  cfg.first_trial = o.first_trial;
  cfg.threads = o.threads;
  SuiteReport report = run_suite(cfg);
  write_text_file(o.out, dump(report.to_json()));
  std::cerr << "latw verify " << o.suite << ": " << (report.passed() ? "PASS" : "FAIL") << " (" << report.trials.size()
            << " trials, max deviation " << report.max_deviation() << ")\n";
  return report.passed() ? 0 : kFailure;
}

template <class Fn>
int with_mode(const Options& o, Fn&& fn) {
  ScalarMode mode;
  try {
    mode = parse_scalar_mode(o.mode);
  } catch (const std::exception& e) {
    throw ParseError(e.what());
  }
  Json out = mode == ScalarMode::rational ? fn(Rational{}) : fn(0.0);
  if (o.format == "csv") {
    if (!out.contains("pairs")) throw DomainError("--format csv is only available for bracket tables");
    write_text_file(o.out, pairs_csv(out));
  } else {
    write_text_file(o.out, dump(out));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice W_m-algebras: operator brackets, twisted polygons and discrete Drinfeld-Sokolov reduction"};
  app.require_subcommand(1);
  Options o;
  std::string mode_flag;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mode", mode_flag, "scalar mode: rational or f64")->check(CLI::IsMember({"rational", "f64"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
  };
  auto add_sizes = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "operator order / polygon dimension")->check(CLI::PositiveNumber);
    sub->add_option("--n", o.n, "period N")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "64-bit seed");
  };

  auto* bracket = app.add_subcommand("bracket", "coordinate bracket table of an operator or a cross-ratio chart");
  add_common(bracket);
  bracket->add_option("--in", o.in, "input JSON (default stdin)");
  bracket->add_option("--pair", o.pairs, "restrict to pairs j,t,j,t (repeatable)");
  bracket->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* verify = app.add_subcommand("verify", "run a randomized verification suite");
  add_common(verify);
  add_sizes(verify);
  std::string suites_help = "suite:";
  for (const auto& s : suite_names()) suites_help += " " + s;
  verify->add_option("--suite", o.suite, suites_help)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--tol", o.tol, "f64 tolerance (rational mode always demands exact 0)")->check(CLI::NonNegativeNumber);
  verify->add_option("--trials", o.trials, "number of trials")->check(CLI::NonNegativeNumber);
  verify->add_option("--first-trial", o.first_trial, "index of the first trial (replay)")->check(CLI::NonNegativeNumber);
  verify->add_option("--threads", o.threads, "worker threads (0: all cores)");

  auto* polygon = app.add_subcommand("polygon", "operator <-> polygon conversion with diagnostics");
  add_common(polygon);
  polygon->add_option("--in", o.in, "input JSON (default stdin)");

  auto* flow = app.add_subcommand("flow", "RK4 Hamiltonian flow on a cross-ratio chart, CSV trajectory");
  add_common(flow);
  flow->add_option("--in", o.in, "chart JSON (default stdin)");
  flow->add_option("--hamiltonian", o.hamiltonian, "const, sum or sum_log");
  flow->add_option("--dt", o.dt, "time step");
  flow->add_option("--steps", o.steps, "number of steps");

  auto* generate = app.add_subcommand("generate", "random operator, polygon, chart or matrix sequence");
  add_common(generate);
  add_sizes(generate);
  generate->add_option("--kind", o.kind, "operator, polygon, chart or matrices")
      ->check(CLI::IsMember({"operator", "polygon", "chart", "matrices"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (flow->parsed()) {
      o.mode = mode_flag.empty() ? "f64" : mode_flag;
      return flow_command(o);
    }
    o.mode = mode_flag.empty() ? "rational" : mode_flag;
    if (verify->parsed()) return verify_command(o);
    // without --mode, inputs are read in the mode they were written in
    auto input_mode = [&](const Json& j) {
      if (mode_flag.empty() && j.is_object() && j.contains("scalar_mode") && j["scalar_mode"].is_string())
        o.mode = j["scalar_mode"].get<std::string>();
    };
    if (bracket->parsed()) {
      Json input = read_json_file(o.in);
      input_mode(input);
      return with_mode(o, [&](auto tag) { return bracket_command<decltype(tag)>(input, o); });
    }
    if (polygon->parsed()) {
      Json input = read_json_file(o.in);
      input_mode(input);
      return with_mode(o, [&](auto tag) { return polygon_command<decltype(tag)>(input); });
    }
    if (generate->parsed()) return with_mode(o, [&](auto tag) { return generate_command<decltype(tag)>(o); });
  } catch (const ParseError& e) {
    std::cerr << "latw: parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PeriodMismatch& e) {
    std::cerr << "latw: invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "latw: invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "latw: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
