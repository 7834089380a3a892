#pragma once

// File formats and command-line spec strings.
//
//   configuration  {"dimension": d, "confidence": r, "positions": [[..], ..]}
//                  or, in one dimension, "positions": [x1, x2, ...]
//   graph          {"n": n, "edges": [[i, j], ...]}             (1-based agents)
//   schedule       {"n": n, "friendly": bool, "graphs": [{"edges": [...]}, ...]}
//   noise          {"eps": e, "mode": "per-agent" | "per-pair",
//                   "values": {"t,i": v, "t,i,j": v, ...}}      (t from 0, agents 1-based)
//   sweep spec     {"n_list": [...], "p_grid": [...] | "m_list": [...], "trials": k,
//                   "master_seed": s, "init": {"lo": a, "hi": b}, "threshold": h,
//                   "max_steps": m, "graph_model": "gnp" | "ba"}
//   trajectory     JSONL, one {"t": t, "positions": [...]} per state
//   CSV            sweep rows, sweep aggregates and step reports (headers below)

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "hk/core.hpp"
#include "hk/diagnostics.hpp"
#include "hk/dynamics.hpp"
#include "hk/experiments.hpp"
#include "hk/graphs.hpp"
#include "hk/random.hpp"
#include "hk/suites.hpp"

namespace hk::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  return out;
}

template <class T>
T field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw FormatError(what + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(what + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

// ---------------------------------------------------------------------------
// Configurations

inline Configuration configuration_from_json(const json& j) {
  const std::string what = "configuration";
  if (!j.is_object()) throw FormatError(what + ": expected a JSON object");
  const double r = j.contains("confidence") ? field<double>(j, "confidence", what) : 1.0;
  if (!j.contains("positions")) throw FormatError(what + ": missing field 'positions'");
  const json& pos = j.at("positions");
  if (!pos.is_array() || pos.empty()) throw FormatError(what + ": 'positions' must be a non-empty array");
  std::vector<std::vector<double>> points;
  try {
    if (pos.front().is_number()) {
      for (const auto& v : pos) points.push_back({v.get<double>()});
    } else {
      for (const auto& p : pos) points.push_back(p.get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    throw FormatError(what + ": positions must be numbers or arrays of numbers (" + e.what() + ")");
  }
  if (j.contains("dimension")) {
    const auto d = field<std::size_t>(j, "dimension", what);
    for (const auto& p : points)
      if (p.size() != d) throw FormatError(what + ": a position does not have " + std::to_string(d) + " coordinates");
  }
  try {
    return Configuration(points, r);
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
}

inline json positions_to_json(const Configuration& x) {
  json pos = json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.dimension() == 1) {
      pos.push_back(x.x(i));
    } else {
      const auto p = x.position(i);
      pos.push_back(std::vector<double>(p.begin(), p.end()));
    }
  }
  return pos;
}

inline json configuration_to_json(const Configuration& x) {
  return {{"dimension", x.dimension()}, {"confidence", x.confidence()}, {"positions", positions_to_json(x)}};
}

inline Configuration read_configuration(const std::string& path) { return configuration_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Graphs

inline SocialGraph edges_from_json(std::size_t n, const json& edges, const std::string& what) {
  if (!edges.is_array()) throw FormatError(what + ": 'edges' must be an array");
  SocialGraph g(n);
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw FormatError(what + ": every edge must be a pair of integers");
    const auto i = e[0].get<long long>(), j = e[1].get<long long>();
    if (i < 1 || j < 1 || i > static_cast<long long>(n) || j > static_cast<long long>(n))
      throw FormatError(what + ": edge [" + std::to_string(i) + "," + std::to_string(j) + "] outside 1.." +
                        std::to_string(n));
    if (i == j) throw FormatError(what + ": self-pair [" + std::to_string(i) + "," + std::to_string(j) + "]");
    g.add_edge(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
  }
  return g;
}

inline SocialGraph graph_from_json(const json& j) {
  const std::string what = "graph";
  return edges_from_json(field<std::size_t>(j, "n", what), j.contains("edges") ? j.at("edges") : json::array(), what);
}

inline json graph_to_json(const SocialGraph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i + 1, j + 1});
  return {{"n", g.size()}, {"edges", edges}};
}

inline SocialGraph read_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

inline std::pair<std::string, std::string> split_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw FormatError("spec '" + spec + "' must look like kind:args");
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(part);
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw FormatError(what + ": '" + s + "' is not a valid number");
  return v;
}

/// gnp:n,p  ba:n,m  complete:n  path:n  empty:n  file:<path>
inline SocialGraph parse_graph_spec(const std::string& spec, std::uint64_t seed) {
  const auto [kind, args] = split_spec(spec);
  if (kind == "file") return read_graph(args);
  const auto parts = split_commas(args);
  const std::string what = "graph spec '" + spec + "'";
  if (kind == "gnp" || kind == "ba") {
    if (parts.size() != 2) throw FormatError(what + ": expected " + kind + ":n," + (kind == "gnp" ? "p" : "m"));
    const auto n = parse_number<std::size_t>(parts[0], what);
    try {
      if (kind == "gnp") return gnp(n, parse_number<double>(parts[1], what), seed);
      return barabasi_albert(n, parse_number<std::size_t>(parts[1], what), seed);
    } catch (const std::invalid_argument& e) {
      throw FormatError(what + ": " + e.what());
    }
  }
  if (parts.size() != 1) throw FormatError(what + ": expected " + kind + ":n");
  try {
    return named_graph(kind, parse_number<std::size_t>(parts[0], what));
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
}

/// file:<path>  uniform:<n>,<lo>,<hi>,<seed>  (one-dimensional, confidence 1)
inline Configuration parse_init_spec(const std::string& spec) {
  const auto [kind, args] = split_spec(spec);
  if (kind == "file") return read_configuration(args);
  if (kind != "uniform") throw FormatError("init spec '" + spec + "': expected file:<path> or uniform:n,lo,hi,seed");
  const auto parts = split_commas(args);
  const std::string what = "init spec '" + spec + "'";
  if (parts.size() != 4) throw FormatError(what + ": expected uniform:n,lo,hi,seed");
  const auto n = parse_number<std::size_t>(parts[0], what);
  const auto lo = parse_number<double>(parts[1], what);
  const auto hi = parse_number<double>(parts[2], what);
  const auto seed = parse_number<std::uint64_t>(parts[3], what);
  if (n < 1 || !(lo < hi)) throw FormatError(what + ": need n >= 1 and lo < hi");
  Rng rng(seed);
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.uniform(lo, hi);
  return Configuration::line(std::move(xs));
}

inline GraphSchedule schedule_from_json(const json& j) {
  const std::string what = "schedule";
  const auto n = field<std::size_t>(j, "n", what);
  const bool friendly = j.contains("friendly") ? field<bool>(j, "friendly", what) : false;
  if (!j.contains("graphs") || !j.at("graphs").is_array() || j.at("graphs").empty())
    throw FormatError(what + ": 'graphs' must be a non-empty array");
  std::vector<SocialGraph> graphs;
  for (const auto& g : j.at("graphs"))
    graphs.push_back(edges_from_json(n, g.contains("edges") ? g.at("edges") : json::array(), what));
  return GraphSchedule::sequence(std::move(graphs), friendly);
}

inline GraphSchedule read_schedule(const std::string& path) { return schedule_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Noise

inline NoiseSource noise_from_json(const json& j) {
  const std::string what = "noise schedule";
  const auto eps = field<double>(j, "eps", what);
  const auto mode_name = j.contains("mode") ? field<std::string>(j, "mode", what) : std::string("per-agent");
  NoiseMode mode;
  if (mode_name == "per-agent") {
    mode = NoiseMode::per_agent;
  } else if (mode_name == "per-pair") {
    mode = NoiseMode::per_pair;
  } else {
    throw FormatError(what + ": mode must be per-agent or per-pair");
  }
  std::map<NoiseSource::Key, double> table;
  if (j.contains("values")) {
    if (!j.at("values").is_object()) throw FormatError(what + ": 'values' must be an object");
    for (const auto& [key, value] : j.at("values").items()) {
      const auto parts = split_commas(key);
      const std::size_t want = mode == NoiseMode::per_agent ? 2 : 3;
      if (parts.size() != want)
        throw FormatError(what + ": key '" + key + "' must be " + (want == 2 ? "\"t,i\"" : "\"t,i,j\""));
      if (!value.is_number()) throw FormatError(what + ": value for '" + key + "' is not a number");
      const auto t = parse_number<std::size_t>(parts[0], what);
      const auto i = parse_number<std::size_t>(parts[1], what);
      const auto jj = want == 3 ? parse_number<std::size_t>(parts[2], what) : std::size_t{1};
      if (i < 1 || jj < 1) throw FormatError(what + ": agents are numbered from 1 in key '" + key + "'");
      table[{t, i - 1, want == 3 ? jj - 1 : NoiseSource::kNoPair}] = value.get<double>();
    }
  }
  try {
    return NoiseSource::schedule(eps, mode, std::move(table));
  } catch (const std::exception& e) {
    throw FormatError(what + ": " + e.what());
  }
}

inline NoiseSource read_noise(const std::string& path) { return noise_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Sweeps

inline SweepSpec sweep_spec_from_json(const json& j) {
  const std::string what = "sweep spec";
  SweepSpec s;
  s.n_list = field<std::vector<std::size_t>>(j, "n_list", what);
  s.graph_model = parse_graph_model(j.contains("graph_model") ? field<std::string>(j, "graph_model", what) : "gnp");
  if (j.contains("p_grid")) {
    s.grid = field<std::vector<double>>(j, "p_grid", what);
  } else if (j.contains("m_list")) {
    s.grid = field<std::vector<double>>(j, "m_list", what);
  } else {
    throw FormatError(what + ": needs 'p_grid' or 'm_list'");
  }
  if (j.contains("trials")) s.trials = field<std::size_t>(j, "trials", what);
  if (j.contains("master_seed")) s.master_seed = field<std::uint64_t>(j, "master_seed", what);
  if (j.contains("init")) {
    const json& init = j.at("init");
    s.init_range = std::pair{field<double>(init, "lo", what), field<double>(init, "hi", what)};
  }
  if (j.contains("threshold")) s.threshold = field<double>(j, "threshold", what);
  if (j.contains("max_steps")) s.max_steps = field<std::size_t>(j, "max_steps", what);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
  return s;
}

inline constexpr const char* kSweepHeader = "n,p,trial,seed,convergence_time,converged";
inline constexpr const char* kAggregateHeader = "n,p,mean_time,std_time,num_converged,num_capped";
inline constexpr const char* kReportHeader =
    "t,energy,active_energy,lambda,gap_bound,decrement,guaranteed_decrement,total_movement,diameter,components";
inline constexpr const char* kPlainReportHeader = "t,total_movement,nontrivial";

inline void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << kSweepHeader << '\n';
  for (const auto& row : r.rows)
    out << row.n << ',' << format_double(row.value) << ',' << row.trial << ',' << row.seed << ','
        << row.convergence_time << ',' << (row.converged ? 1 : 0) << '\n';
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<CellStats>& stats) {
  out << kAggregateHeader << '\n';
  for (const auto& c : stats)
    out << c.n << ',' << format_double(c.value) << ',' << format_double(c.mean_time) << ','
        << format_double(c.std_time) << ',' << c.num_converged << ',' << c.num_capped << '\n';
}

/// Spectral columns when the reports carry them, otherwise movement and flags only.
inline void write_report_csv(std::ostream& out, const Trajectory& traj) {
  const bool spectral = !traj.reports.empty() && traj.reports.front().spectral.has_value();
  out << (spectral ? kReportHeader : kPlainReportHeader) << '\n';
  for (const auto& r : traj.reports) {
    if (!spectral) {
      out << r.t << ',' << format_double(r.total_movement) << ',' << (r.nontrivial ? 1 : 0) << '\n';
      continue;
    }
    const auto& s = *r.spectral;
    out << r.t << ',' << format_double(s.energy) << ',' << format_double(s.active_energy) << ','
        << format_double(s.lambda) << ',' << format_double(s.gap_bound) << ',' << format_double(r.decrement) << ','
        << format_double(r.guaranteed_decrement) << ',' << format_double(r.total_movement) << ',' << s.diameter
        << ',' << s.component_count << '\n';
  }
}

inline void write_trajectory_jsonl(std::ostream& out, const Trajectory& traj) {
  for (std::size_t t = 0; t < traj.states.size(); ++t)
    out << json{{"t", t}, {"positions", positions_to_json(traj.states[t])}}.dump() << '\n';
}

/// JSON summary of a check suite.
inline json suite_summary_json(const SuiteResult& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"trial", v.trial}, {"t", v.t}, {"check", v.check}, {"margin", v.margin}});
  json out = {{"suite", to_string(r.suite)},
              {"trials", r.trials},
              {"evaluations", r.evaluations},
              {"checked", r.checked},
              {"skipped", r.skipped},
              {"violations", violations}};
  if (r.suite == Suite::nd_lemmas)
    out["case_histogram"] = {{"S1", r.case_histogram[0]}, {"S2", r.case_histogram[1]}, {"S3", r.case_histogram[2]}};
  if (r.suite == Suite::nontrivial || r.suite == Suite::theorem2) out["worst_ratio"] = r.worst_ratio;
  return out;
}

}  // namespace hk::io
