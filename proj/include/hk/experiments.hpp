#pragma once

// Convergence-time sweeps over random social networks and small
// constructed instances illustrating qualitative behaviour.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/core.hpp"
#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/parallel.hpp"
#include "hk/random.hpp"

namespace hk {

enum class GraphModel { gnp, ba };

inline GraphModel parse_graph_model(const std::string& s) {
  if (s == "gnp") return GraphModel::gnp;
  if (s == "ba") return GraphModel::ba;
  throw std::invalid_argument("unknown graph model '" + s + "' (expected gnp or ba)");
}

inline const char* to_string(GraphModel g) { return g == GraphModel::gnp ? "gnp" : "ba"; }

struct SweepSpec {
  std::vector<std::size_t> n_list;
  std::vector<double> grid;  // edge probabilities p (gnp) or attachment counts m (ba)
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<std::pair<double, double>> init_range;  // default: uniform in [1, n]
  double threshold = 1e-6;
  std::size_t max_steps = 100000;
  GraphModel graph_model = GraphModel::gnp;
  double work_budget = 1e12;  // estimated agent-pair evaluations allowed without force
  bool force = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const {
    if (n_list.empty() || grid.empty()) throw std::invalid_argument("sweep grids must be non-empty");
    if (trials < 1) throw std::invalid_argument("a sweep needs at least one trial per cell");
    if (init_range && !(init_range->first < init_range->second))
      throw std::invalid_argument("initial range needs lo < hi");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    for (std::size_t n : n_list)
      if (n < 1) throw std::invalid_argument("every n must be at least 1");
    for (double v : grid) {
      if (graph_model == GraphModel::gnp && !(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("edge probabilities must lie in [0, 1]");
      if (graph_model == GraphModel::ba && (v < 1.0 || v != std::floor(v)))
        throw std::invalid_argument("attachment counts must be positive integers");
      if (graph_model == GraphModel::ba)
        for (std::size_t n : n_list)
          if (v >= static_cast<double>(n))
            throw std::invalid_argument("attachment count " + std::to_string(static_cast<std::size_t>(v)) +
                                        " needs more than that many agents (n=" + std::to_string(n) + ")");
    }
  }

  /// Rough cost: n^2 pair evaluations per step, 1000 steps per run.
  double estimated_work() const {
    double w = 0.0;
    for (std::size_t n : n_list) w += static_cast<double>(n) * static_cast<double>(n) * 1000.0;
    return w * static_cast<double>(grid.size()) * static_cast<double>(trials);
  }
};

struct SweepRow {
  std::size_t n = 0;
  double value = 0.0;  // p or m
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t convergence_time = 0;  // max_steps when capped
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // canonical order: n, then grid value, then trial
};

/// Seed of one sweep cell; the grid value enters through its bit pattern.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t n, double value, std::size_t trial) {
  return derive_seed(master, n, std::bit_cast<std::uint64_t>(value), trial);
}

/// Social HK on a fixed network from x0 until the total movement of one step
/// drops below `threshold`; returns that step, or nullopt after max_steps.
inline std::optional<std::size_t> social_convergence_time(Configuration x, const SocialGraph& g, double threshold,
                                                          std::size_t max_steps) {
  for (std::size_t t = 0; t < max_steps; ++t) {
    Configuration next = step_social(x, g);
    if (total_movement(x, next) < threshold) return t;
    x = std::move(next);
  }
  return std::nullopt;
}

inline SweepRow run_cell(const SweepSpec& spec, std::size_t n, double value, std::size_t trial) {
  SweepRow row{n, value, trial, cell_seed(spec.master_seed, n, value, trial), 0, false};
  const SocialGraph g = spec.graph_model == GraphModel::gnp
                            ? gnp(n, value, derive_seed(row.seed, 1))
                            : barabasi_albert(n, static_cast<std::size_t>(value), derive_seed(row.seed, 1));
  const auto [lo, hi] = spec.init_range.value_or(std::pair{1.0, static_cast<double>(n)});
  Rng rng(derive_seed(row.seed, 2));
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.uniform(lo, hi);
  const auto t = social_convergence_time(Configuration::line(std::move(xs)), g, spec.threshold, spec.max_steps);
  row.converged = t.has_value();
  row.convergence_time = t.value_or(spec.max_steps);
  return row;
}

inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (!spec.force && spec.estimated_work() > spec.work_budget)
    throw std::runtime_error("estimated sweep work " + std::to_string(spec.estimated_work()) +
                             " exceeds the budget of " + std::to_string(spec.work_budget) + "; pass force to run it");
  struct Cell {
    std::size_t n;
    double value;
    std::size_t trial;
  };
  std::vector<Cell> cells;
  for (std::size_t n : spec.n_list)
    for (double v : spec.grid)
      for (std::size_t k = 0; k < spec.trials; ++k) cells.push_back({n, v, k});
  SweepResult result;
  result.rows.resize(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t k) {
    result.rows[k] = run_cell(spec, cells[k].n, cells[k].value, cells[k].trial);
  });
  return result;
}

struct CellStats {
  std::size_t n = 0;
  double value = 0.0;
  double mean_time = 0.0;
  double std_time = 0.0;  // population standard deviation
  std::size_t num_converged = 0;
  std::size_t num_capped = 0;
};

/// Per-(n, value) statistics in order of first appearance. Capped runs count
/// at their max_steps time and are tallied separately.
inline std::vector<CellStats> aggregate(const SweepResult& result) {
  if (result.rows.empty()) throw std::invalid_argument("cannot aggregate an empty sweep");
  std::vector<CellStats> out;
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> slot;
  std::vector<std::vector<double>> samples;
  for (const auto& row : result.rows) {
    const auto key = std::pair{row.n, std::bit_cast<std::uint64_t>(row.value)};
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({row.n, row.value});
      samples.emplace_back();
    }
    CellStats& c = out[it->second];
    samples[it->second].push_back(static_cast<double>(row.convergence_time));
    (row.converged ? c.num_converged : c.num_capped)++;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& s = samples[k];
    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (double v : s) var += (v - mean) * (v - mean);
    out[k].mean_time = mean;
    out[k].std_time = std::sqrt(var / static_cast<double>(s.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Demonstration instances.

enum class DemoKind { nofrz, initdep, noorder, nondet };

inline DemoKind parse_demo_kind(const std::string& s) {
  if (s == "nofrz") return DemoKind::nofrz;
  if (s == "initdep") return DemoKind::initdep;
  if (s == "noorder") return DemoKind::noorder;
  if (s == "nondet") return DemoKind::nondet;
  throw std::invalid_argument("unknown demo '" + s + "' (expected nofrz, initdep, noorder or nondet)");
}

struct Demo {
  DemoKind kind = DemoKind::nofrz;
  Model model = Model::social;
  Configuration x0;
  std::optional<SocialGraph> graph;
  std::optional<NoiseSource> noise;
  std::string narrative;
};

/// Three agents on a path, symmetric about 0: the outer gaps halve forever,
/// so the system converges without ever reaching a fixed point.
inline Demo demo_nofrz() {
  return {DemoKind::nofrz, Model::social, Configuration::line({-0.5, 0.0, 0.5}), named_graph(NamedGraph::path, 3),
          std::nullopt,
          "path 1-2-3 at (-0.5, 0, 0.5): agent 2 stays at 0 while agents 1 and 3 halve their distance to it every "
          "step; total movement at step t is 2^-(t+1) and never reaches 0"};
}

/// Agents 1..3 at (0, 1, 2) on a path and agent 4 at 2 - delta linked only to
/// agent 1. Agent 1 approaches 1 as 1 - 2^-t, so it first sees agent 4 once
/// 2^-t <= delta, after about log2(1/delta) steps.
inline Demo demo_initdep(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("initdep needs 0 < delta < 1");
  SocialGraph g = named_graph(NamedGraph::path, 4);
  g.remove_edge(2, 3);
  g.add_edge(0, 3);
  return {DemoKind::initdep, Model::social, Configuration::line({0.0, 1.0, 2.0, 2.0 - delta}), std::move(g),
          std::nullopt,
          "agent 1 starts at 0 and creeps towards 1 along the path 1-2-3; agent 4 waits at 2-delta with a single "
          "edge to agent 1, which only comes within range after about log2(1/delta) steps"};
}

/// First step t at which agents i and j interact, within max_steps.
inline std::optional<std::size_t> first_contact(const Demo& demo, std::size_t i, std::size_t j, std::size_t max_steps) {
  Configuration x = demo.x0;
  for (std::size_t t = 0; t <= max_steps; ++t) {
    if (demo.graph->has_edge(i, j) && x.within_confidence(i, j)) return t;
    x = step_social(x, *demo.graph);
  }
  return std::nullopt;
}

struct OrderSwap {
  std::size_t left = 0;   // x0(left) < x0(right) ...
  std::size_t right = 0;  // ... but x1(left) > x1(right)
};

/// First strict order swap between x0 and x1 in a one-dimensional instance.
inline std::optional<OrderSwap> find_order_swap(const Configuration& x0, const Configuration& x1) {
  for (std::size_t i = 0; i < x0.size(); ++i)
    for (std::size_t j = 0; j < x0.size(); ++j)
      if (x0.x(i) < x0.x(j) && x1.x(i) > x1.x(j)) return OrderSwap{i, j};
  return std::nullopt;
}

/// Brute-force search over 3..5 agents at distinct increasing positions on the
/// grid {0, 0.25, ..., 2} and every social graph on them, returning the first
/// instance whose social step strictly swaps two agents.
inline Demo demo_noorder() {
  constexpr std::size_t grid_points = 9;
  for (std::size_t n = 3; n <= 5; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (;;) {
      std::vector<double> xs(n);
      for (std::size_t k = 0; k < n; ++k) xs[k] = 0.25 * static_cast<double>(pick[k]);
      const Configuration x0 = Configuration::line(xs);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
        SocialGraph g(n);
        std::size_t bit = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j, ++bit)
            if ((mask >> bit) & 1U) g.add_edge(i, j);
        if (auto swap = find_order_swap(x0, step_social(x0, g))) {
          return {DemoKind::noorder, Model::social, x0, std::move(g), std::nullopt,
                  "one social step moves agent " + std::to_string(swap->left + 1) + " past agent " +
                      std::to_string(swap->right + 1) + "; classical HK never reorders agents"};
        }
      }
      // next increasing combination of grid indices
      std::size_t k = n;
      while (k > 0 && pick[k - 1] == grid_points - n + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t m = k; m < n; ++m) pick[m] = pick[m - 1] + 1;
    }
  }
  throw std::runtime_error("no order-swapping instance found on the search grid");
}

/// Two agents at (0, 0.9) with eps_{1,0} = eps_{2,0} = eps: both overshoot the
/// common mean and cross in one step.
inline Demo demo_nondet(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("nondet needs 0 < eps <= 1");
  std::map<NoiseSource::Key, double> table{{{0, 0, NoiseSource::kNoPair}, eps}, {{0, 1, NoiseSource::kNoPair}, eps}};
  return {DemoKind::nondet, Model::nd, Configuration::line({0.0, 0.9}), std::nullopt,
          NoiseSource::schedule(eps, NoiseMode::per_agent, std::move(table)),
          "both agents move (1+eps) times the way to their common mean 0.45 and end up in swapped order"};
}

inline Demo make_demo(DemoKind kind, double param) {
  switch (kind) {
    case DemoKind::nofrz: return demo_nofrz();
    case DemoKind::initdep: return demo_initdep(param);
    case DemoKind::noorder: return demo_noorder();
    case DemoKind::nondet: return demo_nondet(param);
  }
  throw std::logic_error("unhandled demo kind");
}

/// Runs a demo under the given stop rule.
inline Trajectory run_demo(const Demo& demo, const StopRule& stop) {
  RunSetup setup;
  setup.model = demo.model;
  if (demo.graph) setup.schedule = GraphSchedule::fixed(*demo.graph);
  if (demo.noise) setup.noise = demo.noise;
  setup.stop = stop;
  return run(demo.x0, setup);
}

}  // namespace hk
