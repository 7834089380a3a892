#pragma once

// Trajectory diagnostics: non-trivial step accounting, convergence detection,
// per-step reports and runtime checks of the convergence lemmas for
// non-deterministic dynamics.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hk/core.hpp"
#include "hk/dynamics.hpp"
#include "hk/nd_sets.hpp"
#include "hk/spectral.hpp"

namespace hk {

/// A step is eps-non-trivial when some interacting pair i != j is at distance >= eps.
inline bool is_nontrivial(const Configuration& x, const SocialGraph* g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  detail::require_same_size(x, g);
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool found = false;
    detail::for_each_neighbor(x, g, i, [&](std::size_t j) { found = found || (j > i && x.distance(i, j) >= eps); });
    if (found) return true;
  }
  return false;
}

inline bool is_nontrivial(const Configuration& x, double eps) { return is_nontrivial(x, nullptr, eps); }
inline bool is_nontrivial(const Configuration& x, const SocialGraph& g, double eps) { return is_nontrivial(x, &g, eps); }

/// Number of states x_t in the trajectory that are eps-non-trivial under the
/// network in force at t.
inline std::size_t count_nontrivial(const Trajectory& traj, double eps) {
  std::size_t count = 0;
  for (std::size_t t = 0; t < traj.states.size(); ++t)
    if (is_nontrivial(traj.states[t], traj.graph_at(t), eps)) ++count;
  return count;
}

/// Least t whose step x_t -> x_{t+1} moves the agents less than `threshold` in total.
inline std::optional<std::size_t> detect_convergence(const Trajectory& traj, double threshold = 1e-6) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  for (std::size_t t = 0; t + 1 < traj.states.size(); ++t)
    if (total_movement(traj.states[t], traj.states[t + 1]) < threshold) return t;
  return std::nullopt;
}

struct ReportOptions {
  bool spectral = false;
  std::size_t spectral_limit = 2000;  // largest n for dense eigenvalue work
  bool override_limit = false;
  double nontrivial_eps = 1e-2;
  bool partitions = true;  // L/S/T/M per step for nd models
};

/// Fills traj.reports with one StepReport per step t = 0 .. T-1.
inline void attach_reports(Trajectory& traj, const ReportOptions& opt = {}) {
  const std::size_t steps = traj.steps();
  const bool nd = traj.model == Model::nd || traj.model == Model::nd_pairwise;
  if (opt.spectral && !traj.states.empty() && traj.states.front().size() > opt.spectral_limit && !opt.override_limit)
    throw std::invalid_argument("spectral diagnostics requested for n=" + std::to_string(traj.states.front().size()) +
                                " above the limit of " + std::to_string(opt.spectral_limit) +
                                " (override to force)");
  traj.reports.clear();
  traj.reports.reserve(steps);
  std::optional<CommunicationGraph> prev_cg;
  double prev_lambda = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const Configuration& x = traj.states[t];
    StepReport r;
    r.t = t;
    r.total_movement = total_movement(x, traj.states[t + 1]);
    r.nontrivial = is_nontrivial(x, traj.graph_at(t), opt.nontrivial_eps);
    if (opt.spectral) {
      CommunicationGraph cg = communication_graph(x, traj.graph_at(t));
      SpectralReport s;
      const EnergyParts e = energy_parts(x, cg);
      s.energy = e.total();
      s.active_energy = e.active;
      // The averaging matrix, and with it lambda, only changes with the graph.
      s.lambda = (prev_cg && *prev_cg == cg) ? prev_lambda : second_eigenvalue(cg);
      s.diameter = hop_diameter(cg);
      s.gap_bound = gap_bound(cg.size(), s.diameter);
      s.component_count = components(cg).size();
      r.decrement = s.energy - energy(traj.states[t + 1], traj.graph_at(t + 1));
      r.guaranteed_decrement = (1.0 - s.lambda * s.lambda) * s.active_energy;
      prev_lambda = s.lambda;
      prev_cg = std::move(cg);
      r.spectral = s;
    }
    if (nd && opt.partitions) r.partition = nd_partition(x);
    traj.reports.push_back(std::move(r));
  }
}

enum class NdCase { S1, S2, S3 };

inline const char* to_string(NdCase c) {
  switch (c) {
    case NdCase::S1: return "S1";
    case NdCase::S2: return "S2";
    case NdCase::S3: return "S3";
  }
  return "?";
}

inline constexpr double kLemmaTolerance = 1e-12;

struct LemmaViolation {
  std::size_t t = 0;
  std::string check;
  double margin = 0.0;  // negative: by how much the inequality failed
};

struct LemmaCheckStats {
  bool applied = false;
  std::size_t evaluations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

/// Outcome of the lemma checks over one trajectory. Check names:
///   "a" extremes: min position non-decreasing, max non-increasing (eps < 1/(n-1));
///   "b" every i in M(t) has x_{t+1}(i) >= x_t(l) + 1/n - eps;
///   "c" every separated subsystem with S(t) empty contracts: delta_{t+1} <= 2 eps delta_t (eps < 1/(n-1));
///   "d" one of S1: S(t+1) empty, S2: |L(t+1)| < |L(t)|, S3: M(t) meets N_{t+1}(l) holds,
///       and S2-only steps never run longer than n in a row;
///   "e" after an S3 step every agent at t+2 is >= x_t(l) + 1/(4n^2) (eps < 1/(4n^2)).
struct LemmaReport {
  std::vector<std::optional<NdCase>> cases;  // cases[t] for t = 0 .. T-1
  std::vector<LemmaViolation> violations;
  std::map<std::string, LemmaCheckStats> stats;
  std::size_t longest_s2_run = 0;

  bool ok() const { return violations.empty(); }

  std::vector<std::string> checked() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : stats)
      if (s.applied) out.push_back(name);
    return out;
  }

  std::vector<std::string> skipped() const {
    std::vector<std::string> out;
    for (const auto& [name, s] : stats)
      if (!s.applied) out.push_back(name);
    return out;
  }

  std::array<std::size_t, 3> histogram() const {
    std::array<std::size_t, 3> h{};
    for (const auto& c : cases)
      if (c) ++h[static_cast<std::size_t>(*c)];
    return h;
  }
};

namespace detail {

inline double min_position(const Configuration& x) {
  double m = x.x(0);
  for (std::size_t i = 1; i < x.size(); ++i) m = std::min(m, x.x(i));
  return m;
}

inline double max_position(const Configuration& x) {
  double m = x.x(0);
  for (std::size_t i = 1; i < x.size(); ++i) m = std::max(m, x.x(i));
  return m;
}

inline double spread(const Configuration& x, std::span<const std::size_t> members) {
  double lo = x.x(members.front()), hi = lo;
  for (std::size_t i : members) {
    lo = std::min(lo, x.x(i));
    hi = std::max(hi, x.x(i));
  }
  return hi - lo;
}

}  // namespace detail

/// Checks the non-deterministic convergence lemmas along a trajectory produced
/// with noise bounded by eps. A check whose eps precondition fails is skipped
/// (stats[name].applied == false), not failed.
inline LemmaReport check_nd_lemmas(const Trajectory& traj, double eps) {
  if (traj.model != Model::nd && traj.model != Model::nd_pairwise)
    throw std::invalid_argument("lemma checks need a non-deterministic trajectory");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be non-negative");
  if (traj.noise_bound && *traj.noise_bound > eps)
    throw std::invalid_argument("trajectory noise bound " + std::to_string(*traj.noise_bound) +
                                " exceeds the eps given to the checks");
  if (traj.states.empty()) throw std::invalid_argument("empty trajectory");

  LemmaReport rep;
  const std::size_t n = traj.states.front().size();
  const double nn = static_cast<double>(n);
  const bool extremes_ok = n < 2 || eps < 1.0 / (nn - 1.0);
  const bool s3_ok = eps < 1.0 / (4.0 * nn * nn);
  rep.stats["a"].applied = extremes_ok;
  rep.stats["b"].applied = true;
  rep.stats["c"].applied = extremes_ok;
  rep.stats["d"].applied = true;
  rep.stats["e"].applied = s3_ok;

  auto record = [&](const char* name, std::size_t t, double margin) {
    auto& s = rep.stats[name];
    ++s.evaluations;
    s.worst_margin = std::min(s.worst_margin, margin);
    if (margin < -kLemmaTolerance) rep.violations.push_back({t, name, margin});
  };

  const std::size_t steps = traj.steps();
  std::vector<NeighborTable> tables;
  std::vector<NdPartition> parts;
  tables.reserve(traj.states.size());
  parts.reserve(traj.states.size());
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (const auto& x : traj.states) {
    tables.emplace_back(x);
    parts.push_back(nd_partition(x, tables.back(), all));
  }

  std::size_t s2_run = 0;
  rep.cases.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const Configuration& x = traj.states[t];
    const Configuration& y = traj.states[t + 1];
    const NdPartition& p = parts[t];
    const NdPartition& q = parts[t + 1];
    const double left = x.x(p.leftmost);

    if (extremes_ok) {
      record("a", t, std::min(detail::min_position(y) - left, x.x(p.rightmost) - detail::max_position(y)));
    }

    const double floor_b = left + 1.0 / nn - eps;
    for (std::size_t i : p.M) record("b", t, y.x(i) - floor_b);

    if (extremes_ok) {
      for (const auto& group : clusters(x, 0.0).groups) {
        const NdPartition sub = nd_partition(x, tables[t], group);
        if (!sub.S.empty()) continue;
        record("c", t, 2.0 * eps * detail::spread(x, group) - detail::spread(y, group));
      }
    }

    std::optional<NdCase> tag;
    const bool s3 = tables[t + 1].intersects(q.leftmost, p.M);
    if (q.S.empty()) {
      tag = NdCase::S1;
    } else if (s3) {
      tag = NdCase::S3;
    } else if (q.L.size() < p.L.size()) {
      tag = NdCase::S2;
    }
    rep.cases.push_back(tag);
    record("d", t, tag ? 0.0 : -1.0);
    s2_run = tag == NdCase::S2 ? s2_run + 1 : 0;
    rep.longest_s2_run = std::max(rep.longest_s2_run, s2_run);
    if (s2_run > n) record("d", t, -static_cast<double>(s2_run - n));

    if (s3_ok && s3 && t + 2 <= steps) {
      const double floor_e = left + 1.0 / (4.0 * nn * nn);
      record("e", t, detail::min_position(traj.states[t + 2]) - floor_e);
    }
  }
  return rep;
}

}  // namespace hk
