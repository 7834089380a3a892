#pragma once

// Update rules (classical, social, non-deterministic per-agent and per-pair)
// and the trajectory runner.
//
// All rules are synchronous: the successor is computed from a frozen copy of
// the current configuration, and each agent's neighborhood mean is summed in
// ascending index order. Noise enters as an additive correction to that mean,
//   x'(i) = m(i) + eps_i * (m(i) - x(i))                    (per agent)
//   x'(i) = m(i) + sum_j eps_ij * (x(j) - x(i)) / |N(i)|    (per pair)
// which is algebraically the displacement form and makes zero noise
// reproduce the classical step bit for bit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/core.hpp"
#include "hk/graphs.hpp"
#include "hk/nd_sets.hpp"
#include "hk/random.hpp"
#include "hk/spectral.hpp"

namespace hk {

enum class Model { classical, social, nd, nd_pairwise };

inline const char* to_string(Model m) {
  switch (m) {
    case Model::classical: return "classical";
    case Model::social: return "social";
    case Model::nd: return "nd";
    case Model::nd_pairwise: return "nd-pairwise";
  }
  return "?";
}

inline Model parse_model(const std::string& s) {
  if (s == "classical") return Model::classical;
  if (s == "social") return Model::social;
  if (s == "nd") return Model::nd;
  if (s == "nd-pairwise") return Model::nd_pairwise;
  throw std::invalid_argument("unknown model '" + s + "' (expected classical, social, nd or nd-pairwise)");
}

enum class NoiseMode { per_agent, per_pair };

class NoiseOutOfRange : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bounded perturbations eps_{i,t} (per agent) or eps_{i,j,t} (per pair).
/// Values are addressed by (t, i[, j]) so they never depend on evaluation order.
class NoiseSource {
 public:
  /// Pair index is std::nullopt in per-agent mode. Receives the configuration at t.
  using Adversary =
      std::function<double(std::size_t t, std::size_t i, std::optional<std::size_t> j, const Configuration& x)>;
  /// Key (t, i, j); j == kNoPair in per-agent mode.
  using Key = std::array<std::size_t, 3>;
  static constexpr std::size_t kNoPair = static_cast<std::size_t>(-1);

  static NoiseSource zero(NoiseMode mode = NoiseMode::per_agent) { return NoiseSource(0.0, mode, Kind::zero); }

  /// Counter-based uniform values on the closed interval [-eps, eps].
  static NoiseSource uniform(double eps, std::uint64_t seed, NoiseMode mode = NoiseMode::per_agent) {
    NoiseSource s(eps, mode, Kind::uniform);
    s.seed_ = seed;
    return s;
  }

  /// Fixed table; missing entries are 0.
  static NoiseSource schedule(double eps, NoiseMode mode, std::map<Key, double> values) {
    NoiseSource s(eps, mode, Kind::schedule);
    for (const auto& [key, v] : values) s.check_range(v, key[0], key[1]);
    s.table_ = std::make_shared<const std::map<Key, double>>(std::move(values));
    return s;
  }

  /// Arbitrary state-dependent values; anything outside [-eps, eps] is rejected when drawn.
  static NoiseSource adversarial(double eps, NoiseMode mode, Adversary fn) {
    if (!fn) throw std::invalid_argument("adversarial noise needs a callback");
    NoiseSource s(eps, mode, Kind::adversarial);
    s.adversary_ = std::move(fn);
    return s;
  }

  double bound() const noexcept { return eps_; }
  NoiseMode mode() const noexcept { return mode_; }
  bool is_zero() const noexcept { return kind_ == Kind::zero; }

  double value(std::size_t t, std::size_t i, std::optional<std::size_t> j, const Configuration& x) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::uniform: {
        const std::uint64_t h = derive_seed(seed_, t, i, j ? *j + 1 : 0);
        return eps_ * (2.0 * unit_closed(h) - 1.0);
      }
      case Kind::schedule: {
        auto it = table_->find(Key{t, i, j.value_or(kNoPair)});
        return it == table_->end() ? 0.0 : it->second;
      }
      case Kind::adversarial: {
        const double v = adversary_(t, i, j, x);
        check_range(v, t, i);
        return v;
      }
    }
    return 0.0;
  }

 private:
  enum class Kind { zero, uniform, schedule, adversarial };

  NoiseSource(double eps, NoiseMode mode, Kind kind) : eps_(eps), mode_(mode), kind_(kind) {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("noise bound must be finite and >= 0");
  }

  void check_range(double v, std::size_t t, std::size_t i) const {
    if (!(v >= -eps_ && v <= eps_))
      throw NoiseOutOfRange("noise value " + std::to_string(v) + " at t=" + std::to_string(t) +
                            ", agent " + std::to_string(i) + " lies outside [-" + std::to_string(eps_) + ", " +
                            std::to_string(eps_) + "]");
  }

  double eps_ = 0.0;
  NoiseMode mode_ = NoiseMode::per_agent;
  Kind kind_ = Kind::zero;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const std::map<Key, double>> table_;
  Adversary adversary_;
};

namespace detail {

/// Neighborhood mean of agent i written into out[0..d).
inline std::size_t neighborhood_mean(const Configuration& x, const SocialGraph* g, std::size_t i, double* out) {
  const std::size_t d = x.dimension();
  std::fill(out, out + d, 0.0);
  std::size_t k = 0;
  for_each_neighbor(x, g, i, [&](std::size_t j) {
    const auto p = x.position(j);
    for (std::size_t c = 0; c < d; ++c) out[c] += p[c];
    ++k;
  });
  for (std::size_t c = 0; c < d; ++c) out[c] /= static_cast<double>(k);
  return k;
}

inline Configuration averaging_step(const Configuration& x, const SocialGraph* g) {
  require_same_size(x, g);
  const std::size_t d = x.dimension();
  std::vector<double> next(x.size() * d);
  for (std::size_t i = 0; i < x.size(); ++i) neighborhood_mean(x, g, i, next.data() + i * d);
  return x.with_coords(std::move(next));
}

inline void require_line(const Configuration& x) {
  if (x.dimension() != 1) throw std::invalid_argument("non-deterministic dynamics are defined for d = 1 only");
}

}  // namespace detail

inline Configuration step_classical(const Configuration& x) { return detail::averaging_step(x, nullptr); }

inline Configuration step_social(const Configuration& x, const SocialGraph& g) { return detail::averaging_step(x, &g); }

inline Configuration step_nd(const Configuration& x, const NoiseSource& noise, std::size_t t) {
  detail::require_line(x);
  if (noise.mode() != NoiseMode::per_agent) throw std::invalid_argument("step_nd needs per-agent noise");
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mean = 0.0;
    detail::neighborhood_mean(x, nullptr, i, &mean);
    const double eps = noise.value(t, i, std::nullopt, x);
    next[i] = mean + eps * (mean - x.x(i));
  }
  return x.with_coords(std::move(next));
}

inline Configuration step_nd_pairwise(const Configuration& x, const NoiseSource& noise, std::size_t t) {
  detail::require_line(x);
  if (noise.mode() != NoiseMode::per_pair) throw std::invalid_argument("step_nd_pairwise needs per-pair noise");
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mean = 0.0;
    const std::size_t k = detail::neighborhood_mean(x, nullptr, i, &mean);
    double correction = 0.0;
    detail::for_each_neighbor(x, nullptr, i, [&](std::size_t j) {
      if (j != i) correction += noise.value(t, i, j, x) * (x.x(j) - x.x(i));
    });
    next[i] = mean + correction / static_cast<double>(k);
  }
  return x.with_coords(std::move(next));
}

/// Per-step diagnostics attached to a trajectory (see diagnostics.hpp).
struct StepReport {
  std::size_t t = 0;
  double total_movement = 0.0;
  bool nontrivial = false;
  std::optional<SpectralReport> spectral;
  double decrement = 0.0;             // E(x_t) - E(x_{t+1}); set with spectral
  double guaranteed_decrement = 0.0;  // (1 - lambda_t^2) E_act(x_t); set with spectral
  std::optional<NdPartition> partition;
};

struct StopRule {
  std::size_t max_steps = 100000;
  std::optional<double> movement_threshold;
  std::optional<double> cluster_rho;
};

enum class StopReason { max_steps, fixed_point, movement, clustered };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::max_steps: return "max_steps";
    case StopReason::fixed_point: return "fixed_point";
    case StopReason::movement: return "movement";
    case StopReason::clustered: return "clustered";
  }
  return "?";
}

struct FriendlinessViolation {
  std::size_t t = 0;  // transition t -> t+1
  std::vector<SocialGraph::Edge> pairs;
};

class FriendlinessError : public std::runtime_error {
 public:
  FriendlinessError(FriendlinessViolation v, const std::string& what) : std::runtime_error(what), violation(std::move(v)) {}
  FriendlinessViolation violation;
};

struct Trajectory {
  Model model = Model::classical;
  std::vector<Configuration> states;                         // x_0 .. x_T
  std::vector<GraphSchedule::GraphPtr> graphs;               // social only: graphs[t] is G_t
  std::optional<double> noise_bound;                         // nd models only
  StopReason stop_reason = StopReason::max_steps;
  std::size_t stop_time = 0;                                 // t at which the stop rule fired
  std::vector<FriendlinessViolation> friendliness_violations;
  std::vector<StepReport> reports;                           // one per step, when attached

  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }

  const SocialGraph* graph_at(std::size_t t) const {
    if (graphs.empty()) return nullptr;
    return graphs[std::min(t, graphs.size() - 1)].get();
  }
};

struct RunSetup {
  Model model = Model::classical;
  std::optional<GraphSchedule> schedule;  // required for social
  std::optional<NoiseSource> noise;       // required for nd models
  StopRule stop;
  /// Record friendliness violations of a declared-friendly schedule instead of aborting.
  bool allow_unfriendly = false;
};

/// Iterates the chosen rule from x0. At each t the runner stops when, in order:
/// the configuration is clustered within cluster_rho (stop_time = t); t reached
/// max_steps; or, after appending x_{t+1}, the total movement fell below the
/// threshold or x_{t+1} == x_t exactly (stop_time = t in both cases).
inline Trajectory run(const Configuration& x0, const RunSetup& setup) {
  Trajectory traj;
  traj.model = setup.model;
  const bool social = setup.model == Model::social;
  const bool nd = setup.model == Model::nd || setup.model == Model::nd_pairwise;
  if (social && !setup.schedule) throw std::invalid_argument("the social model needs a graph schedule");
  if (!social && setup.schedule) throw std::invalid_argument("a graph schedule only applies to the social model");
  if (nd && !setup.noise) throw std::invalid_argument("non-deterministic models need a noise source");
  if (!nd && setup.noise) throw std::invalid_argument("noise only applies to non-deterministic models");
  if (nd) {
    detail::require_line(x0);
    const NoiseMode want = setup.model == Model::nd ? NoiseMode::per_agent : NoiseMode::per_pair;
    if (setup.noise->mode() != want && !setup.noise->is_zero())
      throw std::invalid_argument(std::string("model ") + to_string(setup.model) + " needs " +
                                  (want == NoiseMode::per_agent ? "per-agent" : "per-pair") + " noise");
    traj.noise_bound = setup.noise->bound();
  }
  if (social && setup.schedule->size() != x0.size())
    throw std::invalid_argument("schedule graphs do not match the number of agents");
  if (setup.stop.movement_threshold && !(*setup.stop.movement_threshold > 0.0))
    throw std::invalid_argument("movement threshold must be positive");

  // Zero noise in either mode drives the matching rule.
  std::optional<NoiseSource> noise = setup.noise;
  if (noise && noise->is_zero())
    noise = NoiseSource::zero(setup.model == Model::nd ? NoiseMode::per_agent : NoiseMode::per_pair);

  traj.states.push_back(x0);
  if (social) traj.graphs.push_back(setup.schedule->initial());

  for (std::size_t t = 0;; ++t) {
    const Configuration& cur = traj.states.back();
    if (setup.stop.cluster_rho && clusters(cur, *setup.stop.cluster_rho).within) {
      traj.stop_reason = StopReason::clustered;
      traj.stop_time = t;
      break;
    }
    if (t >= setup.stop.max_steps) {
      traj.stop_reason = StopReason::max_steps;
      traj.stop_time = t;
      break;
    }
    Configuration next;
    switch (setup.model) {
      case Model::classical: next = step_classical(cur); break;
      case Model::social: next = step_social(cur, *traj.graphs.back()); break;
      case Model::nd: next = step_nd(cur, *noise, t); break;
      case Model::nd_pairwise: next = step_nd_pairwise(cur, *noise, t); break;
    }
    if (social) {
      auto g_next = setup.schedule->next(t, traj.graphs.back(), cur, next);
      if (!setup.schedule->is_static()) {
        auto check = is_friendly_transition(*traj.graphs.back(), *g_next, cur, next);
        if (!check.friendly) {
          FriendlinessViolation v{t, std::move(check.violations)};
          if (setup.schedule->declared_friendly() && !setup.allow_unfriendly)
            throw FriendlinessError(std::move(v), "friendliness violated by the schedule at step " +
                                                      std::to_string(t) + " -> " + std::to_string(t + 1));
          traj.friendliness_violations.push_back(std::move(v));
        }
      }
      traj.graphs.push_back(std::move(g_next));
    }
    const double moved = total_movement(cur, next);
    const bool frozen = next == cur;
    traj.states.push_back(std::move(next));
    if (setup.stop.movement_threshold && moved < *setup.stop.movement_threshold) {
      traj.stop_reason = StopReason::movement;
      traj.stop_time = t;
      break;
    }
    if (frozen) {
      traj.stop_reason = StopReason::fixed_point;
      traj.stop_time = t;
      break;
    }
  }
  return traj;
}

}  // namespace hk
