#pragma once

// Randomised property suites over many seeded instances. Each suite collects
// violation records instead of stopping at the first failure; `hkdyn check`
// and the acceptance runner both drive these.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hk/diagnostics.hpp"
#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/parallel.hpp"
#include "hk/random.hpp"
#include "hk/spectral.hpp"

namespace hk {

enum class Suite { nd_lemmas, energy, decrement, gap, nontrivial, friendly, theorem2 };

inline Suite parse_suite(const std::string& s) {
  if (s == "nd-lemmas") return Suite::nd_lemmas;
  if (s == "energy") return Suite::energy;
  if (s == "decrement") return Suite::decrement;
  if (s == "gap") return Suite::gap;
  if (s == "nontrivial") return Suite::nontrivial;
  if (s == "friendly") return Suite::friendly;
  if (s == "theorem2") return Suite::theorem2;
  throw std::invalid_argument("unknown suite '" + s +
                              "' (expected nd-lemmas, energy, decrement, gap, nontrivial, friendly or theorem2)");
}

inline const char* to_string(Suite s) {
  switch (s) {
    case Suite::nd_lemmas: return "nd-lemmas";
    case Suite::energy: return "energy";
    case Suite::decrement: return "decrement";
    case Suite::gap: return "gap";
    case Suite::nontrivial: return "nontrivial";
    case Suite::friendly: return "friendly";
    case Suite::theorem2: return "theorem2";
  }
  return "?";
}

struct SuiteOptions {
  std::size_t n_min = 3;
  std::size_t n_max = 15;
  std::optional<double> eps;  // unset: 1/(8 n^2) per instance (0.1 for the nontrivial suite)
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::optional<std::size_t> steps;  // per-suite default when unset
  Model model = Model::nd;           // nd-lemmas and theorem2: nd or nd_pairwise
  double rho = 1e-6;                 // theorem2
  std::size_t threads = 0;
};

struct SuiteViolation {
  std::size_t trial = 0;
  std::size_t t = 0;
  std::string check;
  double margin = 0.0;
};

struct SuiteResult {
  Suite suite = Suite::energy;
  std::size_t trials = 0;
  std::size_t evaluations = 0;  // inequality evaluations across all trials
  std::vector<std::string> checked;
  std::vector<std::string> skipped;
  std::vector<SuiteViolation> violations;
  std::array<std::size_t, 3> case_histogram{};  // S1, S2, S3 (nd-lemmas only)
  double worst_ratio = 0.0;                     // nontrivial: count / bound; theorem2: steps / bound

  bool ok() const { return violations.empty(); }
};

inline double auto_eps(std::size_t n) { return 1.0 / (8.0 * static_cast<double>(n) * static_cast<double>(n)); }

namespace detail {

inline std::size_t draw_n(const SuiteOptions& o, Rng& rng) {
  return o.n_min + rng.index(o.n_max - o.n_min + 1);
}

/// Points uniform in a cube of side (n/2)^(1/d), about two agents per unit volume.
inline Configuration spread_points(Rng& rng, std::size_t n, std::size_t d) {
  const double side = std::pow(static_cast<double>(n) / 2.0, 1.0 / static_cast<double>(d));
  std::vector<double> c(n * d);
  for (double& v : c) v = rng.uniform(0.0, std::max(side, 1.0));
  return Configuration(d, std::move(c));
}

struct TrialOutcome {
  std::size_t evaluations = 0;
  std::vector<SuiteViolation> violations;
  std::map<std::string, bool> applied;
  std::array<std::size_t, 3> cases{};
  double ratio = 0.0;
};

/// Energy monotonicity (and optionally the decrement bound) along a social run.
inline void check_energy_steps(const Trajectory& traj, std::size_t trial, bool decrement, TrialOutcome& out) {
  for (std::size_t t = 0; t < traj.steps(); ++t) {
    const Configuration& x = traj.states[t];
    const Configuration& y = traj.states[t + 1];
    const SocialGraph* g_t = traj.graph_at(t);
    const SocialGraph* g_n = traj.graph_at(t + 1);
    ++out.evaluations;
    if (decrement) {
      const DecrementCheck c = check_decrement(x, y, g_t, g_n);
      if (!c.holds) out.violations.push_back({trial, t, "decrement", c.lhs - c.rhs});
    } else {
      const double margin = energy(x, g_t) + 1e-9 - energy(y, g_n);
      if (margin < 0.0) out.violations.push_back({trial, t, "energy", margin});
    }
  }
}

inline TrialOutcome energy_trial(const SuiteOptions& o, std::size_t trial, bool decrement) {
  Rng rng(derive_seed(o.seed, trial, 1));
  const std::size_t n = draw_n(o, rng);
  const std::size_t d = 1 + trial % 2;
  const Configuration x0 = spread_points(rng, n, d);
  RunSetup s;
  s.model = Model::social;
  s.schedule = GraphSchedule::fixed(gnp(n, rng.uniform01(), rng.bits()));
  s.stop.max_steps = o.steps.value_or(200);
  TrialOutcome out;
  check_energy_steps(run(x0, s), trial, decrement, out);
  return out;
}

inline TrialOutcome gap_trial(const SuiteOptions& o, std::size_t trial) {
  Rng rng(derive_seed(o.seed, trial, 2));
  const std::size_t n = draw_n(o, rng);
  const std::size_t d = 1 + rng.index(2);
  const Configuration x = spread_points(rng, n, d);
  const CommunicationGraph cg = communication_graph(x, gnp(n, rng.uniform01(), rng.bits()));
  TrialOutcome out;
  const std::size_t diam = hop_diameter(cg);
  if (diam == 0) return out;
  ++out.evaluations;
  const double margin = gap_bound(n, diam) + 1e-9 - second_eigenvalue(cg);
  if (margin < 0.0) out.violations.push_back({trial, 0, "gap", margin});
  return out;
}

inline TrialOutcome nontrivial_trial(const SuiteOptions& o, std::size_t trial) {
  Rng rng(derive_seed(o.seed, trial, 3));
  const std::size_t n = draw_n(o, rng);
  const double eps = o.eps.value_or(0.1);
  const Configuration x0 = spread_points(rng, n, 1);
  RunSetup s;
  s.model = Model::social;
  s.schedule = GraphSchedule::fixed(gnp(n, rng.uniform01(), rng.bits()));
  s.stop.max_steps = o.steps.value_or(10000);
  s.stop.movement_threshold = 1e-9;
  const Trajectory traj = run(x0, s);
  const double nn = static_cast<double>(n);
  const double bound = std::pow(nn, 5) / (eps * eps);
  const double count = static_cast<double>(count_nontrivial(traj, eps));
  TrialOutcome out;
  out.evaluations = 1;
  out.ratio = count / bound;
  if (count > bound) out.violations.push_back({trial, traj.steps(), "nontrivial", bound - count});
  return out;
}

inline TrialOutcome friendly_trial(const SuiteOptions& o, std::size_t trial) {
  Rng rng(derive_seed(o.seed, trial, 4));
  const std::size_t n = draw_n(o, rng);
  const std::size_t d = 1 + trial % 2;
  const Configuration x0 = spread_points(rng, n, d);
  const SocialGraph g0 = gnp(n, 0.5 * rng.uniform01(), rng.bits());
  const std::uint64_t schedule_seed = rng.bits();
  const std::size_t max_steps = o.steps.value_or(200);
  TrialOutcome out;

  // Edge-monotone schedule: energy must still decrease, every transition friendly.
  RunSetup s;
  s.model = Model::social;
  s.schedule = random_edge_addition(g0, 1 + n / 10, schedule_seed);
  s.stop.max_steps = max_steps;
  s.allow_unfriendly = true;
  const Trajectory traj = run(x0, s);
  check_energy_steps(traj, trial, false, out);
  for (std::size_t t = 0; t < traj.steps(); ++t) {
    ++out.evaluations;
    const auto f = is_friendly_transition(*traj.graphs[t], *traj.graphs[t + 1], traj.states[t], traj.states[t + 1]);
    if (!f.friendly) out.violations.push_back({trial, t, "friendly", -static_cast<double>(f.violations.size())});
  }

  // Same start, but at step `strike` the schedule deletes one interacting edge
  // that stays in range; the runner must abort at exactly that step.
  const std::size_t strike = trial % 8;
  auto deleted_at = std::make_shared<std::optional<std::size_t>>();
  auto rule = [strike, deleted_at](std::size_t t, const SocialGraph& cur, const Configuration& x_t,
                                   const Configuration& x_next) {
    SocialGraph g = cur;
    if (t >= strike && !*deleted_at) {
      for (const auto& [i, j] : cur.edges())
        if (x_t.within_confidence(i, j) && x_next.within_confidence(i, j)) {
          g.remove_edge(i, j);
          *deleted_at = t;
          break;
        }
    }
    return g;
  };
  RunSetup bad;
  bad.model = Model::social;
  bad.schedule = GraphSchedule::policy(g0, rule, true);
  bad.stop.max_steps = max_steps;
  std::optional<std::size_t> detected;
  try {
    run(x0, bad);
  } catch (const FriendlinessError& e) {
    detected = e.violation.t;
  }
  ++out.evaluations;
  if (detected != *deleted_at)
    out.violations.push_back({trial, deleted_at->value_or(detected.value_or(0)), "unfriendly-detection", -1.0});
  return out;
}

inline TrialOutcome nd_trial(const SuiteOptions& o, std::size_t trial) {
  Rng rng(derive_seed(o.seed, trial, 5));
  const std::size_t n = draw_n(o, rng);
  const double eps = o.eps.value_or(auto_eps(n));
  const NoiseMode mode = o.model == Model::nd ? NoiseMode::per_agent : NoiseMode::per_pair;
  RunSetup s;
  s.model = o.model;
  s.noise = NoiseSource::uniform(eps, rng.bits(), mode);
  s.stop.max_steps = o.steps.value_or(500);
  const Trajectory traj = run(spread_points(rng, n, 1), s);
  const LemmaReport rep = check_nd_lemmas(traj, eps);
  TrialOutcome out;
  for (const auto& [name, st] : rep.stats) {
    out.applied[name] = st.applied;
    out.evaluations += st.evaluations;
  }
  for (const auto& v : rep.violations) out.violations.push_back({trial, v.t, v.check, v.margin});
  out.cases = rep.histogram();
  return out;
}

inline TrialOutcome theorem2_trial(const SuiteOptions& o, std::size_t trial) {
  Rng rng(derive_seed(o.seed, trial, 6));
  const std::size_t n = draw_n(o, rng);
  const double eps = o.eps.value_or(auto_eps(n));
  const double nn = static_cast<double>(n);
  const double bound = 10.0 * (std::pow(nn, 4) + std::log(1.0 / o.rho) / std::log(nn));
  const NoiseMode mode = o.model == Model::nd ? NoiseMode::per_agent : NoiseMode::per_pair;
  RunSetup s;
  s.model = o.model;
  s.noise = NoiseSource::uniform(eps, rng.bits(), mode);
  s.stop.max_steps = static_cast<std::size_t>(std::floor(bound));
  s.stop.cluster_rho = o.rho;
  const Trajectory traj = run(spread_points(rng, n, 1), s);
  TrialOutcome out;
  out.evaluations = 1;
  out.ratio = static_cast<double>(traj.stop_time) / bound;
  if (traj.stop_reason != StopReason::clustered)
    out.violations.push_back({trial, traj.stop_time, "theorem2", -clusters(traj.states.back(), o.rho).max_extent});
  return out;
}

}  // namespace detail

inline SuiteResult run_suite(Suite suite, const SuiteOptions& o) {
  if (o.trials < 1) throw std::invalid_argument("a suite needs at least one trial");
  if (o.n_min < 1 || o.n_min > o.n_max) throw std::invalid_argument("need 1 <= n_min <= n_max");
  if (o.eps && !(*o.eps >= 0.0)) throw std::invalid_argument("eps must be non-negative");
  if ((suite == Suite::nd_lemmas || suite == Suite::theorem2) && o.model != Model::nd &&
      o.model != Model::nd_pairwise)
    throw std::invalid_argument(std::string(to_string(suite)) + " needs model nd or nd-pairwise");
  if (suite == Suite::theorem2 && o.n_min < 2) throw std::invalid_argument("theorem2 needs n >= 2");
  if (suite == Suite::nontrivial && o.eps && !(*o.eps > 0.0)) throw std::invalid_argument("eps must be positive");

  std::vector<detail::TrialOutcome> outcomes(o.trials);
  parallel_for(o.trials, o.threads, [&](std::size_t k) {
    switch (suite) {
      case Suite::energy: outcomes[k] = detail::energy_trial(o, k, false); break;
      case Suite::decrement: outcomes[k] = detail::energy_trial(o, k, true); break;
      case Suite::gap: outcomes[k] = detail::gap_trial(o, k); break;
      case Suite::nontrivial: outcomes[k] = detail::nontrivial_trial(o, k); break;
      case Suite::friendly: outcomes[k] = detail::friendly_trial(o, k); break;
      case Suite::nd_lemmas: outcomes[k] = detail::nd_trial(o, k); break;
      case Suite::theorem2: outcomes[k] = detail::theorem2_trial(o, k); break;
    }
  });

  SuiteResult r;
  r.suite = suite;
  r.trials = o.trials;
  std::map<std::string, bool> applied;
  for (auto& out : outcomes) {
    r.evaluations += out.evaluations;
    r.violations.insert(r.violations.end(), out.violations.begin(), out.violations.end());
    for (const auto& [name, a] : out.applied) applied[name] = applied[name] || a;
    for (std::size_t c = 0; c < 3; ++c) r.case_histogram[c] += out.cases[c];
    r.worst_ratio = std::max(r.worst_ratio, out.ratio);
  }
  switch (suite) {
    case Suite::nd_lemmas:
      for (const auto& [name, a] : applied) (a ? r.checked : r.skipped).push_back(name);
      break;
    case Suite::friendly: r.checked = {"energy", "friendly", "unfriendly-detection"}; break;
    default: r.checked = {to_string(suite)}; break;
  }
  return r;
}

}  // namespace hk
