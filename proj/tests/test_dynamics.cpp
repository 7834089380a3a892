#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/random.hpp"

using namespace hk;

namespace {

// Straight transcription of the update rule, independent of the library's
// neighbor iteration. Used as an oracle on small instances.
std::vector<double> naive_social_step(const std::vector<double>& x, const SocialGraph* g) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0;
    int k = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const bool linked = i == j || g == nullptr || g->has_edge(i, j);
      if (linked && std::fabs(x[i] - x[j]) <= 1.0) {
        sum += x[j];
        ++k;
      }
    }
    y[i] = sum / k;
  }
  return y;
}

std::vector<double> coords(const Configuration& x) { return {x.coords().begin(), x.coords().end()}; }

Configuration random_line(Rng& rng, std::size_t n, double hi) {
  std::vector<double> xs(n);
  for (double& v : xs) v = rng.uniform(0.0, hi);
  return Configuration::line(xs);
}

}  // namespace

TEST(StepClassical, SpecExamples) {
  EXPECT_EQ(coords(step_classical(Configuration::line({0.0, 2.0}))), (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(coords(step_classical(Configuration::line({0.0, 0.5, 1.0}))), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(coords(step_classical(Configuration::line({0.0, 1.0, 2.0}))), (std::vector<double>{0.5, 1.0, 1.5}));
}

TEST(StepSocial, SpecExamples) {
  const auto x = Configuration::line({0.0, 0.5, 1.0});
  EXPECT_EQ(coords(step_social(x, named_graph(NamedGraph::complete, 3))), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(coords(step_social(x, named_graph(NamedGraph::path, 3))), (std::vector<double>{0.25, 0.5, 0.75}));
  EXPECT_EQ(step_social(x, SocialGraph(3)), x);
  EXPECT_THROW(step_social(x, SocialGraph(2)), std::invalid_argument);
}

TEST(StepSocial, MatchesNaiveOracle) {
  Rng rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.index(12);
    const auto x = random_line(rng, n, 3.0);
    const SocialGraph g = gnp(n, 0.5, rng.bits());
    const auto got = coords(step_social(x, g));
    const auto want = naive_social_step(coords(x), &g);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(StepSocial, MultidimensionalMean) {
  const Configuration x({{0.0, 0.0}, {0.6, 0.0}, {0.0, 0.5}});
  const auto y = step_social(x, named_graph(NamedGraph::path, 3));
  EXPECT_DOUBLE_EQ(y.position(0)[0], 0.3);
  EXPECT_DOUBLE_EQ(y.position(1)[0], 0.2);
  EXPECT_DOUBLE_EQ(y.position(1)[1], 0.5 / 3.0);
  EXPECT_DOUBLE_EQ(y.position(2)[0], 0.3);
  EXPECT_DOUBLE_EQ(y.position(2)[1], 0.25);
}

TEST(StepNd, SpecExamples) {
  const auto x = Configuration::line({0.0, 0.9});
  std::map<NoiseSource::Key, double> table{{{0, 0, NoiseSource::kNoPair}, 0.1}, {{0, 1, NoiseSource::kNoPair}, 0.1}};
  const auto y = step_nd(x, NoiseSource::schedule(0.1, NoiseMode::per_agent, table), 0);
  EXPECT_NEAR(y.x(0), 0.495, 1e-15);
  EXPECT_NEAR(y.x(1), 0.405, 1e-15);
  EXPECT_GT(y.x(0), y.x(1));

  const auto single = Configuration::line({3.0});
  EXPECT_EQ(step_nd(single, NoiseSource::uniform(0.5, 1), 0), single);
  EXPECT_THROW(step_nd(Configuration({{0.0, 0.0}}), NoiseSource::zero(), 0), std::invalid_argument);
}

TEST(StepNdPairwise, SpecExamples) {
  const auto x = Configuration::line({0.0, 0.8});
  std::map<NoiseSource::Key, double> table{{{0, 0, 1}, 0.1}, {{0, 1, 0}, -0.1}};
  const auto y = step_nd_pairwise(x, NoiseSource::schedule(0.1, NoiseMode::per_pair, table), 0);
  EXPECT_NEAR(y.x(0), 0.44, 1e-15);
  EXPECT_NEAR(y.x(1), 0.44, 1e-15);
  const auto single = Configuration::line({3.0});
  EXPECT_EQ(step_nd_pairwise(single, NoiseSource::uniform(0.5, 1, NoiseMode::per_pair), 0), single);
}

TEST(StepNd, ZeroNoiseIsBitwiseClassical) {
  Rng rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = random_line(rng, 1 + rng.index(30), 5.0);
    const auto c = step_classical(x);
    EXPECT_EQ(step_nd(x, NoiseSource::zero(), 3), c);
    EXPECT_EQ(step_nd_pairwise(x, NoiseSource::zero(NoiseMode::per_pair), 3), c);
    EXPECT_EQ(step_social(x, named_graph(NamedGraph::complete, x.size())), c);
  }
}

TEST(NoiseSource, RangeAndDeterminism) {
  const auto x = Configuration::line({0.0});
  const auto u = NoiseSource::uniform(0.25, 9);
  for (std::size_t t = 0; t < 100; ++t)
    for (std::size_t i = 0; i < 10; ++i) {
      const double v = u.value(t, i, std::nullopt, x);
      EXPECT_LE(std::fabs(v), 0.25);
      EXPECT_EQ(v, NoiseSource::uniform(0.25, 9).value(t, i, std::nullopt, x));
    }
  EXPECT_NE(u.value(0, 0, std::nullopt, x), u.value(0, 1, std::nullopt, x));
  EXPECT_THROW(NoiseSource::uniform(-0.1, 1), std::invalid_argument);
  EXPECT_THROW(NoiseSource::schedule(0.1, NoiseMode::per_agent, {{{0, 0, NoiseSource::kNoPair}, 0.2}}),
               NoiseOutOfRange);
}

TEST(NoiseSource, AdversaryIsRangeChecked) {
  auto cheat = NoiseSource::adversarial(0.1, NoiseMode::per_agent,
                                        [](std::size_t, std::size_t, std::optional<std::size_t>,
                                           const Configuration&) { return 0.3; });
  EXPECT_THROW(step_nd(Configuration::line({0.0, 0.5}), cheat, 0), NoiseOutOfRange);

  // pushes every agent away from its neighborhood mean as far as allowed
  auto push = NoiseSource::adversarial(0.1, NoiseMode::per_agent,
                                       [](std::size_t, std::size_t, std::optional<std::size_t>,
                                          const Configuration&) { return 0.1; });
  const auto y = step_nd(Configuration::line({0.0, 0.5}), push, 0);
  EXPECT_NEAR(y.x(0), 0.275, 1e-15);
}

TEST(Invariants, ConvexHullAndOrder) {
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.index(25);
    const auto x = random_line(rng, n, 4.0);
    const SocialGraph g = gnp(n, rng.uniform01(), rng.bits());
    const auto ys = step_social(x, g);
    const auto yc = step_classical(x);
    for (std::size_t i = 0; i < n; ++i) {
      double lo = x.x(i), hi = x.x(i);
      for (std::size_t j : neighbors(x, g, i)) {
        lo = std::min(lo, x.x(j));
        hi = std::max(hi, x.x(j));
      }
      EXPECT_GE(ys.x(i), lo);
      EXPECT_LE(ys.x(i), hi);
      for (std::size_t j = 0; j < n; ++j) {
        if (x.x(i) <= x.x(j)) {
          EXPECT_LE(yc.x(i), yc.x(j));
        }
      }
    }
  }
}

TEST(Invariants, NdExtremesAreMonotone) {
  Rng rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.index(10);
    const double eps = 0.99 / static_cast<double>(n - 1);
    const auto x = random_line(rng, n, 3.0);
    for (NoiseMode mode : {NoiseMode::per_agent, NoiseMode::per_pair}) {
      const auto noise = NoiseSource::uniform(eps, rng.bits(), mode);
      const auto y = mode == NoiseMode::per_agent ? step_nd(x, noise, 0) : step_nd_pairwise(x, noise, 0);
      const auto [lo0, hi0] = std::minmax_element(x.coords().begin(), x.coords().end());
      const auto [lo1, hi1] = std::minmax_element(y.coords().begin(), y.coords().end());
      EXPECT_GE(*lo1, *lo0 - 1e-12);
      EXPECT_LE(*hi1, *hi0 + 1e-12);
    }
  }
}

TEST(Invariants, ConsensusIsFixed) {
  const auto x = Configuration::line({0.75, 0.75, 0.75, 0.75});
  EXPECT_EQ(step_classical(x), x);
  EXPECT_EQ(step_social(x, named_graph(NamedGraph::path, 4)), x);
  EXPECT_EQ(step_nd(x, NoiseSource::uniform(0.01, 3), 0), x);
  EXPECT_EQ(step_nd_pairwise(x, NoiseSource::uniform(0.01, 3, NoiseMode::per_pair), 0), x);
}

TEST(Run, ClassicalConsensus) {
  RunSetup s;
  s.stop.max_steps = 5;
  const auto traj = run(Configuration::line({0.0, 0.5, 1.0}), s);
  ASSERT_EQ(traj.states.size(), 3u);
  EXPECT_EQ(coords(traj.states[1]), (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(traj.stop_reason, StopReason::fixed_point);
  EXPECT_EQ(traj.stop_time, 1u);
}

TEST(Run, PathNeverFreezes) {
  RunSetup s;
  s.model = Model::social;
  s.schedule = GraphSchedule::fixed(named_graph(NamedGraph::path, 3));
  s.stop.movement_threshold = 1e-6;
  const auto traj = run(Configuration::line({-0.5, 0.0, 0.5}), s);
  EXPECT_EQ(traj.stop_reason, StopReason::movement);
  EXPECT_EQ(traj.stop_time, 19u);
  EXPECT_EQ(traj.graphs.size(), traj.states.size());
}

TEST(Run, ZeroNoiseMatchesClassicalTrajectory) {
  Rng rng(17);
  const auto x = random_line(rng, 15, 6.0);
  RunSetup c;
  c.stop.max_steps = 50;
  RunSetup nd = c;
  nd.model = Model::nd;
  nd.noise = NoiseSource::zero();
  RunSetup pw = c;
  pw.model = Model::nd_pairwise;
  pw.noise = NoiseSource::zero();
  const auto a = run(x, c), b = run(x, nd), d = run(x, pw);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.states, d.states);
}

TEST(Run, ArgumentValidation) {
  const auto x = Configuration::line({0.0, 0.5});
  RunSetup s;
  s.model = Model::social;
  EXPECT_THROW(run(x, s), std::invalid_argument);
  s.schedule = GraphSchedule::fixed(SocialGraph(3));
  EXPECT_THROW(run(x, s), std::invalid_argument);
  RunSetup nd;
  nd.model = Model::nd;
  EXPECT_THROW(run(x, nd), std::invalid_argument);
  nd.noise = NoiseSource::uniform(0.1, 1, NoiseMode::per_pair);
  EXPECT_THROW(run(x, nd), std::invalid_argument);
  RunSetup classical;
  classical.noise = NoiseSource::zero();
  EXPECT_THROW(run(x, classical), std::invalid_argument);
}

TEST(Run, ClusterStop) {
  RunSetup s;
  s.model = Model::nd;
  s.noise = NoiseSource::uniform(0.01, 4);
  s.stop.cluster_rho = 1e-6;
  const auto traj = run(Configuration::line({0.0, 0.3, 0.6, 5.0}), s);
  EXPECT_EQ(traj.stop_reason, StopReason::clustered);
  EXPECT_EQ(traj.stop_time, traj.steps());
}

TEST(Run, FriendlinessViolationAborts) {
  const auto x = Configuration::line({0.0, 0.5, 3.0});
  auto drop = [](std::size_t, const SocialGraph& g, const Configuration&, const Configuration&) {
    SocialGraph h = g;
    h.remove_edge(0, 1);
    return h;
  };
  RunSetup s;
  s.model = Model::social;
  s.stop.max_steps = 4;
  s.schedule = GraphSchedule::policy(named_graph(NamedGraph::complete, 3), drop, true);
  try {
    run(x, s);
    FAIL() << "expected a friendliness error";
  } catch (const FriendlinessError& e) {
    EXPECT_EQ(e.violation.t, 0u);
    EXPECT_EQ(e.violation.pairs, (std::vector<SocialGraph::Edge>{{0, 1}}));
  }
  s.allow_unfriendly = true;
  const auto traj = run(x, s);
  ASSERT_EQ(traj.friendliness_violations.size(), 1u);
  EXPECT_EQ(traj.friendliness_violations[0].t, 0u);
}
