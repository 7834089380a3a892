#pragma once

// Social-network construction and time-varying schedules.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hk/core.hpp"
#include "hk/random.hpp"

namespace hk {

/// Erdos-Renyi G(n, p): pairs (i, j), i < j, are visited in lexicographic
/// order and each is kept when the next mt19937_64 draw maps below p.
inline SocialGraph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  SocialGraph g(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) g.add_edge(i, j);
  return g;
}

/// Preferential attachment. Nodes 0..m form a clique; every later node v
/// attaches to m distinct earlier nodes, each drawn with probability
/// proportional to its degree before v arrived (rejection of repeats).
inline SocialGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw std::invalid_argument("attachment count m must satisfy 1 <= m < n");
  SocialGraph g(n);
  // Each edge endpoint appears once, so a uniform pick is degree-proportional.
  std::vector<std::size_t> endpoints;
  endpoints.reserve(2 * (m * (m + 1) / 2 + (n - m - 1) * m));
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      g.add_edge(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  Rng rng(seed);
  std::vector<std::size_t> targets;
  for (std::size_t v = m + 1; v < n; ++v) {
    targets.clear();
    const std::size_t pool = endpoints.size();
    while (targets.size() < m) {
      const std::size_t u = endpoints[rng.index(pool)];
      if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
    }
    for (std::size_t u : targets) {
      g.add_edge(v, u);
      endpoints.push_back(v);
      endpoints.push_back(u);
    }
  }
  return g;
}

enum class NamedGraph { complete, path, empty };

inline NamedGraph parse_named_graph(const std::string& kind) {
  if (kind == "complete") return NamedGraph::complete;
  if (kind == "path") return NamedGraph::path;
  if (kind == "empty") return NamedGraph::empty;
  throw std::invalid_argument("unknown graph kind '" + kind + "' (expected complete, path or empty)");
}

inline SocialGraph named_graph(NamedGraph kind, std::size_t n) {
  if (n < 1) throw std::invalid_argument("a named graph needs n >= 1");
  SocialGraph g(n);
  switch (kind) {
    case NamedGraph::complete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
      break;
    case NamedGraph::path:
      for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
      break;
    case NamedGraph::empty:
      break;
  }
  return g;
}

inline SocialGraph named_graph(const std::string& kind, std::size_t n) { return named_graph(parse_named_graph(kind), n); }

struct FriendlinessCheck {
  bool friendly = true;
  std::vector<SocialGraph::Edge> violations;  // (i, j), i < j
};

/// A transition G_t -> G_next is friendly when every pair that interacts at t
/// and is still within the bound at t+1 keeps its edge.
inline FriendlinessCheck is_friendly_transition(const SocialGraph& g_t, const SocialGraph& g_next,
                                                const Configuration& x_t, const Configuration& x_next) {
  const std::size_t n = x_t.size();
  if (g_t.size() != n || g_next.size() != n || x_next.size() != n)
    throw std::invalid_argument("friendliness check needs graphs and configurations of equal size");
  FriendlinessCheck out;
  for (const auto& [i, j] : g_t.edges()) {
    if (x_t.within_confidence(i, j) && x_next.within_confidence(i, j) && !g_next.has_edge(i, j))
      out.violations.emplace_back(i, j);
  }
  out.friendly = out.violations.empty();
  return out;
}

/// Social network as a function of time: fixed, an explicit sequence (the
/// last graph repeats once the sequence runs out), or a policy computing
/// G_{t+1} from G_t and the configurations at t and t+1.
class GraphSchedule {
 public:
  using GraphPtr = std::shared_ptr<const SocialGraph>;
  using Policy = std::function<SocialGraph(std::size_t t, const SocialGraph& current, const Configuration& x_t,
                                           const Configuration& x_next)>;

  static GraphSchedule fixed(SocialGraph g) {
    GraphSchedule s;
    s.graphs_.push_back(std::make_shared<const SocialGraph>(std::move(g)));
    s.friendly_ = true;
    return s;
  }

  static GraphSchedule sequence(std::vector<SocialGraph> graphs, bool declared_friendly) {
    if (graphs.empty()) throw std::invalid_argument("a graph sequence needs at least one graph");
    GraphSchedule s;
    const std::size_t n = graphs.front().size();
    for (auto& g : graphs) {
      if (g.size() != n) throw std::invalid_argument("all graphs in a schedule must have the same n");
      s.graphs_.push_back(std::make_shared<const SocialGraph>(std::move(g)));
    }
    s.friendly_ = declared_friendly;
    return s;
  }

  static GraphSchedule policy(SocialGraph initial, Policy rule, bool declared_friendly) {
    GraphSchedule s;
    s.graphs_.push_back(std::make_shared<const SocialGraph>(std::move(initial)));
    s.rule_ = std::move(rule);
    s.friendly_ = declared_friendly;
    return s;
  }

  std::size_t size() const { return graphs_.front()->size(); }
  bool is_static() const { return graphs_.size() == 1 && !rule_; }
  bool declared_friendly() const { return friendly_; }

  GraphPtr initial() const { return graphs_.front(); }

  /// G_{t+1} given G_t = current and the configurations at t and t+1.
  GraphPtr next(std::size_t t, const GraphPtr& current, const Configuration& x_t, const Configuration& x_next) const {
    if (rule_) {
      auto g = std::make_shared<const SocialGraph>(rule_(t, *current, x_t, x_next));
      if (g->size() != size()) throw std::logic_error("schedule policy changed the number of agents");
      return g;
    }
    if (graphs_.size() == 1) return current;
    return graphs_[std::min(t + 1, graphs_.size() - 1)];
  }

 private:
  GraphSchedule() = default;

  std::vector<GraphPtr> graphs_;
  Policy rule_;
  bool friendly_ = false;
};

/// Edge-monotone policy: each step adds up to `per_step` uniformly chosen
/// non-edges, drawn from a stream keyed by (seed, t). Never deletes, hence friendly.
inline GraphSchedule random_edge_addition(SocialGraph initial, std::size_t per_step, std::uint64_t seed) {
  auto rule = [per_step, seed](std::size_t t, const SocialGraph& current, const Configuration&,
                               const Configuration&) {
    SocialGraph g = current;
    const std::size_t n = g.size();
    const std::size_t max_edges = n * (n - 1) / 2;
    Rng rng(derive_seed(seed, t));
    for (std::size_t added = 0; added < per_step && g.edge_count() < max_edges;) {
      const std::size_t i = rng.index(n);
      const std::size_t j = rng.index(n);
      if (i != j && g.add_edge(i, j)) ++added;
    }
    return g;
  };
  return GraphSchedule::policy(std::move(initial), std::move(rule), true);
}

}  // namespace hk
