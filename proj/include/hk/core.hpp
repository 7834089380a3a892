#pragma once

// Agent configurations, interaction neighborhoods and the communication graph.
//
// Agents are indexed 0..n-1 in code; file formats and the CLI use 1-based
// indices and convert at the boundary (see io.hpp).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hk/social_graph.hpp"

namespace hk {

/// Positions of n agents in R^d together with the confidence bound r.
class Configuration {
 public:
  Configuration() = default;

  /// Builds from one point per agent; every point must have the same dimension.
  explicit Configuration(const std::vector<std::vector<double>>& points, double confidence = 1.0)
      : n_(points.size()), dim_(points.empty() ? 0 : points.front().size()), confidence_(confidence) {
    coords_.reserve(n_ * dim_);
    for (const auto& p : points) {
      if (p.size() != dim_) throw std::invalid_argument("all positions must have the same dimension");
      coords_.insert(coords_.end(), p.begin(), p.end());
    }
    validate();
  }

  /// Row-major coordinates: agent i occupies [i*dim, (i+1)*dim).
  Configuration(std::size_t dim, std::vector<double> coords, double confidence = 1.0)
      : n_(dim == 0 ? 0 : coords.size() / dim), dim_(dim), confidence_(confidence), coords_(std::move(coords)) {
    if (dim == 0 || coords_.size() % dim != 0)
      throw std::invalid_argument("coordinate count must be a positive multiple of the dimension");
    validate();
  }

  /// One-dimensional configuration.
  static Configuration line(std::vector<double> xs, double confidence = 1.0) {
    return Configuration(1, std::move(xs), confidence);
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return dim_; }
  double confidence() const noexcept { return confidence_; }

  std::span<const double> position(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }

  /// Scalar position of agent i; only meaningful when dimension() == 1.
  double x(std::size_t i) const { return coords_[i * dim_]; }

  std::span<const double> coords() const noexcept { return coords_; }

  double distance_squared(std::size_t i, std::size_t j) const {
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return s;
  }

  double distance(std::size_t i, std::size_t j) const {
    if (dim_ == 1) return std::fabs(coords_[i] - coords_[j]);
    return std::sqrt(distance_squared(i, j));
  }

  /// Exact `distance <= r` test, no tolerance.
  bool within_confidence(std::size_t i, std::size_t j) const { return distance(i, j) <= confidence_; }

  /// Same agents and bound, new coordinates.
  Configuration with_coords(std::vector<double> coords) const {
    return Configuration(dim_, std::move(coords), confidence_);
  }

  /// Bitwise comparison of coordinates and bound.
  bool operator==(const Configuration& o) const {
    return n_ == o.n_ && dim_ == o.dim_ && confidence_ == o.confidence_ && coords_ == o.coords_;
  }

 private:
  void validate() const {
    if (n_ == 0) throw std::invalid_argument("a configuration needs at least one agent");
    if (dim_ == 0) throw std::invalid_argument("dimension must be at least 1");
    if (!(confidence_ > 0.0) || !std::isfinite(confidence_))
      throw std::invalid_argument("confidence bound must be positive and finite");
    for (double c : coords_)
      if (!std::isfinite(c)) throw std::invalid_argument("positions must be finite");
  }

  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  double confidence_ = 1.0;
  std::vector<double> coords_;
};

/// Symmetric interaction graph C_x; every vertex is adjacent to itself.
/// Adjacency lists are sorted and include the vertex itself.
class CommunicationGraph {
 public:
  CommunicationGraph() = default;
  explicit CommunicationGraph(std::vector<std::vector<std::size_t>> adjacency) : adj_(std::move(adjacency)) {}

  std::size_t size() const noexcept { return adj_.size(); }

  std::span<const std::size_t> neighbors(std::size_t i) const { return adj_.at(i); }

  /// Degree including the self-loop.
  std::size_t degree(std::size_t i) const { return adj_.at(i).size(); }

  bool adjacent(std::size_t i, std::size_t j) const {
    const auto& row = adj_.at(i);
    return std::binary_search(row.begin(), row.end(), j);
  }

  /// Number of unordered pairs i != j that interact.
  std::size_t interacting_pairs() const {
    std::size_t total = 0;
    for (const auto& row : adj_) total += row.size() - 1;
    return total / 2;
  }

  bool operator==(const CommunicationGraph&) const = default;

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

namespace detail {

inline void require_same_size(const Configuration& x, const SocialGraph* g) {
  if (g != nullptr && g->size() != x.size())
    throw std::invalid_argument("social graph has " + std::to_string(g->size()) +
                                " nodes but the configuration has " + std::to_string(x.size()) + " agents");
}

inline void require_index(const Configuration& x, std::size_t i) {
  if (i >= x.size())
    throw std::out_of_range("agent index " + std::to_string(i) + " out of range for n=" + std::to_string(x.size()));
}

/// Visits N(i) in ascending index order, i included. Every update rule sums
/// through this visitor so that equal neighborhoods give bitwise-equal sums.
template <class Visit>
void for_each_neighbor(const Configuration& x, const SocialGraph* g, std::size_t i, Visit&& visit) {
  if (g == nullptr) {
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j == i || x.within_confidence(i, j)) visit(j);
    return;
  }
  bool self_done = false;
  for (std::size_t j : g->neighbors(i)) {
    if (!self_done && j > i) {
      visit(i);
      self_done = true;
    }
    if (x.within_confidence(i, j)) visit(j);
  }
  if (!self_done) visit(i);
}

}  // namespace detail

/// N(i): agents j that share a social edge with i (or any j when there is no
/// graph) and lie within the confidence bound; always contains i.
inline std::vector<std::size_t> neighbors(const Configuration& x, const SocialGraph* g, std::size_t i) {
  detail::require_same_size(x, g);
  detail::require_index(x, i);
  std::vector<std::size_t> out;
  detail::for_each_neighbor(x, g, i, [&](std::size_t j) { out.push_back(j); });
  return out;
}

inline std::vector<std::size_t> neighbors(const Configuration& x, std::size_t i) { return neighbors(x, nullptr, i); }

inline std::vector<std::size_t> neighbors(const Configuration& x, const SocialGraph& g, std::size_t i) {
  return neighbors(x, &g, i);
}

inline CommunicationGraph communication_graph(const Configuration& x, const SocialGraph* g = nullptr) {
  detail::require_same_size(x, g);
  std::vector<std::vector<std::size_t>> adj(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    detail::for_each_neighbor(x, g, i, [&](std::size_t j) { adj[i].push_back(j); });
  return CommunicationGraph(std::move(adj));
}

inline CommunicationGraph communication_graph(const Configuration& x, const SocialGraph& g) {
  return communication_graph(x, &g);
}

/// Connected components, each sorted, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> components(const CommunicationGraph& cg) {
  const std::size_t n = cg.size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (std::size_t v : cg.neighbors(u))
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Sum over agents of the Euclidean displacement between two configurations.
inline double total_movement(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size() || a.dimension() != b.dimension())
    throw std::invalid_argument("configurations differ in size or dimension");
  double total = 0.0;
  const std::size_t d = a.dimension();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (d == 1) {
      total += std::fabs(b.x(i) - a.x(i));
      continue;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = b.position(i)[k] - a.position(i)[k];
      s += diff * diff;
    }
    total += std::sqrt(s);
  }
  return total;
}

}  // namespace hk
