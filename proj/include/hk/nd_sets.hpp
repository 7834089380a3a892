#pragma once

// Geometric bookkeeping for one-dimensional systems: interval clusters and the
// leftmost-agent partition L/S/T/M used to track non-deterministic dynamics.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "hk/core.hpp"

namespace hk {

struct ClusterReport {
  std::vector<std::vector<std::size_t>> groups;  // each sorted; ordered by leftmost member
  std::vector<double> extents;                   // per group: largest pairwise distance
  double max_extent = 0.0;
  bool within = true;                            // every extent <= rho
};

/// Splits agents into independent subsystems (components of the classical
/// interaction graph; in 1-D these are the runs of sorted positions with
/// consecutive gaps <= r) and reports whether each fits within length rho.
inline ClusterReport clusters(const Configuration& x, double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
  ClusterReport out;
  const std::size_t n = x.size();
  if (x.dimension() == 1) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x.x(a) < x.x(b); });
    std::size_t start = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      if (k < n && x.x(order[k]) - x.x(order[k - 1]) <= x.confidence()) continue;
      std::vector<std::size_t> g(order.begin() + static_cast<std::ptrdiff_t>(start),
                                 order.begin() + static_cast<std::ptrdiff_t>(k));
      out.extents.push_back(x.x(order[k - 1]) - x.x(order[start]));
      std::sort(g.begin(), g.end());
      out.groups.push_back(std::move(g));
      start = k;
    }
  } else {
    for (auto& g : components(communication_graph(x))) {
      double extent = 0.0;
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b) extent = std::max(extent, x.distance(g[a], g[b]));
      out.extents.push_back(extent);
      out.groups.push_back(std::move(g));
    }
  }
  for (double e : out.extents) {
    out.max_extent = std::max(out.max_extent, e);
    out.within = out.within && e <= rho;
  }
  return out;
}

/// Classical (graph-free) neighborhoods of every agent as rows of a bitset.
class NeighborTable {
 public:
  explicit NeighborTable(const Configuration& x)
      : n_(x.size()), words_((x.size() + 63) / 64), bits_(n_ * words_, 0) {
    for (std::size_t i = 0; i < n_; ++i) {
      set(i, i);
      for (std::size_t j = i + 1; j < n_; ++j)
        if (x.within_confidence(i, j)) {
          set(i, j);
          set(j, i);
        }
    }
  }

  std::size_t size() const noexcept { return n_; }

  std::span<const std::uint64_t> row(std::size_t i) const { return {bits_.data() + i * words_, words_}; }

  bool contains(std::size_t i, std::size_t j) const { return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U; }

  bool same(std::size_t i, std::size_t j) const {
    return std::equal(row(i).begin(), row(i).end(), row(j).begin());
  }

  /// Whether N(i) meets the given index set.
  bool intersects(std::size_t i, std::span<const std::size_t> members) const {
    return std::any_of(members.begin(), members.end(), [&](std::size_t j) { return contains(i, j); });
  }

 private:
  void set(std::size_t i, std::size_t j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// Partition of a (sub)system relative to its leftmost agent l:
///   L = {i in N(l) : N(i) = N(l)},  S = N(l) \ L,  T = members \ N(l),  M = S u T.
struct NdPartition {
  std::size_t leftmost = 0;   // lowest index attaining the minimum position
  std::size_t rightmost = 0;  // lowest index attaining the maximum position
  std::vector<std::size_t> L, S, T, M;

  bool operator==(const NdPartition&) const = default;
};

/// Partition restricted to `members` (sorted agent indices); neighborhoods
/// come from the table of the full configuration.
inline NdPartition nd_partition(const Configuration& x, const NeighborTable& table,
                                std::span<const std::size_t> members) {
  if (x.dimension() != 1) throw std::invalid_argument("the L/S/T/M partition is defined for one-dimensional systems");
  if (members.empty()) throw std::invalid_argument("partition of an empty subsystem");
  NdPartition p;
  p.leftmost = p.rightmost = members.front();
  for (std::size_t i : members) {
    if (x.x(i) < x.x(p.leftmost)) p.leftmost = i;
    if (x.x(i) > x.x(p.rightmost)) p.rightmost = i;
  }
  for (std::size_t i : members) {
    if (!table.contains(p.leftmost, i)) {
      p.T.push_back(i);
    } else if (table.same(i, p.leftmost)) {
      p.L.push_back(i);
    } else {
      p.S.push_back(i);
    }
  }
  p.M.reserve(p.S.size() + p.T.size());
  std::merge(p.S.begin(), p.S.end(), p.T.begin(), p.T.end(), std::back_inserter(p.M));
  return p;
}

inline NdPartition nd_partition(const Configuration& x) {
  if (x.dimension() != 1) throw std::invalid_argument("the L/S/T/M partition is defined for one-dimensional systems");
  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return nd_partition(x, NeighborTable(x), all);
}

}  // namespace hk
