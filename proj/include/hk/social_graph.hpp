#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hk {

/// Undirected simple graph on agents 0..n-1. Self-pairs are never stored;
/// adjacency lists are kept sorted.
class SocialGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  SocialGraph() = default;
  explicit SocialGraph(std::size_t n) : adj_(n) {}

  SocialGraph(std::size_t n, std::span<const Edge> edges) : adj_(n) {
    for (const auto& [i, j] : edges) add_edge(i, j);
  }

  std::size_t size() const noexcept { return adj_.size(); }

  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const std::size_t> neighbors(std::size_t i) const { return adj_.at(i); }

  std::size_t degree(std::size_t i) const { return adj_.at(i).size(); }

  bool has_edge(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size() || i == j) return false;
    const auto& row = adj_[i];
    return std::binary_search(row.begin(), row.end(), j);
  }

  /// Inserts {i, j}; returns false if it was already present.
  bool add_edge(std::size_t i, std::size_t j) {
    check_pair(i, j);
    if (!insert_sorted(adj_[i], j)) return false;
    insert_sorted(adj_[j], i);
    ++edge_count_;
    return true;
  }

  bool remove_edge(std::size_t i, std::size_t j) {
    check_pair(i, j);
    if (!erase_sorted(adj_[i], j)) return false;
    erase_sorted(adj_[j], i);
    --edge_count_;
    return true;
  }

  /// Every edge once, as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t i = 0; i < adj_.size(); ++i)
      for (std::size_t j : adj_[i])
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  bool operator==(const SocialGraph&) const = default;

 private:
  void check_pair(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size())
      throw std::out_of_range("edge endpoint out of range: {" + std::to_string(i) + "," +
                              std::to_string(j) + "} for n=" + std::to_string(size()));
    if (i == j) throw std::invalid_argument("self-pairs are not stored in a social graph");
  }

  static bool insert_sorted(std::vector<std::size_t>& row, std::size_t v) {
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it != row.end() && *it == v) return false;
    row.insert(it, v);
    return true;
  }

  static bool erase_sorted(std::vector<std::size_t>& row, std::size_t v) {
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) return false;
    row.erase(it);
    return true;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::size_t edge_count_ = 0;
};

}  // namespace hk
