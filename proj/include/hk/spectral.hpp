#pragma once

// Energy of a configuration and the spectrum of its averaging matrix.
//
// Energy uses the ordered-pair convention: every unordered pair {i, j}, i != j,
// is counted twice, interacting pairs contribute their squared distance and
// non-interacting pairs contribute 1. Hence 0 <= E(x) <= n^2 - n and
// E_act(x) = 2 tr(x^T (D - A) x) for the communication graph's A and D.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hk/core.hpp"

namespace hk {

struct EnergyParts {
  double active = 0.0;    // sum over ordered interacting pairs of squared distance
  double inactive = 0.0;  // number of ordered non-interacting pairs
  double total() const { return active + inactive; }
};

inline EnergyParts energy_parts(const Configuration& x, const CommunicationGraph& cg) {
  if (cg.size() != x.size()) throw std::invalid_argument("communication graph does not match configuration");
  const std::size_t n = x.size();
  double active = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : cg.neighbors(i))
      if (j > i) active += x.distance_squared(i, j);
  const std::size_t pairs = n * (n - 1) / 2;
  return {2.0 * active, 2.0 * static_cast<double>(pairs - cg.interacting_pairs())};
}

inline double energy(const Configuration& x, const SocialGraph* g = nullptr) {
  return energy_parts(x, communication_graph(x, g)).total();
}
inline double energy(const Configuration& x, const SocialGraph& g) { return energy(x, &g); }

inline double active_energy(const Configuration& x, const SocialGraph* g = nullptr) {
  return energy_parts(x, communication_graph(x, g)).active;
}
inline double active_energy(const Configuration& x, const SocialGraph& g) { return active_energy(x, &g); }

/// Tolerance for recognising the unit eigenvalue of each component.
inline constexpr double kUnitEigenTolerance = 1e-9;

/// Largest |mu| over eigenvalues mu of P = D^{-1} A other than the unit
/// eigenvalue contributed by each connected component; 0 when nothing is left.
/// Each component is handled through B = D^{-1/2} A D^{-1/2}, which is
/// symmetric and similar to that component's block of P.
inline double second_eigenvalue(const CommunicationGraph& cg) {
  double lambda = 0.0;
  for (const auto& comp : components(cg)) {
    const std::size_t c = comp.size();
    if (c == 1) continue;
    bool clique = true;
    for (std::size_t v : comp) clique = clique && cg.degree(v) == c;
    if (clique) continue;  // P block is J/c: eigenvalues 1, 0, ..., 0

    std::vector<std::size_t> local(cg.size(), 0);
    for (std::size_t k = 0; k < c; ++k) local[comp[k]] = k;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
    for (std::size_t k = 0; k < c; ++k) {
      const std::size_t u = comp[k];
      for (std::size_t v : cg.neighbors(u)) {
        const double w = 1.0 / std::sqrt(static_cast<double>(cg.degree(u)) * static_cast<double>(cg.degree(v)));
        b(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(local[v])) = w;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation did not converge");
    const auto& ev = solver.eigenvalues();  // ascending
    const Eigen::Index top = ev.size() - 1;
    if (std::fabs(ev(top) - 1.0) > kUnitEigenTolerance)
      throw std::logic_error("connected component without a unit eigenvalue");
    lambda = std::max({lambda, std::fabs(ev(0)), std::fabs(ev(top - 1))});
  }
  return lambda;
}

/// Largest hop diameter over connected components (0 if all are singletons).
inline std::size_t hop_diameter(const CommunicationGraph& cg) {
  const std::size_t n = cg.size();
  std::size_t diam = 0;
  std::vector<std::size_t> dist(n);
  std::deque<std::size_t> queue;
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), unseen);
    dist[s] = 0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      diam = std::max(diam, dist[u]);
      for (std::size_t v : cg.neighbors(u))
        if (dist[v] == unseen) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
  }
  return diam;
}

/// 1 - 1 / (n^2 diam), the a-priori ceiling on second_eigenvalue; 0 when diam = 0.
inline double gap_bound(std::size_t n, std::size_t diameter) {
  if (diameter == 0) return 0.0;
  const double nn = static_cast<double>(n);
  return 1.0 - 1.0 / (nn * nn * static_cast<double>(diameter));
}

inline double gap_bound(const CommunicationGraph& cg) { return gap_bound(cg.size(), hop_diameter(cg)); }

/// Per-configuration spectral summary.
struct SpectralReport {
  double energy = 0.0;
  double active_energy = 0.0;
  double lambda = 0.0;
  double gap_bound = 0.0;
  std::size_t diameter = 0;
  std::size_t component_count = 0;
};

inline SpectralReport spectral_report(const Configuration& x, const CommunicationGraph& cg) {
  SpectralReport r;
  const EnergyParts e = energy_parts(x, cg);
  r.energy = e.total();
  r.active_energy = e.active;
  r.lambda = second_eigenvalue(cg);
  r.diameter = hop_diameter(cg);
  r.gap_bound = gap_bound(cg.size(), r.diameter);
  r.component_count = components(cg).size();
  return r;
}

inline constexpr double kDecrementTolerance = 1e-9;

struct DecrementCheck {
  double lhs = 0.0;     // E(x_t) - E(x_next)
  double rhs = 0.0;     // (1 - lambda_t^2) E_act(x_t)
  double lambda = 0.0;  // second eigenvalue at time t
  bool holds = true;
};

/// Evaluates E(x_t) - E(x_next) >= (1 - lambda_t^2) E_act(x_t). x_next must be
/// the social (or classical) successor of x_t; g_next is the network at t+1.
inline DecrementCheck check_decrement(const Configuration& x_t, const Configuration& x_next, const SocialGraph* g_t,
                                      const SocialGraph* g_next) {
  if (x_t.size() != x_next.size()) throw std::invalid_argument("configurations differ in size");
  const CommunicationGraph cg_t = communication_graph(x_t, g_t);
  const EnergyParts now = energy_parts(x_t, cg_t);
  const double next = energy(x_next, g_next);
  DecrementCheck out;
  out.lambda = second_eigenvalue(cg_t);
  out.lhs = now.total() - next;
  out.rhs = (1.0 - out.lambda * out.lambda) * now.active;
  out.holds = out.lhs >= out.rhs - kDecrementTolerance;
  return out;
}

inline DecrementCheck check_decrement(const Configuration& x_t, const Configuration& x_next,
                                      const SocialGraph* g = nullptr) {
  return check_decrement(x_t, x_next, g, g);
}

inline DecrementCheck check_decrement(const Configuration& x_t, const Configuration& x_next, const SocialGraph& g) {
  return check_decrement(x_t, x_next, &g, &g);
}

}  // namespace hk
