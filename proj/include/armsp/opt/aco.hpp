#pragma once

#include <cassert>
#include <chrono>
#include <cmath>
#include <concepts>
#include <limits>
#include <vector>

#include "armsp/core/parallel.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

/// Graph view needed by the ant colony: neighbour arcs with `.node`/`.edge`
/// members, a positive heuristic per edge, and costs for finished or stuck walks.
template <class P>
concept AntProblem = requires(const P& p, int node, const std::vector<int>& nodes, const std::vector<int>& edges) {
  { p.node_count() } -> std::convertible_to<std::size_t>;
  { p.edge_count() } -> std::convertible_to<std::size_t>;
  { p.start() } -> std::convertible_to<int>;
  { p.dest() } -> std::convertible_to<int>;
  { p.arcs(node).begin()->node } -> std::convertible_to<int>;
  { p.arcs(node).begin()->edge } -> std::convertible_to<int>;
  { p.heuristic(node) } -> std::convertible_to<double>;
  { p.route_cost(nodes, edges) } -> std::convertible_to<double>;
  { p.stuck_cost(nodes, edges, node) } -> std::convertible_to<double>;
};

/// Selection probabilities proportional to tau^alpha * eta^beta. Falls back to
/// uniform when every weight underflows.
inline std::vector<double> aco_probabilities(const std::vector<double>& tau, const std::vector<double>& eta, double alpha,
                                             double beta) {
  std::vector<double> p(tau.size());
  double sum = 0;
  for (std::size_t i = 0; i < tau.size(); ++i) sum += (p[i] = std::pow(tau[i], alpha) * std::pow(eta[i], beta));
  if (!(sum > 0) || !std::isfinite(sum)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (auto& v : p) v /= sum;
  return p;
}

struct AntWalk {
  std::vector<int> nodes;
  std::vector<int> edges;
  bool complete = false;
  double cost = std::numeric_limits<double>::infinity();
};

struct AcoState {
  std::vector<double> pheromone;  // per edge
  double alpha = 1.5;
  double beta = 0.9;
  std::size_t iteration = 0;
  double reference_cost = 0.0;  // first complete iteration-best cost, 0 until seen
  AntWalk best;
};

inline AcoState aco_init(std::size_t edge_count, const AcoParams& p) {
  AcoState s;
  s.pheromone.assign(edge_count, p.initial_pheromone);
  s.alpha = p.pheromone_exponent;
  s.beta = p.heuristic_exponent;
  return s;
}

/// One ant's walk. The ant draws from its own stream so colonies can be built in parallel.
template <AntProblem P>
AntWalk aco_walk(const P& problem, const AcoState& s, Rng& rng) {
  AntWalk w;
  std::vector<char> visited(problem.node_count(), 0);
  int cur = problem.start();
  visited[static_cast<std::size_t>(cur)] = 1;
  w.nodes.push_back(cur);
  std::vector<double> tau, eta;
  std::vector<int> cand_node, cand_edge;
  while (cur != problem.dest()) {
    tau.clear();
    eta.clear();
    cand_node.clear();
    cand_edge.clear();
    for (const auto& arc : problem.arcs(cur)) {
      if (visited[static_cast<std::size_t>(arc.node)]) continue;
      cand_node.push_back(arc.node);
      cand_edge.push_back(arc.edge);
      tau.push_back(s.pheromone[static_cast<std::size_t>(arc.edge)]);
      eta.push_back(problem.heuristic(arc.edge));
    }
    if (cand_node.empty()) {
      w.cost = sanitize_cost(problem.stuck_cost(w.nodes, w.edges, cur));
      return w;
    }
    const auto probs = aco_probabilities(tau, eta, s.alpha, s.beta);
#ifndef NDEBUG
    double total = 0;
    for (double v : probs) total += v;
    assert(std::abs(total - 1.0) < 1e-12);
#endif
    double r = rng.uniform();
    std::size_t pick = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      r -= probs[i];
      if (r < 0) {
        pick = i;
        break;
      }
    }
    cur = cand_node[pick];
    visited[static_cast<std::size_t>(cur)] = 1;
    w.nodes.push_back(cur);
    w.edges.push_back(cand_edge[pick]);
  }
  w.complete = true;
  w.cost = sanitize_cost(problem.route_cost(w.nodes, w.edges));
  return w;
}

/// One colony iteration: build all walks, evaporate, let the iteration-best
/// complete walk deposit Q/cost on its edges, then decay both exponents. With a
/// relative deposit Q is multiplied by the first iteration-best cost, which makes
/// the colony insensitive to the overall scale of the cost.
template <AntProblem P>
AcoState aco_construct_and_update(const P& problem, AcoState s, const OptimizerConfig& cfg, std::size_t* evaluations = nullptr) {
  const auto& p = cfg.aco;
  const std::size_t ants = cfg.population;
  std::vector<AntWalk> walks(ants);
  const std::uint64_t round = s.iteration;
  parallel_for(ants, cfg.workers, [&](std::size_t a) {
    Rng rng(derive_seed(cfg.seed, round, a));
    walks[a] = aco_walk(problem, s, rng);
  });
  if (evaluations) *evaluations += ants;

  std::size_t best = ants;
  for (std::size_t a = 0; a < ants; ++a) {
    if (!walks[a].complete || !std::isfinite(walks[a].cost)) continue;
    if (best == ants || walks[a].cost < walks[best].cost) best = a;
  }
  for (auto& t : s.pheromone) t = std::max(p.min_pheromone, t / p.evaporation);
  if (best < ants) {
    const double omega = std::max(walks[best].cost, 1e-12);
    double q = p.deposit;
    if (p.relative_deposit) {
      if (s.reference_cost <= 0.0) s.reference_cost = omega;
      q *= s.reference_cost;
    }
    for (int e : walks[best].edges) s.pheromone[static_cast<std::size_t>(e)] += q / omega;
  }
  // global best over every walk (stuck walks carry their surrogate cost)
  std::size_t overall = 0;
  for (std::size_t a = 1; a < ants; ++a)
    if (walks[a].cost < walks[overall].cost) overall = a;
  if (ants > 0 && (s.best.nodes.empty() || walks[overall].cost < s.best.cost)) s.best = walks[overall];
  s.alpha *= p.exponent_decay;
  s.beta *= p.exponent_decay;
  ++s.iteration;
  return s;
}

}  // namespace armsp
