#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "armsp/tar/cost.hpp"

namespace armsp::oracle {

/// Depth-first enumeration of every simple start-to-destination route.
inline std::vector<std::vector<int>> all_simple_routes(const MissionGraph& g) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<int> edges;
  std::function<void(int)> dfs = [&](int v) {
    if (v == g.dest()) {
      out.push_back(edges);
      return;
    }
    for (const auto& arc : g.neighbors(v)) {
      if (seen[static_cast<std::size_t>(arc.node)]) continue;
      seen[static_cast<std::size_t>(arc.node)] = 1;
      edges.push_back(arc.edge);
      dfs(arc.node);
      edges.pop_back();
      seen[static_cast<std::size_t>(arc.node)] = 0;
    }
  };
  seen[static_cast<std::size_t>(g.start())] = 1;
  dfs(g.start());
  return out;
}

/// Exact minimum route cost by enumeration.
inline double optimal_tar_cost(const MissionGraph& g, double budget, const TarWeights& w) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : all_simple_routes(g)) best = std::min(best, tar_cost(r, g, budget, w).cost);
  return best;
}

/// Small instance used by the oracle checks: random graph with tasks on most
/// edges and a budget at 40% of the summed edge times.
struct SmallInstance {
  MissionGraph graph;
  double budget = 0.0;
};

inline SmallInstance small_instance(std::uint64_t seed, std::size_t nodes, std::size_t edges) {
  Rng rng(seed);
  auto g = small_random_graph(nodes, edges, 2000.0, 2.5, rng);
  g = assign_tasks(g, random_tasks(edges - 2, rng), rng);
  double total = 0;
  for (const auto& e : g.edges()) total += e.time;
  return {std::move(g), 0.4 * total};
}

}  // namespace armsp::oracle
