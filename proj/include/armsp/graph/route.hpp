#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/graph/mission_graph.hpp"

namespace armsp {

inline constexpr double kPriorityMin = -200.0;
inline constexpr double kPriorityMax = 100.0;

struct Route {
  std::vector<int> nodes;  // start .. dest
  std::vector<int> edges;  // edges[i] joins nodes[i] and nodes[i+1]
  double time = 0.0;       // T_R
  double total_weight = 0.0;
  std::size_t covered_tasks = 0;

  bool empty() const { return edges.empty(); }
};

enum class DecodeStatus { Feasible, Infeasible, Degenerate };

struct DecodeResult {
  DecodeStatus status = DecodeStatus::Feasible;
  Route route;     // partial walk when infeasible
  int stuck_at = -1;
};

/// Fills time/weight/task totals from the edge list.
inline void finish_route(Route& r, const MissionGraph& g) {
  r.time = 0.0;
  r.total_weight = 0.0;
  r.covered_tasks = 0;
  for (int e : r.edges) {
    const auto& ed = g.edge(e);
    r.time += ed.time;
    r.total_weight += ed.weight;
    if (ed.task) ++r.covered_tasks;
  }
}

/// Reusable buffers so hot loops do not allocate per decode.
struct DecodeScratch {
  std::vector<char> visited;
};

/// Greedy random-key walk: from the current node move to the unvisited neighbour
/// with the largest key; equal keys go to the lower id. Stops at dest or when no
/// unvisited neighbour remains.
inline DecodeResult decode_route(std::span<const double> keys, const MissionGraph& g, DecodeScratch& scratch) {
  require(keys.size() == g.node_count(), ErrorCode::InvalidInput, "priority vector length must match waypoint count");
  DecodeResult out;
  const int start = g.start(), dest = g.dest();
  out.route.nodes.push_back(start);
  if (start == dest) {
    out.status = DecodeStatus::Degenerate;
    return out;
  }
  scratch.visited.assign(g.node_count(), 0);
  scratch.visited[static_cast<std::size_t>(start)] = 1;
  int cur = start;
  while (cur != dest) {
    int best = -1, best_edge = -1;
    double best_key = -INFINITY;
    for (const auto& arc : g.neighbors(cur)) {
      if (scratch.visited[static_cast<std::size_t>(arc.node)]) continue;
      const double k = keys[static_cast<std::size_t>(arc.node)];
      if (best < 0 || k > best_key) {  // neighbours are id-sorted, so ties keep the lower id
        best = arc.node;
        best_edge = arc.edge;
        best_key = k;
      }
    }
    if (best < 0) {
      out.status = DecodeStatus::Infeasible;
      out.stuck_at = cur;
      finish_route(out.route, g);
      return out;
    }
    assert(!scratch.visited[static_cast<std::size_t>(best)]);
    scratch.visited[static_cast<std::size_t>(best)] = 1;
    out.route.nodes.push_back(best);
    out.route.edges.push_back(best_edge);
    cur = best;
  }
  finish_route(out.route, g);
  return out;
}

inline DecodeResult decode_route(std::span<const double> keys, const MissionGraph& g) {
  DecodeScratch scratch;
  return decode_route(keys, g, scratch);
}

/// Sum of edge traversal times.
inline double route_time(const Route& r, const MissionGraph& g) {
  double t = 0.0;
  for (int e : r.edges) {
    require(e >= 0 && e < int(g.edge_count()), ErrorCode::InvalidRoute, "edge id out of range");
    t += g.edge(e).time;
  }
  return t;
}

enum class RouteCriterion { Endpoints = 1, Adjacency = 2, NodeRepeat = 3, EdgeRepeat = 4, TimeBudget = 5 };

struct RouteViolation {
  RouteCriterion criterion;
  std::string detail;
};

/// Checks a node sequence against the five feasibility criteria. Edges are
/// resolved from consecutive node pairs.
inline std::vector<RouteViolation> validate_route(const std::vector<int>& nodes, const MissionGraph& g,
                                                  double time_budget) {
  const int n = static_cast<int>(g.node_count());
  for (int v : nodes) require(v >= 0 && v < n, ErrorCode::InvalidRoute, "node id " + std::to_string(v) + " not in graph");
  std::vector<RouteViolation> out;
  if (nodes.empty() || nodes.front() != g.start() || nodes.back() != g.dest())
    out.push_back({RouteCriterion::Endpoints, "route must run from start to dest"});
  std::vector<int> seen_node(g.node_count(), 0);
  std::vector<int> seen_edge(g.edge_count(), 0);
  double time = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (++seen_node[static_cast<std::size_t>(nodes[i])] == 2)
      out.push_back({RouteCriterion::NodeRepeat, "node " + std::to_string(nodes[i]) + " repeats"});
    if (i == 0) continue;
    const int e = g.find_edge(nodes[i - 1], nodes[i]);
    if (e < 0) {
      out.push_back({RouteCriterion::Adjacency,
                     "no edge " + std::to_string(nodes[i - 1]) + "-" + std::to_string(nodes[i])});
      continue;
    }
    if (++seen_edge[static_cast<std::size_t>(e)] == 2)
      out.push_back({RouteCriterion::EdgeRepeat, "edge " + std::to_string(e) + " repeats"});
    time += g.edge(e).time;
  }
  if (time > time_budget)
    out.push_back({RouteCriterion::TimeBudget, "route time " + std::to_string(time) + " exceeds budget"});
  return out;
}

inline std::vector<RouteViolation> validate_route(const Route& r, const MissionGraph& g, double time_budget) {
  return validate_route(r.nodes, g, time_budget);
}

}  // namespace armsp
