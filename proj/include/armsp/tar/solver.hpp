#pragma once

#include <json.hpp>

#include <chrono>
#include <string>
#include <vector>

#include "armsp/graph/mission_graph.hpp"
#include "armsp/graph/route.hpp"
#include "armsp/opt/optimize.hpp"
#include "armsp/tar/cost.hpp"

namespace armsp {

namespace detail {

/// Charge for a walk that stopped at `node` before reaching the destination.
/// Closer dead ends cost less so the search still has a gradient to follow.
inline double stuck_walk_cost(double ceiling, const std::vector<int>& hops, int node) {
  const double n = static_cast<double>(hops.size());
  const int h = hops[static_cast<std::size_t>(node)];
  return 10.0 * ceiling * (1.0 + (h < 0 ? n : static_cast<double>(h)) / n);
}

}  // namespace detail

/// Priority-vector view of the routing problem for the population kernels.
class TarProblem {
 public:
  TarProblem(const MissionGraph& g, double budget, TarWeights w)
      : g_(g),
        budget_(budget),
        w_(std::move(w)),
        bounds_(Bounds::uniform(g.node_count(), kPriorityMin, kPriorityMax)),
        hops_(hops_to(g, g.dest())),
        ceiling_(tar_cost_ceiling(g, budget, w_)) {}

  const Bounds& bounds() const { return bounds_; }

  DecodeResult decode(const Candidate& keys) const { return decode_route(keys, g_); }

  double evaluate(const Candidate& keys) const {
    const auto d = decode(keys);
    if (d.status != DecodeStatus::Feasible) return detail::stuck_walk_cost(ceiling_, hops_, d.stuck_at < 0 ? g_.start() : d.stuck_at);
    return tar_cost(d.route, g_, budget_, w_).cost;
  }

  double violation(const Candidate& keys) const {
    const auto d = decode(keys);
    return d.status == DecodeStatus::Feasible ? tar_cost(d.route, g_, budget_, w_).violation : 1.0;
  }

 private:
  const MissionGraph& g_;
  double budget_;
  TarWeights w_;
  Bounds bounds_;
  std::vector<int> hops_;
  double ceiling_;
};

/// Graph view for the ant colony. The heuristic is weight per second of travel.
class TarColony {
 public:
  TarColony(const MissionGraph& g, double budget, TarWeights w)
      : g_(g), budget_(budget), w_(std::move(w)), hops_(hops_to(g, g.dest())), ceiling_(tar_cost_ceiling(g, budget, w_)) {
    eta_.resize(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      eta_[e] = tar_edge_weight(g, int(e), w_) / std::max(g.edge(int(e)).time, 1e-9);
  }

  std::size_t node_count() const { return g_.node_count(); }
  std::size_t edge_count() const { return g_.edge_count(); }
  int start() const { return g_.start(); }
  int dest() const { return g_.dest(); }
  const std::vector<Arc>& arcs(int node) const { return g_.neighbors(node); }
  double heuristic(int edge) const { return eta_[static_cast<std::size_t>(edge)]; }
  double route_cost(const std::vector<int>&, const std::vector<int>& edges) const {
    return tar_cost(edges, g_, budget_, w_).cost;
  }
  double stuck_cost(const std::vector<int>&, const std::vector<int>&, int node) const {
    return detail::stuck_walk_cost(ceiling_, hops_, node);
  }
  double route_violation(const std::vector<int>& edges) const { return tar_cost(edges, g_, budget_, w_).violation; }

 private:
  const MissionGraph& g_;
  double budget_;
  TarWeights w_;
  std::vector<int> hops_;
  double ceiling_;
  std::vector<double> eta_;
};

struct TarSolution {
  Route route;
  double cost = 0.0;
  double violation = 0.0;
  RunTrace trace;
  double cpu_time = 0.0;  // wall seconds spent in the planner
  Algorithm algorithm = Algorithm::GA;
  std::uint64_t seed = 0;
};

/// Plans the mission route. Throws NoRoute when the destination cannot be
/// reached or no complete route turned up within the iteration budget.
inline TarSolution solve_tar(const MissionGraph& g, double budget, const OptimizerConfig& cfg, const TarWeights& w = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  w.validate();
  require(budget > 0, ErrorCode::InvalidInput, "time budget must be positive");
  require(g.start() != g.dest(), ErrorCode::InvalidEndpoint, "start and destination coincide");
  const auto hops = hops_to(g, g.dest());
  if (hops[static_cast<std::size_t>(g.start())] < 0) fail(ErrorCode::NoRoute, "destination unreachable from start");

  TarSolution sol;
  sol.algorithm = cfg.algorithm;
  sol.seed = cfg.seed;
  if (cfg.algorithm == Algorithm::ACO) {
    TarColony colony(g, budget, w);
    sol.trace = optimize_colony(colony, cfg);
    if (sol.trace.best_nodes.empty()) fail(ErrorCode::NoRoute, "no complete route found");
    sol.route.nodes = sol.trace.best_nodes;
    sol.route.edges = sol.trace.best_edges;
    finish_route(sol.route, g);
  } else {
    TarProblem problem(g, budget, w);
    sol.trace = optimize(problem, cfg);
    const auto d = problem.decode(sol.trace.best_solution);
    if (d.status != DecodeStatus::Feasible) fail(ErrorCode::NoRoute, "no complete route found");
    sol.route = d.route;
  }
  const auto c = tar_cost(sol.route, g, budget, w);
  sol.cost = c.cost;
  sol.violation = c.violation;
  sol.cpu_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

inline nlohmann::json tar_solution_to_json(const TarSolution& s) {
  return {{"route", s.route.nodes},  {"T_R", s.route.time},    {"C_TAR", s.cost},
          {"Viol", s.violation},     {"cpu_s", s.cpu_time},    {"algorithm", std::string(to_string(s.algorithm))},
          {"seed", s.seed}};
}

}  // namespace armsp
