#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/graph/mission_graph.hpp"
#include "armsp/graph/route.hpp"

namespace armsp {

/// How edge weights enter the route cost.
enum class WeightTerm {
  InverseSum,    // phi2 / sum(w)
  SumOfInverse,  // phi2 * sum((t_e / budget) / w_e)
};

/// Participation weights of the route cost. `time_weight` defaults to 1/budget.
struct TarWeights {
  std::optional<double> time_weight;
  double weight_term = 1.0;
  double priority_scale = 1.0;
  double risk_scale = 1.0;
  double penalty = 10.0;
  WeightTerm term = WeightTerm::InverseSum;

  double phi1(double budget) const { return time_weight ? *time_weight : 1.0 / budget; }

  void validate() const {
    require(!time_weight || *time_weight > 0, ErrorCode::InvalidInput, "time weight must be positive");
    require(weight_term > 0 && priority_scale > 0 && risk_scale > 0 && penalty > 0, ErrorCode::InvalidInput,
            "route cost weights must be positive");
  }
};

struct TarCost {
  double cost = 0.0;
  double violation = 0.0;
  double time = 0.0;          // T_R
  double total_weight = 0.0;  // with the priority/risk scales applied
};

/// Relative overshoot of the route time past the budget.
inline double tar_violation(double route_time, double budget) {
  return route_time > budget ? 1.0 - budget / route_time : 0.0;
}

inline double tar_edge_weight(const MissionGraph& g, int e, const TarWeights& w) {
  const Task* t = g.edge_task(e);
  return t ? (w.priority_scale * t->priority) / (w.risk_scale * t->risk) : 1.0;
}

/// Cost from per-edge times and weights; used both for planned routes and for
/// routes whose edge times were realised by the path planner.
inline TarCost tar_cost_terms(std::span<const double> times, std::span<const double> weights, double budget,
                              const TarWeights& w) {
  require(times.size() == weights.size(), ErrorCode::InvalidInput, "edge time/weight size mismatch");
  require(budget > 0, ErrorCode::InvalidInput, "time budget must be positive");
  const double phi1 = w.phi1(budget);
  TarCost c;
  if (times.empty()) {
    c.cost = phi1 * budget;
    return c;
  }
  double weight_part = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    c.time += times[k];
    c.total_weight += weights[k];
    if (w.term == WeightTerm::SumOfInverse) weight_part += (times[k] / budget) / weights[k];
  }
  if (w.term == WeightTerm::InverseSum) weight_part = 1.0 / c.total_weight;
  c.violation = tar_violation(c.time, budget);
  c.cost = (phi1 * std::abs(c.time - budget) + w.weight_term * weight_part) * (1.0 + w.penalty * c.violation);
  return c;
}

inline TarCost tar_cost(const std::vector<int>& edges, const MissionGraph& g, double budget, const TarWeights& w) {
  std::vector<double> times, weights;
  times.reserve(edges.size());
  weights.reserve(edges.size());
  for (int e : edges) {
    require(e >= 0 && e < int(g.edge_count()), ErrorCode::InvalidRoute, "edge id out of range");
    times.push_back(g.edge(e).time);
    weights.push_back(tar_edge_weight(g, e, w));
  }
  return tar_cost_terms(times, weights, budget, w);
}

inline TarCost tar_cost(const Route& r, const MissionGraph& g, double budget, const TarWeights& w) {
  return tar_cost(r.edges, g, budget, w);
}

inline double min_edge_weight(const MissionGraph& g, const TarWeights& w) {
  double m = INFINITY;
  for (std::size_t e = 0; e < g.edge_count(); ++e) m = std::min(m, tar_edge_weight(g, int(e), w));
  return m;
}

/// Upper bound on the cost of any simple route in `g`. Walks that get stuck are
/// charged a multiple of it so they always rank behind every real route.
inline double tar_cost_ceiling(const MissionGraph& g, double budget, const TarWeights& w) {
  double all_time = 0.0, inverse_sum = 0.0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    all_time += g.edge(int(e)).time;
    inverse_sum += (g.edge(int(e)).time / budget) / tar_edge_weight(g, int(e), w);
  }
  const double time_part = w.phi1(budget) * std::max(budget, all_time - budget);
  const double weight_part =
      w.term == WeightTerm::InverseSum ? 1.0 / std::max(1e-300, min_edge_weight(g, w)) : inverse_sum;
  return (time_part + w.weight_term * weight_part) * (1.0 + w.penalty);
}

}  // namespace armsp
