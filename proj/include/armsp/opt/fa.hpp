#pragma once

#include <cmath>
#include <vector>

#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

struct FaState {
  Population swarm;
  double alpha = 0.4;  // current randomness scale
  std::size_t iteration = 1;
};

inline FaState fa_init(Population swarm, const FaParams& p, std::size_t schedule_offset = 0) {
  FaState s;
  s.swarm = std::move(swarm);
  s.alpha = p.randomness * std::pow(p.damping, static_cast<double>(schedule_offset));
  return s;
}

/// Moves every firefly toward each brighter one, using positions and costs from
/// the start of the iteration. Distances are normalised by the bound diagonal
/// and the random step is scaled per component by the bound width. Each
/// attraction step is scaled component-wise by a U(0,1) draw. Draw order: for
/// each brighter j, for each component, the attraction draw then the random step.
template <class Eval>
FaState fa_update(FaState s, const Bounds& b, const OptimizerConfig& cfg, Rng& rng, Eval&& eval) {
  const auto& p = cfg.fa;
  const Population old = s.swarm;
  const std::size_t n = old.size();
  const double diag = std::max(b.diagonal(), 1e-300);
  std::vector<Candidate> moved;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < n; ++i) {
    Candidate xi = old.x[i];
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(old.cost[j] < old.cost[i])) continue;
      any = true;
      double l2 = 0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double d = (old.x[j][k] - xi[k]) / diag;
        l2 += d * d;
      }
      const double beta = p.attraction * std::exp(-p.absorption * l2);
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const double pull = beta * rng.uniform() * (old.x[j][k] - xi[k]);
        const double step = s.alpha * (rng.uniform() - 0.5) * b.width(k);
        xi[k] = b.clamp(k, xi[k] + pull + step);
      }
    }
    if (any) {
      moved.push_back(std::move(xi));
      owner.push_back(i);
    }
  }
  const auto costs = eval(moved);
  if (p.survivor_merge) {
    Population pool = old;
    for (std::size_t m = 0; m < moved.size(); ++m) {
      pool.x.push_back(moved[m]);
      pool.cost.push_back(costs[m]);
    }
    pool.sort();
    pool.x.resize(n);
    pool.cost.resize(n);
    s.swarm = std::move(pool);
  } else {
    for (std::size_t m = 0; m < moved.size(); ++m) {
      s.swarm.x[owner[m]] = moved[m];
      s.swarm.cost[owner[m]] = costs[m];
    }
  }
  s.alpha *= p.damping;
  ++s.iteration;
  return s;
}

}  // namespace armsp
