#pragma once

#include <vector>

#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

struct PsoState {
  Population swarm;
  std::vector<Candidate> velocity;
  Population personal;  // personal bests, slot-aligned with swarm
  std::size_t global = 0;
  std::size_t iteration = 1;  // index of the iteration that produced this state
};

inline double pso_inertia(const PsoParams& p, std::size_t t, std::size_t t_max) {
  const double frac = t_max > 0 ? static_cast<double>(t) / static_cast<double>(t_max) : 1.0;
  return p.inertia_start + (p.inertia_end - p.inertia_start) * frac;
}

/// Starting velocities are uniform within the clamp, except for the first
/// `seeded` particles (warm-start seeds), which start at rest.
inline PsoState pso_init(Population swarm, const Bounds& b, const PsoParams& p, Rng& rng, std::size_t seeded = 0) {
  PsoState s;
  s.velocity.assign(swarm.size(), Candidate(b.size(), 0.0));
  for (std::size_t i = seeded; i < s.velocity.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      auto& v = s.velocity[i];
      const double vmax = p.velocity_clamp * b.width(k);
      v[k] = rng.uniform(-vmax, vmax);
    }
  s.personal = swarm;
  s.swarm = std::move(swarm);
  s.global = s.personal.best();
  return s;
}

/// One velocity/position step. Draw order: for each particle, for each
/// component, r1 then r2.
template <class Eval>
PsoState pso_update(PsoState s, const Bounds& b, const OptimizerConfig& cfg, Rng& rng, Eval&& eval) {
  const auto& p = cfg.pso;
  const std::size_t t = s.iteration + 1;
  const double w = pso_inertia(p, t + cfg.schedule_offset, cfg.iterations + cfg.schedule_offset);
  const Candidate g = s.personal.x[s.global];
  for (std::size_t i = 0; i < s.swarm.size(); ++i) {
    auto& x = s.swarm.x[i];
    auto& v = s.velocity[i];
    const auto& pb = s.personal.x[i];
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r1 = rng.uniform();
      const double r2 = rng.uniform();
      v[k] = w * v[k] + p.c1 * r1 * (pb[k] - x[k]) + p.c2 * r2 * (g[k] - x[k]);
      const double vmax = p.velocity_clamp * b.width(k);
      v[k] = std::clamp(v[k], -vmax, vmax);
      x[k] += v[k];
      if (x[k] < b.lower[k] || x[k] > b.upper[k]) {
        x[k] = b.clamp(k, x[k]);
        v[k] = 0.0;
      }
    }
  }
  s.swarm.cost = eval(s.swarm.x);
  for (std::size_t i = 0; i < s.swarm.size(); ++i) {
    if (s.swarm.cost[i] <= s.personal.cost[i]) {
      s.personal.x[i] = s.swarm.x[i];
      s.personal.cost[i] = s.swarm.cost[i];
    }
  }
  s.global = s.personal.best();
  s.iteration = t;
  return s;
}

}  // namespace armsp
