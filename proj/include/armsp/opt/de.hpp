#pragma once

#include <vector>

#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

struct DeState {
  Population agents;
  std::size_t iteration = 1;
};

struct DeOffspring {
  std::size_t r1 = 0, r2 = 0, r3 = 0;
  Candidate mutant;
  Candidate trial;
};

/// Mutant and binomial-crossover trial for agent i. Draw order: r1, r2, r3,
/// per-component scale factors, blending weights (if enabled), the forced
/// index, then one crossover draw per component.
inline DeOffspring de_offspring(const Population& pop, std::size_t i, const Bounds& b, const DeParams& p, Rng& rng) {
  const std::size_t n = pop.size();
  require(n >= 4, ErrorCode::InsufficientPopulation, "differential evolution needs at least 4 agents");
  DeOffspring o;
  do o.r1 = rng.index(n); while (o.r1 == i);
  do o.r2 = rng.index(n); while (o.r2 == i || o.r2 == o.r1);
  do o.r3 = rng.index(n); while (o.r3 == i || o.r3 == o.r1 || o.r3 == o.r2);
  const auto& x1 = pop.x[o.r1];
  const auto& x2 = pop.x[o.r2];
  const auto& x3 = pop.x[o.r3];
  const std::size_t d = b.size();
  std::vector<double> scale(d);
  for (auto& s : scale) s = rng.uniform(p.scale_min, p.scale_max);
  Candidate base = x3;
  if (p.donor_blending) {
    const double l1 = rng.uniform(), l2 = rng.uniform(), l3 = rng.uniform();
    const double sum = l1 + l2 + l3;
    if (sum > 0)
      for (std::size_t k = 0; k < d; ++k) base[k] = (l1 * x1[k] + l2 * x2[k] + l3 * x3[k]) / sum;
  }
  o.mutant.resize(d);
  for (std::size_t k = 0; k < d; ++k) o.mutant[k] = b.clamp(k, base[k] + scale[k] * (x1[k] - x2[k]));
  const std::size_t forced = rng.index(d);
  o.trial = pop.x[i];
  for (std::size_t k = 0; k < d; ++k)
    if (rng.uniform() <= p.crossover || k == forced) o.trial[k] = o.mutant[k];
  return o;
}

/// Greedy one-to-one replacement: a trial survives when it is no worse.
template <class Eval>
DeState de_update(DeState s, const Bounds& b, const OptimizerConfig& cfg, Rng& rng, Eval&& eval) {
  const std::size_t n = s.agents.size();
  std::vector<Candidate> trials(n);
  for (std::size_t i = 0; i < n; ++i) trials[i] = de_offspring(s.agents, i, b, cfg.de, rng).trial;
  const auto costs = eval(trials);
  for (std::size_t i = 0; i < n; ++i) {
    if (costs[i] <= s.agents.cost[i]) {
      s.agents.x[i] = std::move(trials[i]);
      s.agents.cost[i] = costs[i];
    }
  }
  ++s.iteration;
  return s;
}

}  // namespace armsp
