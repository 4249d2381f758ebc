#pragma once

#include <cmath>
#include <vector>

#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

struct BboState {
  Population habitats;  // kept sorted, best first
  std::size_t iteration = 1;
};

struct BboRates {
  std::vector<double> immigration;  // lambda, by rank (0 = best)
  std::vector<double> emigration;   // mu, by rank
};

/// Linear migration model over species count S = n - rank.
inline BboRates bbo_rates(std::size_t n, double max_emigration, double max_immigration) {
  BboRates r;
  for (std::size_t rank = 0; rank < n; ++rank) {
    const double s = static_cast<double>(n - rank) / static_cast<double>(n);
    r.immigration.push_back(max_immigration * (1.0 - s));
    r.emigration.push_back(max_emigration * s);
  }
  return r;
}

/// Steady-state species probabilities of the linear birth-death model, by rank.
/// P(S) is proportional to C(n, S) (I/E)^S; computed in log space.
inline std::vector<double> bbo_species_probabilities(std::size_t n, double max_emigration, double max_immigration) {
  std::vector<double> logp(n);
  const double ratio = max_emigration > 0 && max_immigration > 0 ? std::log(max_immigration / max_emigration) : 0.0;
  double top = -INFINITY;
  for (std::size_t rank = 0; rank < n; ++rank) {
    const double s = static_cast<double>(n - rank);
    const double nn = static_cast<double>(n);
    logp[rank] = std::lgamma(nn + 1) - std::lgamma(s + 1) - std::lgamma(nn - s + 1) + s * ratio;
    top = std::max(top, logp[rank]);
  }
  std::vector<double> p(n);
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += (p[i] = std::exp(logp[i] - top));
  for (auto& v : p) v /= sum;
  return p;
}

/// Per-habitat mutation probability m_max (1 - P/P_max), clamped to [0, 1].
inline std::vector<double> bbo_mutation_rates(std::size_t n, const BboParams& p) {
  const auto prob = bbo_species_probabilities(n, p.max_emigration, p.max_immigration);
  const double pmax = *std::max_element(prob.begin(), prob.end());
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = std::clamp(p.mutation_max * (1.0 - prob[i] / pmax), 0.0, 1.0);
  return m;
}

namespace detail {
inline std::size_t roulette_pick(const std::vector<double>& weights, std::size_t exclude, Rng& rng) {
  double total = 0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (j != exclude) total += weights[j];
  if (total <= 0) {
    std::size_t j = rng.index(weights.size() - 1);
    return j >= exclude ? j + 1 : j;
  }
  double r = rng.uniform() * total;
  std::size_t last = exclude == 0 ? 1 : 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (j == exclude || weights[j] <= 0) continue;
    last = j;
    r -= weights[j];
    if (r < 0) return j;
  }
  return last;
}
}  // namespace detail

/// Migration then mutation on a rank-sorted population, evaluation, and
/// re-insertion of the previous elites over the worst newcomers.
template <class Eval>
BboState bbo_update(BboState s, const Bounds& b, const OptimizerConfig& cfg, Rng& rng, Eval&& eval) {
  const auto& p = cfg.bbo;
  Population& old = s.habitats;
  const std::size_t n = old.size();
  const auto rates = bbo_rates(n, p.max_emigration, p.max_immigration);
  const auto mutation = bbo_mutation_rates(n, p);

  Population next;
  next.x = old.x;
  for (std::size_t i = 0; i < n; ++i) {
    auto& h = next.x[i];
    if (n > 1) {
      for (std::size_t k = 0; k < h.size(); ++k) {
        if (rng.uniform() < rates.immigration[i]) {
          const std::size_t j = detail::roulette_pick(rates.emigration, i, rng);
          h[k] = old.x[j][k];
        }
      }
    }
    for (std::size_t k = 0; k < h.size(); ++k)
      if (rng.uniform() < mutation[i]) h[k] = b.clamp(k, h[k] + rng.normal(0.0, p.mutation_sigma * b.width(k)));
  }
  next.cost = eval(next.x);
  next.sort();

  const std::size_t elites = std::min(p.elites, n);
  for (std::size_t e = 0; e < elites; ++e) {
    const std::size_t slot = n - 1 - e;
    if (old.cost[e] < next.cost[slot]) {
      next.x[slot] = old.x[e];
      next.cost[slot] = old.cost[e];
    }
  }
  next.sort();
  s.habitats = std::move(next);
  ++s.iteration;
  return s;
}

}  // namespace armsp
