#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "armsp/opt/config.hpp"
#include "armsp/opt/population.hpp"

namespace armsp {

struct GaState {
  Population pop;  // kept sorted, best first
  std::size_t iteration = 1;
};

/// Roulette probabilities from fitness (1/(cost + 1e-9))^pressure. Computed
/// relative to the best fitness so large pressures do not overflow.
inline std::vector<double> roulette_probabilities(const std::vector<double>& costs, double pressure) {
  const double eps = 1e-9;
  double best = INFINITY;
  for (double c : costs)
    if (std::isfinite(c)) best = std::min(best, c);
  std::vector<double> p(costs.size(), 0.0);
  if (!std::isfinite(best)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(costs.size()));
    return p;
  }
  // shift so every finite cost is positive before the power transform
  const double shift = best + eps > 0 ? 0.0 : -(best) + eps;
  double sum = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!std::isfinite(costs[i])) continue;
    p[i] = std::pow((best + shift + eps) / (costs[i] + shift + eps), pressure);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

inline std::size_t roulette_spin(const std::vector<double>& probs, Rng& rng) {
  double r = rng.uniform();
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    last = i;
    r -= probs[i];
    if (r < 0) return i;
  }
  return last;
}

/// Uniform crossover: each component comes from the first parent with probability `mix`.
inline std::pair<Candidate, Candidate> uniform_crossover(const Candidate& a, const Candidate& b, double mix, Rng& rng) {
  Candidate c1 = a, c2 = b;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (rng.uniform() >= mix) std::swap(c1[k], c2[k]);
  }
  return {std::move(c1), std::move(c2)};
}

/// Swap, insertion, or inversion of component values, chosen uniformly.
inline void permutation_mutation(Candidate& x, Rng& rng) {
  if (x.size() < 2) return;
  const std::size_t op = rng.index(3);
  std::size_t i = rng.index(x.size()), j = rng.index(x.size());
  if (i == j) j = (i + 1) % x.size();
  switch (op) {
    case 0: std::swap(x[i], x[j]); break;
    case 1: {
      const double v = x[i];
      x.erase(x.begin() + static_cast<long>(i));
      x.insert(x.begin() + static_cast<long>(j), v);
      break;
    }
    default:
      if (i > j) std::swap(i, j);
      std::reverse(x.begin() + static_cast<long>(i), x.begin() + static_cast<long>(j) + 1);
  }
}

inline void perturbation_mutation(Candidate& x, const Bounds& b, double sigma, Rng& rng) {
  const std::size_t k = rng.index(x.size());
  x[k] = b.clamp(k, x[k] + rng.normal(0.0, sigma * b.width(k)));
}

/// Families of two roulette-selected parents produce two children; the best two
/// of each family (incumbents first on ties) take the parents' slots. Children
/// that merely copy a parent are not counted as family members.
template <class Eval>
GaState ga_update(GaState s, const Bounds& b, const OptimizerConfig& cfg, Rng& rng, Eval&& eval) {
  const auto& p = cfg.ga;
  Population& pop = s.pop;
  const std::size_t n = pop.size();
  const auto probs = roulette_probabilities(pop.cost, p.selection_pressure);
  const std::size_t families = (n + 1) / 2;
  std::vector<std::pair<std::size_t, std::size_t>> parents(families);
  std::vector<Candidate> children;
  children.reserve(2 * families);
  for (auto& [a, c] : parents) {
    a = roulette_spin(probs, rng);
    c = roulette_spin(probs, rng);
    Candidate k1 = pop.x[a], k2 = pop.x[c];
    if (rng.uniform() < p.crossover_rate) std::tie(k1, k2) = uniform_crossover(pop.x[a], pop.x[c], p.uniform_mix, rng);
    for (Candidate* k : {&k1, &k2}) {
      if (rng.uniform() < p.mutation_rate) {
        if (p.mutation == GaMutation::Permutation)
          permutation_mutation(*k, rng);
        else
          perturbation_mutation(*k, b, p.mutation_sigma, rng);
      }
    }
    children.push_back(std::move(k1));
    children.push_back(std::move(k2));
  }
  const auto costs = eval(children);
  for (std::size_t f = 0; f < families; ++f) {
    const auto [a, c] = parents[f];
    struct Member { const Candidate* x; double cost; };
    std::vector<Member> family{{&pop.x[a], pop.cost[a]}};
    if (c != a) family.push_back({&pop.x[c], pop.cost[c]});
    for (std::size_t k = 2 * f; k < 2 * f + 2; ++k) {
      // a child identical to a parent brings nothing new and must not crowd it out
      if (children[k] == pop.x[a] || children[k] == pop.x[c]) continue;
      family.push_back({&children[k], costs[k]});
    }
    std::stable_sort(family.begin(), family.end(), [](const Member& u, const Member& v) { return u.cost < v.cost; });
    Candidate first = *family[0].x;
    const double first_cost = family[0].cost;
    if (c != a) {
      Candidate second = *family[1].x;
      const double second_cost = family[1].cost;
      pop.x[c] = std::move(second);
      pop.cost[c] = second_cost;
    }
    pop.x[a] = std::move(first);
    pop.cost[a] = first_cost;
  }
  pop.sort();
  ++s.iteration;
  return s;
}

}  // namespace armsp
