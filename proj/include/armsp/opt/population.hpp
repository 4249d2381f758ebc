#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numeric>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/parallel.hpp"
#include "armsp/core/rng.hpp"

namespace armsp {

using Candidate = std::vector<double>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  double width(std::size_t k) const { return upper[k] - lower[k]; }

  double clamp(std::size_t k, double v) const { return std::clamp(v, lower[k], upper[k]); }

  double diagonal() const {
    double s = 0;
    for (std::size_t k = 0; k < size(); ++k) s += width(k) * width(k);
    return std::sqrt(s);
  }

  static Bounds uniform(std::size_t dim, double lo, double hi) {
    return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }
};

struct Population {
  std::vector<Candidate> x;
  std::vector<double> cost;

  std::size_t size() const { return x.size(); }

  /// Index of the lowest cost; ties go to the lower index.
  std::size_t best() const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < cost.size(); ++i)
      if (cost[i] < cost[b]) b = i;
    return b;
  }

  /// Stable reorder by cost, best first.
  void sort() {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
    Population sorted;
    for (auto i : order) {
      sorted.x.push_back(std::move(x[i]));
      sorted.cost.push_back(cost[i]);
    }
    *this = std::move(sorted);
  }
};

/// Non-finite costs are ranked strictly worst.
inline double sanitize_cost(double c) { return std::isfinite(c) ? c : std::numeric_limits<double>::infinity(); }

template <class P>
concept ContinuousProblem = requires(const P& p, const Candidate& x) {
  { p.bounds() } -> std::convertible_to<const Bounds&>;
  { p.evaluate(x) } -> std::convertible_to<double>;
};

template <class P>
concept HasSampler = requires(const P& p, Rng& rng) {
  { p.sample(rng) } -> std::convertible_to<Candidate>;
};

template <class P>
concept HasViolation = requires(const P& p, const Candidate& x) {
  { p.violation(x) } -> std::convertible_to<double>;
};

template <class P>
Candidate sample_candidate(const P& problem, Rng& rng) {
  if constexpr (HasSampler<P>) {
    return problem.sample(rng);
  } else {
    const Bounds& b = problem.bounds();
    Candidate x(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) x[k] = rng.uniform(b.lower[k], b.upper[k]);
    return x;
  }
}

/// Batch evaluation; each slot is written by exactly one worker.
template <class P>
class Evaluator {
 public:
  Evaluator(const P& problem, std::size_t workers) : problem_(problem), workers_(workers) {}

  std::vector<double> operator()(const std::vector<Candidate>& xs) {
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), workers_, [&](std::size_t i) { out[i] = sanitize_cost(problem_.evaluate(xs[i])); });
    count_ += xs.size();
    return out;
  }

  std::size_t count() const { return count_; }
  const P& problem() const { return problem_; }

 private:
  const P& problem_;
  std::size_t workers_;
  std::size_t count_ = 0;
};

inline void clamp_to(const Bounds& b, Candidate& x) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = b.clamp(k, x[k]);
}

}  // namespace armsp
