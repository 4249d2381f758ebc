#pragma once

#include <chrono>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "armsp/opt/aco.hpp"
#include "armsp/opt/bbo.hpp"
#include "armsp/opt/config.hpp"
#include "armsp/opt/de.hpp"
#include "armsp/opt/fa.hpp"
#include "armsp/opt/ga.hpp"
#include "armsp/opt/population.hpp"
#include "armsp/opt/pso.hpp"

namespace armsp {

/// Result of one optimizer run. Entry t of the per-iteration vectors is the
/// best-so-far after iteration t+1; the first iteration is the initial sampling.
struct RunTrace {
  Algorithm algorithm = Algorithm::PSO;
  std::uint64_t seed = 0;
  std::vector<double> best_cost;
  std::vector<double> violation;
  Candidate best_solution;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  double wall_time = 0.0;
  Population final_population;
  std::vector<int> best_nodes;  // colony runs only
  std::vector<int> best_edges;

  /// First iteration (1-based) whose best-so-far is at or below `target`; 0 if never.
  std::size_t iterations_to_reach(double target) const {
    for (std::size_t t = 0; t < best_cost.size(); ++t)
      if (best_cost[t] <= target) return t + 1;
    return 0;
  }
};

namespace detail {

template <class P>
struct TraceRecorder {
  const P& problem;
  RunTrace& trace;

  void record(const Population& pop) {
    const std::size_t b = pop.best();
    if (pop.size() > 0 && (trace.best_solution.empty() || pop.cost[b] < trace.best_value)) {
      trace.best_value = pop.cost[b];
      trace.best_solution = pop.x[b];
      current_violation = compute_violation(trace.best_solution);
    }
    trace.best_cost.push_back(trace.best_value);
    trace.violation.push_back(current_violation);
  }

  double compute_violation(const Candidate& x) const {
    if constexpr (HasViolation<P>)
      return problem.violation(x);
    else
      return 0.0;
  }

  double current_violation = 0.0;
};

}  // namespace detail

/// Runs the configured kernel on a continuous problem. `seeds` (if any) replace
/// the first members of the initial population.
template <ContinuousProblem P>
RunTrace optimize(const P& problem, const OptimizerConfig& cfg, const std::vector<Candidate>& seeds = {}) {
  cfg.validate();
  require(cfg.algorithm != Algorithm::ACO, ErrorCode::InvalidInput, "ant colony needs a graph problem");
  if (cfg.algorithm == Algorithm::DE)
    require(cfg.population >= 4, ErrorCode::InsufficientPopulation, "differential evolution needs at least 4 agents");
  const auto t0 = std::chrono::steady_clock::now();
  const Bounds& b = problem.bounds();
  Rng rng(cfg.seed);
  Evaluator<P> eval(problem, cfg.workers);
  RunTrace trace;
  trace.algorithm = cfg.algorithm;
  trace.seed = cfg.seed;
  detail::TraceRecorder<P> rec{problem, trace};

  Population pop;
  for (std::size_t i = 0; i < cfg.population; ++i) {
    if (i < seeds.size()) {
      Candidate x = seeds[i];
      require(x.size() == b.size(), ErrorCode::InvalidInput, "seed candidate has the wrong dimension");
      clamp_to(b, x);
      pop.x.push_back(std::move(x));
    } else {
      pop.x.push_back(sample_candidate(problem, rng));
    }
  }
  pop.cost = eval(pop.x);
  rec.record(pop);

  auto run = [&](auto state, auto&& step, auto&& view) {
    for (std::size_t t = 2; t <= cfg.iterations; ++t) {
      state = step(std::move(state));
      rec.record(view(state));
    }
    trace.final_population = view(state);
  };
  auto batch = [&](const std::vector<Candidate>& xs) { return eval(xs); };

  switch (cfg.algorithm) {
    case Algorithm::PSO:
      run(pso_init(pop, b, cfg.pso, rng, std::min(seeds.size(), pop.size())), [&](PsoState s) { return pso_update(std::move(s), b, cfg, rng, batch); },
          [](const PsoState& s) -> const Population& { return s.personal; });
      break;
    case Algorithm::BBO: {
      BboState s{pop, 1};
      s.habitats.sort();
      run(std::move(s), [&](BboState st) { return bbo_update(std::move(st), b, cfg, rng, batch); },
          [](const BboState& st) -> const Population& { return st.habitats; });
      break;
    }
    case Algorithm::DE:
      run(DeState{pop, 1}, [&](DeState s) { return de_update(std::move(s), b, cfg, rng, batch); },
          [](const DeState& s) -> const Population& { return s.agents; });
      break;
    case Algorithm::FA:
      run(fa_init(pop, cfg.fa, cfg.schedule_offset), [&](FaState s) { return fa_update(std::move(s), b, cfg, rng, batch); },
          [](const FaState& s) -> const Population& { return s.swarm; });
      break;
    case Algorithm::GA: {
      GaState s{pop, 1};
      s.pop.sort();
      run(std::move(s), [&](GaState st) { return ga_update(std::move(st), b, cfg, rng, batch); },
          [](const GaState& st) -> const Population& { return st.pop; });
      break;
    }
    case Algorithm::ACO:
      break;
  }
  trace.evaluations = eval.count();
  trace.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

template <class P>
concept HasRouteViolation = requires(const P& p, const std::vector<int>& edges) {
  { p.route_violation(edges) } -> std::convertible_to<double>;
};

/// Ant colony run over a graph problem.
template <AntProblem P>
RunTrace optimize_colony(const P& problem, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunTrace trace;
  trace.algorithm = Algorithm::ACO;
  trace.seed = cfg.seed;
  AcoState s = aco_init(problem.edge_count(), cfg.aco);
  double violation = 0.0;
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const double before = s.best.cost;
    s = aco_construct_and_update(problem, std::move(s), cfg, &trace.evaluations);
    if (s.best.cost < before || t == 1) {
      if constexpr (HasRouteViolation<P>) violation = s.best.complete ? problem.route_violation(s.best.edges) : 0.0;
    }
    trace.best_cost.push_back(s.best.cost);
    trace.violation.push_back(violation);
  }
  trace.best_value = s.best.cost;
  trace.best_nodes = s.best.complete ? s.best.nodes : std::vector<int>{};
  trace.best_edges = s.best.complete ? s.best.edges : std::vector<int>{};
  trace.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return trace;
}

/// CSV with columns iteration,best_cost,violation.
inline std::string trace_to_csv(const RunTrace& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,best_cost,violation\n";
  for (std::size_t t = 0; t < trace.best_cost.size(); ++t)
    out << (t + 1) << ',' << trace.best_cost[t] << ',' << (t < trace.violation.size() ? trace.violation[t] : 0.0)
        << '\n';
  return out.str();
}

}  // namespace armsp
