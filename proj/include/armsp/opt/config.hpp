#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "armsp/core/error.hpp"

namespace armsp {

enum class Algorithm { ACO, GA, BBO, PSO, DE, FA };

constexpr std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ACO: return "aco";
    case Algorithm::GA: return "ga";
    case Algorithm::BBO: return "bbo";
    case Algorithm::PSO: return "pso";
    case Algorithm::DE: return "de";
    case Algorithm::FA: return "fa";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  for (auto a : {Algorithm::ACO, Algorithm::GA, Algorithm::BBO, Algorithm::PSO, Algorithm::DE, Algorithm::FA})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

struct AcoParams {
  double initial_pheromone = 1.5;
  double pheromone_exponent = 1.5;
  double heuristic_exponent = 0.9;
  double exponent_decay = 0.99;  // both exponents, per iteration
  double evaporation = 1.8;      // pheromone divided by this each iteration
  double deposit = 0.1;
  bool relative_deposit = true;  // deposit measured against the first iteration-best cost
  double min_pheromone = 1e-4;
};

enum class GaMutation { Perturbation, Permutation };

struct GaParams {
  double crossover_rate = 0.99;
  double mutation_rate = 0.8;
  double selection_pressure = 8.0;
  double uniform_mix = 0.5;
  GaMutation mutation = GaMutation::Perturbation;
  double mutation_sigma = 0.1;  // fraction of the bound width, perturbation mode
};

struct BboParams {
  double max_emigration = 1.0;
  double max_immigration = 1.0;
  double mutation_max = 0.5;
  double mutation_sigma = 0.1;  // fraction of the bound width
  std::size_t elites = 2;
};

struct PsoParams {
  double c1 = 1.5;
  double c2 = 2.0;
  double inertia_start = 1.0;
  double inertia_end = 0.0;
  double velocity_clamp = 0.2;  // fraction of the bound width
};

struct DeParams {
  double scale_min = 0.2;
  double scale_max = 0.8;
  double crossover = 0.2;
  bool donor_blending = false;
};

struct FaParams {
  double attraction = 2.0;
  double absorption = 1.0;
  double randomness = 0.4;
  double damping = 0.96;
  bool survivor_merge = true;  // keep the best of old and moved fireflies
};

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::PSO;
  std::size_t population = 70;
  std::size_t iterations = 100;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t schedule_offset = 0;  // iterations already spent, for warm starts: PSO inertia and FA randomness resume there
  AcoParams aco;
  GaParams ga;
  BboParams bbo;
  PsoParams pso;
  DeParams de;
  FaParams fa;

  void validate() const {
    require(population >= 1, ErrorCode::InvalidInput, "population must be >= 1");
    require(iterations >= 1, ErrorCode::InvalidInput, "iterations must be >= 1");
    require(aco.evaporation > 0 && aco.initial_pheromone > 0, ErrorCode::InvalidInput, "ACO rates must be positive");
    require(ga.crossover_rate >= 0 && ga.crossover_rate <= 1 && ga.mutation_rate >= 0 && ga.mutation_rate <= 1,
            ErrorCode::InvalidInput, "GA rates must lie in [0,1]");
    require(bbo.mutation_max >= 0 && bbo.mutation_max <= 1, ErrorCode::InvalidInput, "BBO mutation must lie in [0,1]");
    require(de.crossover >= 0 && de.crossover <= 1 && de.scale_min <= de.scale_max, ErrorCode::InvalidInput,
            "DE parameters out of range");
    require(fa.damping > 0 && fa.damping <= 1, ErrorCode::InvalidInput, "FA damping must lie in (0,1]");
  }
};

/// Tuned blocks used by the route planner and the path planner.
inline OptimizerConfig route_planner_defaults(Algorithm a) {
  OptimizerConfig c;
  c.algorithm = a;
  c.population = 70;
  c.iterations = 100;
  c.ga.mutation = GaMutation::Permutation;
  c.bbo.mutation_max = 0.5;
  c.pso = PsoParams{1.5, 2.0, 1.0, 0.0, 0.2};
  return c;
}

inline OptimizerConfig path_planner_defaults(Algorithm a) {
  OptimizerConfig c;
  c.algorithm = a;
  c.population = 100;
  c.iterations = 100;
  c.bbo.mutation_max = 0.1;
  c.bbo.mutation_sigma = 0.05;
  c.pso = PsoParams{2.0, 2.0, 1.4, 0.5, 0.1};
  c.de = DeParams{0.2, 0.8, 0.2, false};
  c.fa = FaParams{2.0, 1.0, 0.4, 0.96, true};
  return c;
}

}  // namespace armsp
