#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "armsp/opt/optimize.hpp"

using namespace armsp;

namespace {

struct Sphere {
  Bounds b = Bounds::uniform(3, -5.0, 5.0);
  const Bounds& bounds() const { return b; }
  double evaluate(const Candidate& x) const {
    double s = 0;
    for (double v : x) s += v * v;
    return s;
  }
};

struct Shifted {  // minimum 0 at (1, 2, ..., d)
  Bounds b;
  explicit Shifted(std::size_t d) : b(Bounds::uniform(d, -10.0, 10.0)) {}
  const Bounds& bounds() const { return b; }
  double evaluate(const Candidate& x) const {
    double s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - double(k + 1)) * (x[k] - double(k + 1));
    return s;
  }
  double violation(const Candidate& x) const { return x[0] > 0 ? 0.0 : -x[0]; }
};

struct Rastrigin {
  Bounds b = Bounds::uniform(4, -5.12, 5.12);
  const Bounds& bounds() const { return b; }
  double evaluate(const Candidate& x) const {
    double s = 10.0 * double(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2 * M_PI * v);
    return s;
  }
};

struct NanSometimes {
  Bounds b = Bounds::uniform(2, -1.0, 1.0);
  const Bounds& bounds() const { return b; }
  double evaluate(const Candidate& x) const { return x[0] > 0.5 ? std::nan("") : x[0] * x[0] + x[1] * x[1]; }
};

OptimizerConfig config(Algorithm a, std::size_t pop = 100, std::size_t iters = 100, std::uint64_t seed = 1) {
  OptimizerConfig c = path_planner_defaults(a);
  c.population = pop;
  c.iterations = iters;
  c.seed = seed;
  return c;
}

const Algorithm kContinuous[] = {Algorithm::PSO, Algorithm::BBO, Algorithm::DE, Algorithm::FA, Algorithm::GA};

// Small graph for the colony: two routes 0-1-3 and 0-2-3 plus a dead end 0-4.
struct Diamond {
  struct A { int node; int edge; };
  std::vector<std::vector<A>> adj{{{1, 0}, {2, 1}, {4, 4}}, {{0, 0}, {3, 2}}, {{0, 1}, {3, 3}}, {{1, 2}, {2, 3}}, {{0, 4}}};
  std::vector<double> len{1, 3, 1, 3, 1};
  std::size_t node_count() const { return 5; }
  std::size_t edge_count() const { return 5; }
  int start() const { return 0; }
  int dest() const { return 3; }
  const std::vector<A>& arcs(int n) const { return adj[std::size_t(n)]; }
  double heuristic(int e) const { return 1.0 / len[std::size_t(e)]; }
  double route_cost(const std::vector<int>&, const std::vector<int>& edges) const {
    double s = 0;
    for (int e : edges) s += len[std::size_t(e)];
    return s;
  }
  double stuck_cost(const std::vector<int>&, const std::vector<int>&, int) const { return 1000.0; }
};

}  // namespace

TEST(Optimize, SingleCandidateSingleIterationReturnsTheSample) {
  Sphere p;
  for (auto a : {Algorithm::PSO, Algorithm::BBO, Algorithm::FA, Algorithm::GA}) {
    auto cfg = config(a, 1, 1, 5);
    auto tr = optimize(p, cfg);
    Rng rng(5);
    Candidate x(3);
    for (auto& v : x) v = rng.uniform(-5, 5);
    ASSERT_EQ(tr.best_cost.size(), 1u);
    EXPECT_EQ(tr.best_solution, x);
    EXPECT_EQ(tr.best_value, p.evaluate(x));
    EXPECT_EQ(tr.evaluations, 1u);
  }
}

TEST(Optimize, SphereReachesOneHundredthWithEveryKernel) {
  Sphere p;
  for (auto a : kContinuous) {
    auto tr = optimize(p, config(a));
    EXPECT_LT(tr.best_value, 1e-2) << to_string(a);
    EXPECT_EQ(tr.best_cost.size(), 100u);
  }
}

TEST(Optimize, ConvergenceTracesAreMonotone) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (auto a : kContinuous) {
      auto tr1 = optimize(Rastrigin{}, config(a, 30, 40, seed));
      auto tr2 = optimize(Shifted(6), config(a, 30, 40, seed));
      for (const auto* tr : {&tr1, &tr2})
        for (std::size_t t = 1; t < tr->best_cost.size(); ++t) ASSERT_LE(tr->best_cost[t], tr->best_cost[t - 1]);
    }
  }
}

TEST(Optimize, SameSeedSameTraceRegardlessOfWorkers) {
  for (auto a : kContinuous) {
    auto c1 = config(a, 40, 30, 77);
    auto c4 = c1;
    c4.workers = 4;
    auto t1 = optimize(Shifted(5), c1);
    auto t4 = optimize(Shifted(5), c4);
    EXPECT_EQ(t1.best_cost, t4.best_cost) << to_string(a);
    EXPECT_EQ(t1.best_solution, t4.best_solution);
  }
}

TEST(Optimize, NonFiniteCostsRankWorst) {
  for (auto a : kContinuous) {
    auto tr = optimize(NanSometimes{}, config(a, 20, 20, 3));
    EXPECT_TRUE(std::isfinite(tr.best_value));
    EXPECT_LE(tr.best_solution[0], 0.5);
  }
}

TEST(Optimize, ViolationColumnFollowsBest) {
  auto tr = optimize(Shifted(3), config(Algorithm::DE, 20, 30, 9));
  ASSERT_EQ(tr.violation.size(), tr.best_cost.size());
  EXPECT_EQ(tr.violation.back(), Shifted(3).violation(tr.best_solution));
  const auto csv = trace_to_csv(tr);
  EXPECT_EQ(csv.substr(0, 31), "iteration,best_cost,violation\n1");
}

TEST(Optimize, SeedsEnterTheInitialPopulation) {
  Shifted p(3);
  auto tr = optimize(p, config(Algorithm::PSO, 10, 1, 1), {{1.0, 2.0, 3.0}});
  EXPECT_EQ(tr.best_value, 0.0);
  EXPECT_EQ(tr.iterations_to_reach(0.0), 1u);
}

TEST(Optimize, DeNeedsFourAgents) {
  EXPECT_THROW(optimize(Sphere{}, config(Algorithm::DE, 3, 5)), Error);
}

// ---- PSO -------------------------------------------------------------------

TEST(Pso, ZeroCoefficientsFreezePositions) {
  Sphere p;
  Rng rng(1);
  Population pop;
  for (int i = 0; i < 4; ++i) pop.x.push_back(sample_candidate(p, rng));
  pop.cost.assign(4, 1.0);
  auto cfg = config(Algorithm::PSO, 4, 10);
  cfg.pso = PsoParams{0.0, 0.0, 0.0, 0.0, 0.2};
  auto s = pso_init(pop, p.bounds(), cfg.pso, rng);
  auto before = s.swarm.x;
  s = pso_update(std::move(s), p.bounds(), cfg, rng, [&](const std::vector<Candidate>& xs) {
    return std::vector<double>(xs.size(), 1.0);
  });
  EXPECT_EQ(s.swarm.x, before);
}

TEST(Pso, AtPersonalBestWithoutSocialTermVelocityScalesByInertia) {
  Bounds b = Bounds::uniform(2, -100, 100);
  PsoState s;
  s.swarm.x = {{1.0, 2.0}};
  s.swarm.cost = {5.0};
  s.personal = s.swarm;
  s.velocity = {{0.3, -0.4}};
  auto cfg = config(Algorithm::PSO, 1, 10);
  cfg.pso = PsoParams{1.7, 0.0, 0.6, 0.6, 1.0};
  Rng rng(3);
  auto next = pso_update(s, b, cfg, rng, [](const std::vector<Candidate>& xs) { return std::vector<double>(xs.size(), 9.0); });
  EXPECT_DOUBLE_EQ(next.velocity[0][0], 0.6 * 0.3);
  EXPECT_DOUBLE_EQ(next.velocity[0][1], 0.6 * -0.4);
}

TEST(Pso, TwoParticleStepMatchesHandArithmetic) {
  Bounds b = Bounds::uniform(2, -10, 10);
  PsoState s;
  s.swarm.x = {{0.0, 1.0}, {2.0, -1.0}};
  s.swarm.cost = {3.0, 1.0};
  s.personal.x = {{0.5, 0.5}, {2.0, -1.0}};
  s.personal.cost = {2.0, 1.0};
  s.global = 1;
  s.velocity = {{0.1, 0.2}, {-0.3, 0.0}};
  s.iteration = 4;
  auto cfg = config(Algorithm::PSO, 2, 10);
  cfg.pso = PsoParams{1.5, 2.0, 1.0, 0.0, 10.0};
  const double w = (10.0 - 5.0) / 10.0;
  Rng draws(21);
  Candidate x_expected[2], v_expected[2];
  for (int i = 0; i < 2; ++i) {
    v_expected[i] = s.velocity[i];
    x_expected[i] = s.swarm.x[i];
    for (int k = 0; k < 2; ++k) {
      const double r1 = draws.uniform(), r2 = draws.uniform();
      v_expected[i][k] = w * s.velocity[i][k] + 1.5 * r1 * (s.personal.x[i][k] - s.swarm.x[i][k]) +
                         2.0 * r2 * (s.personal.x[1][k] - s.swarm.x[i][k]);
      x_expected[i][k] = s.swarm.x[i][k] + v_expected[i][k];
    }
  }
  Rng rng(21);
  auto next = pso_update(s, b, cfg, rng, [](const std::vector<Candidate>& xs) {
    std::vector<double> c;
    for (const auto& x : xs) c.push_back(x[0] * x[0] + x[1] * x[1]);
    return c;
  });
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      EXPECT_DOUBLE_EQ(next.velocity[i][k], v_expected[i][k]);
      EXPECT_DOUBLE_EQ(next.swarm.x[i][k], x_expected[i][k]);
    }
  EXPECT_EQ(next.iteration, 5u);
}

// ---- BBO -------------------------------------------------------------------

TEST(Bbo, RatesSumToEmigrationForSingleHabitat) {
  auto r = bbo_rates(1, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(r.immigration[0] + r.emigration[0], 1.0);
  auto r5 = bbo_rates(5, 0.8, 0.8);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(r5.immigration[i] + r5.emigration[i], 0.8);
}

TEST(Bbo, BetterRankMeansMoreEmigrationLessImmigration) {
  auto r = bbo_rates(10, 1.0, 1.0);
  EXPECT_EQ(r.immigration[0], 0.0);
  EXPECT_EQ(r.emigration[0], 1.0);
  for (std::size_t i = 1; i < 10; ++i) {
    EXPECT_LT(r.emigration[i], r.emigration[i - 1]);
    EXPECT_GT(r.immigration[i], r.immigration[i - 1]);
  }
}

TEST(Bbo, WithoutMutationOnlyMigratedValuesAppear) {
  Sphere p;
  Rng rng(4);
  BboState s;
  for (int i = 0; i < 8; ++i) s.habitats.x.push_back(sample_candidate(p, rng));
  s.habitats.cost.clear();
  for (auto& x : s.habitats.x) s.habitats.cost.push_back(p.evaluate(x));
  s.habitats.sort();
  auto cfg = config(Algorithm::BBO, 8, 10);
  cfg.bbo.mutation_max = 0.0;
  cfg.bbo.elites = 0;
  const auto before = s.habitats.x;
  auto next = bbo_update(s, p.bounds(), cfg, rng, [&](const std::vector<Candidate>& xs) {
    std::vector<double> c;
    for (const auto& x : xs) c.push_back(p.evaluate(x));
    return c;
  });
  for (const auto& h : next.habitats.x)
    for (std::size_t k = 0; k < 3; ++k) {
      bool found = false;
      for (const auto& o : before) found |= o[k] == h[k];
      EXPECT_TRUE(found);
    }
  const auto m = bbo_mutation_rates(8, cfg.bbo);
  for (double v : m) EXPECT_EQ(v, 0.0);
}

TEST(Bbo, SpeciesProbabilitiesAreNormalised) {
  auto p = bbo_species_probabilities(70, 1.0, 1.0);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  auto m = bbo_mutation_rates(70, BboParams{});
  for (double v : m) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 0.5);
  }
  EXPECT_GT(m.front(), m[35]);
}

// ---- DE --------------------------------------------------------------------

TEST(De, ZeroScaleGivesThirdVector) {
  Rng rng(5);
  Population pop;
  for (int i = 0; i < 6; ++i) pop.x.push_back({double(i), double(10 * i)});
  pop.cost.assign(6, 0.0);
  DeParams p{0.0, 0.0, 0.2, false};
  auto o = de_offspring(pop, 2, Bounds::uniform(2, -100, 100), p, rng);
  EXPECT_NE(o.r1, 2u);
  EXPECT_NE(o.r2, o.r1);
  EXPECT_NE(o.r3, o.r2);
  EXPECT_EQ(o.mutant, pop.x[o.r3]);
}

TEST(De, FullCrossoverCopiesMutant) {
  Rng rng(6);
  Population pop;
  for (int i = 0; i < 6; ++i) pop.x.push_back({double(i), double(-i), 0.5 * i});
  pop.cost.assign(6, 0.0);
  DeParams p{0.5, 0.5, 1.0, false};
  for (std::size_t i = 0; i < 6; ++i) {
    auto o = de_offspring(pop, i, Bounds::uniform(3, -100, 100), p, rng);
    EXPECT_EQ(o.trial, o.mutant);
  }
}

TEST(De, SelectionNeverWorsensBest) {
  Rastrigin p;
  Rng rng(7);
  DeState s;
  for (int i = 0; i < 12; ++i) {
    s.agents.x.push_back(sample_candidate(p, rng));
    s.agents.cost.push_back(p.evaluate(s.agents.x.back()));
  }
  auto cfg = config(Algorithm::DE, 12, 10);
  for (int t = 0; t < 20; ++t) {
    const double before = s.agents.cost[s.agents.best()];
    s = de_update(std::move(s), p.bounds(), cfg, rng, [&](const std::vector<Candidate>& xs) {
      std::vector<double> c;
      for (const auto& x : xs) c.push_back(p.evaluate(x));
      return c;
    });
    EXPECT_LE(s.agents.cost[s.agents.best()], before);
    for (const auto& x : s.agents.x)
      for (double v : x) {
        EXPECT_GE(v, -5.12);
        EXPECT_LE(v, 5.12);
      }
  }
}

// ---- FA --------------------------------------------------------------------

namespace {
std::vector<double> zero_eval(const std::vector<Candidate>& xs) { return std::vector<double>(xs.size(), 0.0); }
}  // namespace

TEST(Fa, CoincidentFirefliesWithoutRandomnessStayPut) {
  FaState s;
  s.swarm.x = {{1.0, 1.0}, {1.0, 1.0}};
  s.swarm.cost = {2.0, 1.0};
  s.alpha = 0.0;
  auto cfg = config(Algorithm::FA, 2, 10);
  cfg.fa.survivor_merge = false;
  Rng rng(8);
  auto next = fa_update(s, Bounds::uniform(2, -5, 5), cfg, rng, zero_eval);
  EXPECT_EQ(next.swarm.x[0], (Candidate{1.0, 1.0}));
  EXPECT_EQ(next.swarm.x[1], (Candidate{1.0, 1.0}));
}

TEST(Fa, InfiniteAbsorptionStopsAttraction) {
  FaState s;
  s.swarm.x = {{-3.0, 2.0}, {4.0, 1.0}};
  s.swarm.cost = {2.0, 1.0};
  s.alpha = 0.0;
  auto cfg = config(Algorithm::FA, 2, 10);
  cfg.fa.absorption = INFINITY;
  cfg.fa.survivor_merge = false;
  Rng rng(9);
  auto next = fa_update(s, Bounds::uniform(2, -5, 5), cfg, rng, zero_eval);
  EXPECT_EQ(next.swarm.x, s.swarm.x);
}

TEST(Fa, RandomnessDecaysGeometrically) {
  FaState s;
  s.swarm.x = {{0.0}, {1.0}, {2.0}};
  s.swarm.cost = {0.0, 1.0, 4.0};
  s.alpha = 0.4;
  auto cfg = config(Algorithm::FA, 3, 20);
  cfg.fa.damping = 0.95;
  Rng rng(10);
  for (int t = 0; t < 10; ++t) s = fa_update(std::move(s), Bounds::uniform(1, -5, 5), cfg, rng, [](const std::vector<Candidate>& xs) {
    std::vector<double> c;
    for (const auto& x : xs) c.push_back(x[0] * x[0]);
    return c;
  });
  EXPECT_NEAR(s.alpha, 0.4 * std::pow(0.95, 10), 1e-15);
}

// ---- GA --------------------------------------------------------------------

TEST(Ga, NoVariationOnlyReorders) {
  Sphere p;
  Rng rng(11);
  GaState s;
  for (int i = 0; i < 9; ++i) {
    s.pop.x.push_back(sample_candidate(p, rng));
    s.pop.cost.push_back(p.evaluate(s.pop.x.back()));
  }
  auto cfg = config(Algorithm::GA, 9, 10);
  cfg.ga.crossover_rate = 0.0;
  cfg.ga.mutation_rate = 0.0;
  auto before = s.pop;
  before.sort();
  auto next = ga_update(s, p.bounds(), cfg, rng, [&](const std::vector<Candidate>& xs) {
    std::vector<double> c;
    for (const auto& x : xs) c.push_back(p.evaluate(x));
    return c;
  });
  EXPECT_EQ(next.pop.x, before.x);
  EXPECT_EQ(next.pop.cost, before.cost);
}

TEST(Ga, IdenticalParentsGiveIdenticalChild) {
  Rng rng(12);
  Candidate x{1.5, -2.0, 3.25, 0.0};
  auto [a, b] = uniform_crossover(x, x, 0.5, rng);
  EXPECT_EQ(a, x);
  EXPECT_EQ(b, x);
}

TEST(Ga, EqualCostsGiveEvenRoulette) {
  auto p = roulette_probabilities({1.0, 1.0}, 8.0);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  auto q = roulette_probabilities({1.0, 2.0, INFINITY}, 1.0);
  EXPECT_NEAR(q[0], (1 / (1 + 1e-9)) / (1 / (1 + 1e-9) + 1 / (2 + 1e-9)), 1e-12);
  EXPECT_EQ(q[2], 0.0);
}

TEST(Ga, PermutationMutationKeepsValues) {
  Rng rng(13);
  Candidate x{1, 2, 3, 4, 5, 6};
  for (int i = 0; i < 100; ++i) {
    permutation_mutation(x, rng);
    auto sorted = x;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (Candidate{1, 2, 3, 4, 5, 6}));
  }
}

// ---- ACO -------------------------------------------------------------------

TEST(Aco, SingleNeighbourIsCertain) {
  auto p = aco_probabilities({0.3}, {2.0}, 1.5, 0.9);
  EXPECT_EQ(p[0], 1.0);
}

TEST(Aco, SymmetricNeighboursSplitEvenly) {
  auto p = aco_probabilities({1.5, 1.5}, {0.2, 0.2}, 1.5, 0.9);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Aco, ProbabilitiesFollowPheromoneRatio) {
  auto p = aco_probabilities({1, 2, 4}, {1, 1, 1}, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(p[0], 1.0 / 7);
  EXPECT_DOUBLE_EQ(p[1], 2.0 / 7);
  EXPECT_DOUBLE_EQ(p[2], 4.0 / 7);
  Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> tau(1 + rng.index(8)), eta(tau.size());
    for (auto& t : tau) t = rng.uniform(1e-4, 10);
    for (auto& e : eta) e = rng.uniform(1e-6, 1);
    auto q = aco_probabilities(tau, eta, rng.uniform(0, 2), rng.uniform(0, 2));
    EXPECT_NEAR(std::accumulate(q.begin(), q.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Aco, ColonyFindsShortRouteAndIsDeterministic) {
  Diamond d;
  auto cfg = route_planner_defaults(Algorithm::ACO);
  cfg.population = 10;
  cfg.iterations = 20;
  auto t1 = optimize_colony(d, cfg);
  cfg.workers = 3;
  auto t3 = optimize_colony(d, cfg);
  EXPECT_EQ(t1.best_value, 2.0);
  EXPECT_EQ(t1.best_nodes, (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(t1.best_cost, t3.best_cost);
  for (std::size_t t = 1; t < t1.best_cost.size(); ++t) EXPECT_LE(t1.best_cost[t], t1.best_cost[t - 1]);
}

TEST(Aco, EvaporationKeepsFloorAndDecaysExponents) {
  Diamond d;
  auto cfg = route_planner_defaults(Algorithm::ACO);
  cfg.population = 4;
  auto s = aco_init(d.edge_count(), cfg.aco);
  for (int i = 0; i < 30; ++i) s = aco_construct_and_update(d, std::move(s), cfg);
  for (double t : s.pheromone) EXPECT_GE(t, cfg.aco.min_pheromone);
  EXPECT_NEAR(s.alpha, 1.5 * std::pow(0.99, 30), 1e-12);
  EXPECT_NEAR(s.beta, 0.9 * std::pow(0.99, 30), 1e-12);
}
