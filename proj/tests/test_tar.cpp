#include <gtest/gtest.h>

#include "armsp/graph/graph_json.hpp"
#include "armsp/graph/network.hpp"
#include "armsp/tar/solver.hpp"
#include "support/tar_oracle.hpp"

using namespace armsp;

namespace {

MissionGraph line_graph() {
  std::vector<Waypoint> w{{0, {0, 0, 0}}, {1, {100, 0, 0}}, {2, {200, 0, 0}}};
  return MissionGraph(w, {{0, 1, std::nullopt}, {1, 2, std::nullopt}}, {}, 0, 2, 2.5);
}

const Algorithm kRouteAlgorithms[] = {Algorithm::ACO, Algorithm::GA, Algorithm::BBO, Algorithm::PSO};

OptimizerConfig route_cfg(Algorithm a, std::uint64_t seed, std::size_t pop = 70, std::size_t iters = 100) {
  auto c = route_planner_defaults(a);
  c.seed = seed;
  c.population = pop;
  c.iterations = iters;
  return c;
}

TarWeights unit_weights() {
  TarWeights w;
  w.time_weight = 1.0;
  w.penalty = 1.0;
  return w;
}

}  // namespace

TEST(TarCost, ExactFitLeavesOnlyTheWeightTerm) {
  const std::vector<double> t{30, 70}, w{1.5, 2.5};
  auto c = tar_cost_terms(t, w, 100.0, unit_weights());
  EXPECT_EQ(c.violation, 0.0);
  EXPECT_DOUBLE_EQ(c.cost, 1.0 / 4.0);
}

TEST(TarCost, DoubleTimeGivesHalfViolation) {
  const std::vector<double> t{200}, w{1};
  auto c = tar_cost_terms(t, w, 100.0, unit_weights());
  EXPECT_DOUBLE_EQ(c.violation, 0.5);
  EXPECT_DOUBLE_EQ(c.cost, (100.0 + 1.0) * 1.5);
}

TEST(TarCost, EmptyRouteIsDegenerate) {
  TarWeights w;
  auto c = tar_cost_terms({}, {}, 500.0, w);
  EXPECT_DOUBLE_EQ(c.cost, 1.0);  // default time weight is 1/budget
  EXPECT_EQ(c.violation, 0.0);
}

TEST(TarCost, SumOfInverseMode) {
  TarWeights w = unit_weights();
  w.term = WeightTerm::SumOfInverse;
  const std::vector<double> t{40, 60}, wt{2, 4};
  auto c = tar_cost_terms(t, wt, 100.0, w);
  EXPECT_DOUBLE_EQ(c.cost, 0.4 / 2 + 0.6 / 4);
}

TEST(TarCost, ViolationZeroExactlyWithinBudget) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double b = rng.uniform(1, 1000);
    std::vector<double> t(1 + rng.index(5)), w(t.size(), 1.0);
    for (auto& v : t) v = rng.uniform(0, 400);
    auto c = tar_cost_terms(t, w, b, TarWeights{});
    EXPECT_EQ(c.violation == 0.0, c.time <= b);
    EXPECT_GE(c.violation, 0.0);
  }
}

TEST(TarCost, JointScalingOfTimeAndWeightTermsKeepsRanking) {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const double b = 300;
    std::vector<double> t1{rng.uniform(10, 300), rng.uniform(10, 300)}, w1{rng.uniform(1, 9), rng.uniform(1, 9)};
    std::vector<double> t2{rng.uniform(10, 400)}, w2{rng.uniform(1, 9)};
    TarWeights a;
    a.time_weight = 0.01;
    TarWeights scaled = a;
    const double k = rng.uniform(0.1, 50);
    scaled.time_weight = 0.01 * k;
    scaled.weight_term = k;
    const bool before = tar_cost_terms(t1, w1, b, a).cost < tar_cost_terms(t2, w2, b, a).cost;
    const bool after = tar_cost_terms(t1, w1, b, scaled).cost < tar_cost_terms(t2, w2, b, scaled).cost;
    EXPECT_EQ(before, after);
  }
}

TEST(TarCost, PriorityAndRiskScalesEnterEdgeWeights) {
  auto g = line_graph();
  g.set_tasks({Task{7, 6.0, 2.0, 0.0}}, {0, std::nullopt});
  TarWeights w;
  w.priority_scale = 2.0;
  w.risk_scale = 3.0;
  EXPECT_DOUBLE_EQ(tar_edge_weight(g, 0, w), 2.0 * 6.0 / (3.0 * 2.0));
  EXPECT_DOUBLE_EQ(tar_edge_weight(g, 1, w), 1.0);
}

TEST(TarCost, CeilingBoundsEveryRoute) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto inst = oracle::small_instance(s, 8, 12);
    for (auto term : {WeightTerm::InverseSum, WeightTerm::SumOfInverse}) {
      TarWeights w;
      w.term = term;
      const double ceil = tar_cost_ceiling(inst.graph, inst.budget, w);
      for (const auto& r : oracle::all_simple_routes(inst.graph))
        EXPECT_LE(tar_cost(r, inst.graph, inst.budget, w).cost, ceil);
    }
  }
}

TEST(SolveTar, ForcedRouteOnALine) {
  auto g = line_graph();
  for (auto a : kRouteAlgorithms) {
    auto sol = solve_tar(g, 100.0, route_cfg(a, 1, 10, 5));
    EXPECT_EQ(sol.route.nodes, (std::vector<int>{0, 1, 2})) << to_string(a);
    EXPECT_DOUBLE_EQ(sol.route.time, 80.0);
    EXPECT_EQ(sol.violation, 0.0);
  }
}

TEST(SolveTar, UnreachableDestinationIsNoRoute) {
  std::vector<Waypoint> w{{0, {0, 0, 0}}, {1, {100, 0, 0}}, {2, {200, 0, 0}}, {3, {300, 0, 0}}};
  MissionGraph g(w, {{0, 1, std::nullopt}, {2, 3, std::nullopt}}, {}, 0, 3, 2.5);
  try {
    solve_tar(g, 100.0, route_cfg(Algorithm::GA, 1, 10, 5));
    FAIL() << "expected NoRoute";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoRoute);
  }
}

TEST(SolveTar, CoincidentEndpointsRejected) {
  auto g = line_graph();
  g.set_endpoints(1, 1);
  EXPECT_THROW(solve_tar(g, 100.0, route_cfg(Algorithm::PSO, 1, 10, 5)), Error);
}

TEST(SolveTar, RoutesPassStructuralChecksAndTracesAreMonotone) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    Rng rng(s);
    auto g = small_random_graph(30, 60, 5000.0, 2.5, rng);
    g = assign_tasks(g, random_tasks(15, rng), rng);
    for (auto a : kRouteAlgorithms) {
      auto sol = solve_tar(g, 6000.0, route_cfg(a, s, 30, 30));
      for (const auto& v : validate_route(sol.route, g, 6000.0))
        EXPECT_EQ(v.criterion, RouteCriterion::TimeBudget) << to_string(a) << ' ' << v.detail;
      EXPECT_EQ(sol.violation == 0.0, sol.route.time <= 6000.0);
      for (std::size_t t = 1; t < sol.trace.best_cost.size(); ++t)
        ASSERT_LE(sol.trace.best_cost[t], sol.trace.best_cost[t - 1]);
      EXPECT_DOUBLE_EQ(sol.trace.best_cost.back(), sol.cost);
    }
  }
}

TEST(SolveTar, SevenNodeOracle) {
  // 7 nodes and 10 edges, 20 seeds per algorithm, within 5% of the enumerated optimum.
  for (std::uint64_t inst_seed : {11u, 12u}) {
    auto inst = oracle::small_instance(inst_seed, 7, 10);
    const double opt = oracle::optimal_tar_cost(inst.graph, inst.budget, TarWeights{});
    for (auto a : kRouteAlgorithms) {
      int hits = 0;
      for (std::uint64_t s = 1; s <= 20; ++s) {
        auto sol = solve_tar(inst.graph, inst.budget, route_cfg(a, s));
        EXPECT_GE(sol.cost, opt - 1e-12);
        hits += sol.cost <= 1.05 * opt;
      }
      EXPECT_GE(hits, 18) << to_string(a) << " instance " << inst_seed;
    }
  }
}

TEST(SolveTar, DeterministicAcrossWorkerCounts) {
  auto inst = oracle::small_instance(5, 9, 12);
  for (auto a : kRouteAlgorithms) {
    auto c1 = route_cfg(a, 9, 20, 20);
    auto c3 = c1;
    c3.workers = 3;
    auto s1 = solve_tar(inst.graph, inst.budget, c1);
    auto s3 = solve_tar(inst.graph, inst.budget, c3);
    EXPECT_EQ(s1.route.nodes, s3.route.nodes);
    EXPECT_EQ(s1.trace.best_cost, s3.trace.best_cost);
  }
}

TEST(SolveTar, JsonExport) {
  auto sol = solve_tar(line_graph(), 100.0, route_cfg(Algorithm::BBO, 4, 5, 3));
  auto j = tar_solution_to_json(sol);
  EXPECT_EQ(j["route"], nlohmann::json({0, 1, 2}));
  EXPECT_EQ(j["algorithm"], "bbo");
  EXPECT_EQ(j["seed"], 4);
  EXPECT_DOUBLE_EQ(j["T_R"].get<double>(), 80.0);
  for (const char* k : {"C_TAR", "Viol", "cpu_s"}) EXPECT_TRUE(j.contains(k));
}
