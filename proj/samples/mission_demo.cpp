// Flies one mission on an open 3.5 km square and prints what happened on each leg.
// Usage: mission_demo [seed]

#include <cstdio>
#include <cstdlib>
#include <memory>

#include "armsp/graph/network.hpp"
#include "armsp/synchron/mission.hpp"

using namespace armsp;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  Rng rng(seed);

  auto map = std::make_shared<const GridMap>(GridMap::filled(350, 350, 1.0));
  auto g = generate_network(*map, 12, NetworkSettings{}, rng);
  g = assign_tasks(g, random_tasks(8, rng), rng);

  Environment env;
  env.map = map;
  env.current = make_current_field(random_vortices(VortexSpawn{}, rng), CurrentSettings{}, rng);

  auto tar = route_planner_defaults(Algorithm::DE);
  auto orpp = path_planner_defaults(Algorithm::FA);
  orpp.population = 30;
  orpp.iterations = 40;
  MissionSettings s;
  s.total_time = 4000.0;

  const auto log = run_mission(g, env, tar, orpp, s, derive_seed(seed, 1));
  for (std::size_t i = 0; i < log.legs.size(); ++i) {
    const auto& leg = log.legs[i];
    std::printf("leg %2zu  %2d -> %2d  expected %7.1f s  flown %7.1f s  %zu path plans%s\n", i, leg.from, leg.to,
                leg.expected, leg.realized, leg.path_plans, leg.replanned ? "  (route revised)" : "");
  }
  std::printf("%s: route time %.1f s, residual %.1f s, %zu tasks, %zu route revisions\n",
              std::string(to_string(log.status)).c_str(), log.route_time, log.residual, log.completed_tasks,
              log.replans);
  return mission_exit_code(log);
}
