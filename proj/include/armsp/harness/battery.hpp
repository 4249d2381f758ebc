#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "armsp/core/parallel.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/env/clustering.hpp"
#include "armsp/env/environment.hpp"
#include "armsp/graph/network.hpp"
#include "armsp/harness/config.hpp"
#include "armsp/orpp/planner.hpp"
#include "armsp/synchron/mission.hpp"
#include "armsp/tar/solver.hpp"

namespace armsp {

inline constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

/// One battery row: one instance solved by one algorithm (or pairing).
/// Fields that do not apply to the scenario kind hold NaN.
struct MetricsRow {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::string tar_algo;
  std::string orpp_algo;
  std::string status;
  double c_tar = kNotApplicable;
  double viol_tar = kNotApplicable;
  double t_r = kNotApplicable;
  double t_residual = kNotApplicable;
  std::size_t completed_tasks = 0;
  double obtained_weight = kNotApplicable;
  double path_cost_mean = kNotApplicable;
  double path_cost_max = kNotApplicable;
  double collision = kNotApplicable;
  double kinematic = kNotApplicable;
  std::size_t replans = 0;
  std::size_t paths = 0;
  double cost_total = kNotApplicable;
  bool success = false;

  // Wall-clock figures; these go to timings.csv, never to metrics.csv.
  double tar_cpu = 0.0;
  double path_cpu = 0.0;
  double wall = 0.0;

  std::vector<double> convergence;  // best cost per iteration of the first planner call
  std::vector<double> expected_times;  // per flown leg, missions only
  std::vector<double> realized_times;
};

/// Full artifacts kept for the first run of every algorithm group.
struct RunArtifacts {
  std::string tar_algo, orpp_algo;
  std::optional<MissionGraph> graph;
  std::optional<MissionLog> mission;
  std::optional<TarSolution> route;
  std::optional<OnlineRun> leg;
};

struct BatteryResult {
  ScenarioConfig config;
  std::vector<MetricsRow> rows;
  std::vector<RunArtifacts> samples;
  std::shared_ptr<const GridMap> map;
};

/// Builds the chart named by the config; null for a map-free box.
inline std::shared_ptr<const GridMap> build_map(const MapConfig& m) {
  if (m.source == "none") return nullptr;
  if (m.source == "open") return std::make_shared<GridMap>(GridMap::filled(m.width_cells, m.height_cells, 1.0, m.cell_size));
  Image img;
  if (m.source == "file") {
    img = read_ppm(read_file(m.path));
  } else {
    Rng rng(m.seed);
    IslandSettings is;
    is.width = m.width_cells;
    is.height = m.height_cells;
    is.islands = m.islands;
    img = synthetic_chart(is, rng);
  }
  ClusterSettings cs;
  cs.cell_size = m.cell_size;
  return std::make_shared<GridMap>(cluster_map(img, m.clusters, cs).map);
}

/// Nearest open-water cell centre to `p` (same depth), searching outward ring by ring.
inline Vec3 snap_to_water(const GridMap& map, Vec3 p) {
  const auto clampi = [](double v, std::size_t n) {
    return static_cast<long>(std::clamp(v, 0.0, static_cast<double>(n - 1)));
  };
  const long cx = clampi(std::floor(p.x / map.cell_size), map.width_cells);
  const long cy = clampi(std::floor(p.y / map.cell_size), map.height_cells);
  const long w = static_cast<long>(map.width_cells), h = static_cast<long>(map.height_cells);
  for (long r = 0; r < std::max(w, h); ++r) {
    double best = INFINITY;
    Vec3 found{};
    for (long y = cy - r; y <= cy + r; ++y)
      for (long x = cx - r; x <= cx + r; ++x) {
        if (std::max(std::labs(x - cx), std::labs(y - cy)) != r) continue;
        if (x < 0 || y < 0 || x >= w || y >= h) continue;
        if (map.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) != 1.0) continue;
        const Vec3 c{(static_cast<double>(x) + 0.5) * map.cell_size, (static_cast<double>(y) + 0.5) * map.cell_size, p.z};
        const double d = distance(c, p);
        if (d < best) { best = d; found = c; }
      }
    if (std::isfinite(best)) return found;
  }
  fail(ErrorCode::GenerationFailed, "the map has no open water");
}

namespace detail {

struct Job {
  std::size_t run = 0;
  std::size_t nodes = 0;  // 0: drawn from the configured range
  std::uint64_t seed = 0;
};

inline std::vector<Job> battery_jobs(const ScenarioConfig& c) {
  std::vector<Job> jobs;
  if (c.kind == ScenarioKind::Tar && !c.graph.sweep.empty()) {
    for (auto n : c.graph.sweep)
      for (std::size_t r = 0; r < c.runs; ++r) jobs.push_back({r, n, derive_seed(c.seed, r, n)});
  } else {
    for (std::size_t r = 0; r < c.runs; ++r) jobs.push_back({r, 0, derive_seed(c.seed, r)});
  }
  return jobs;
}

inline MissionGraph instance_graph(const ScenarioConfig& c, const GridMap* map, const Job& job) {
  Rng rng(derive_seed(job.seed, 0));
  const std::size_t span = c.graph.nodes_max - c.graph.nodes_min + 1;
  const std::size_t n = job.nodes ? job.nodes : c.graph.nodes_min + rng.index(span);
  NetworkSettings ns;
  ns.degree_target = c.graph.degree;
  ns.cruise_speed = c.graph.cruise_speed;
  ns.z_min = c.limits.z_min;
  ns.z_max = c.limits.z_max;
  const GridMap open = map ? GridMap{} : GridMap::filled(c.map.width_cells, c.map.height_cells, 1.0, c.map.cell_size);
  auto g = generate_network(map ? *map : open, n, ns, rng);
  return assign_tasks(g, random_tasks(c.graph.tasks, rng), rng);
}

inline Environment instance_environment(const ScenarioConfig& c, std::shared_ptr<const GridMap> map, const Job& job) {
  Rng rng(derive_seed(job.seed, 1));
  Environment env;
  env.map = std::move(map);
  env.current = make_current_field(random_vortices(c.vortex_spawn(), rng), c.current_settings(), rng);
  return env;
}

inline void fill_tar_row(MetricsRow& row, const TarSolution& s, const ScenarioConfig& c) {
  row.status = s.violation == 0.0 ? "ok" : "over_budget";
  row.c_tar = s.cost;
  row.viol_tar = s.violation;
  row.t_r = s.route.time;
  row.t_residual = c.total_time - s.route.time;
  row.completed_tasks = s.route.covered_tasks;
  row.obtained_weight = s.route.total_weight;
  row.cost_total = s.cost;
  row.success = s.violation == 0.0;
  row.tar_cpu = s.cpu_time;
  row.convergence = s.trace.best_cost;
}

inline void fill_leg_row(MetricsRow& row, const OnlineRun& run) {
  const auto& f = run.final_plan();
  double sum = 0.0, worst = 0.0;
  for (const auto& p : run.plans) {
    sum += p.cost.cost;
    worst = std::max(worst, p.cost.cost);
  }
  row.path_cost_mean = sum / static_cast<double>(run.plans.size());
  row.path_cost_max = worst;
  row.collision = f.cost.collision;
  row.kinematic = f.cost.kinematic();
  row.t_r = run.travelled_time;
  row.paths = run.plans.size();
  row.cost_total = f.cost.cost;
  row.success = f.cost.collision == 0.0 && f.cost.kinematic() == 0.0;
  row.status = row.success ? "ok" : "violation";
  row.path_cpu = run.cpu_time;
  row.convergence = run.plans.front().trace.best_cost;
}

inline void fill_mission_row(MetricsRow& row, const MissionLog& log, const MissionGraph& g, const TarWeights& w) {
  row.status = std::string(to_string(log.status));
  if (!log.routes.empty()) {
    row.c_tar = log.routes.front().cost;
    row.viol_tar = log.routes.front().violation;
  }
  row.t_r = log.route_time;
  row.t_residual = log.residual;
  row.completed_tasks = log.completed_tasks;
  row.obtained_weight = log.obtained_weight;
  double sum = 0.0, worst = 0.0, col = 0.0, kin = 0.0;
  std::size_t paths = 0;
  for (const auto& l : log.legs) {
    sum += l.path_cost;
    worst = std::max(worst, l.path_cost);
    col += l.collision;
    kin += l.kinematic;
    paths += l.path_plans;
    row.expected_times.push_back(l.expected);
    row.realized_times.push_back(l.realized);
  }
  if (!log.legs.empty()) row.path_cost_mean = sum / static_cast<double>(log.legs.size());
  row.path_cost_max = log.legs.empty() ? kNotApplicable : worst;
  row.collision = col;
  row.kinematic = kin;
  row.replans = log.replans;
  row.paths = paths;
  row.cost_total = total_cost(log, g, w);
  row.success = log.success();
  row.tar_cpu = log.tar_cpu;
  row.path_cpu = log.path_cpu;
}

}  // namespace detail

/// Runs every configured instance with every configured algorithm (missions
/// take the cross product of route and path planners). Instances are shared
/// across algorithms so rows of one run compare like with like. Results depend
/// only on the config: worker count changes scheduling, not values.
inline BatteryResult run_battery(const ScenarioConfig& cfg) {
  cfg.validate();
  BatteryResult out;
  out.config = cfg;
  out.map = build_map(cfg.map);
  const auto jobs = detail::battery_jobs(cfg);

  struct Pairing {
    std::optional<Algorithm> tar, orpp;
  };
  std::vector<Pairing> pairings;
  if (cfg.kind == ScenarioKind::Tar)
    for (auto a : cfg.algorithms.tar) pairings.push_back({a, std::nullopt});
  else if (cfg.kind == ScenarioKind::Orpp)
    for (auto a : cfg.algorithms.orpp) pairings.push_back({std::nullopt, a});
  else
    for (auto t : cfg.algorithms.tar)
      for (auto o : cfg.algorithms.orpp) pairings.push_back({t, o});

  const std::size_t per_job = pairings.size();
  out.rows.resize(jobs.size() * per_job);
  std::vector<std::optional<RunArtifacts>> artifacts(jobs.size() * per_job);

  MissionSettings ms;
  ms.total_time = cfg.total_time;
  ms.reserve = cfg.mission.reserve;
  ms.update_period = cfg.mission.update_period;
  ms.max_updates_per_leg = cfg.mission.max_updates_per_leg;
  ms.leg_obstacles = cfg.mission.leg_obstacles;
  ms.limits = cfg.limits;
  ms.include_cpu = cfg.mission.include_cpu;

  parallel_for(jobs.size(), cfg.workers, [&](std::size_t j) {
    const auto& job = jobs[j];
    for (std::size_t p = 0; p < per_job; ++p) {
      const auto t0 = std::chrono::steady_clock::now();
      auto& row = out.rows[j * per_job + p];
      row.run = job.run;
      row.seed = job.seed;
      if (pairings[p].tar) row.tar_algo = std::string(to_string(*pairings[p].tar));
      if (pairings[p].orpp) row.orpp_algo = std::string(to_string(*pairings[p].orpp));
      const bool keep = job.run == 0;
      RunArtifacts art{row.tar_algo, row.orpp_algo, {}, {}, {}, {}};
      try {
        if (cfg.kind == ScenarioKind::Orpp) {
          auto env = detail::instance_environment(cfg, out.map, job);
          Vec3 start = cfg.leg.start, target = cfg.leg.target;
          if (env.map) {
            start = snap_to_water(*env.map, start);
            target = snap_to_water(*env.map, target);
          }
          Rng orng(derive_seed(job.seed, 2));
          env.obstacles = spawn_obstacles(cfg.leg.obstacles, start, target, ObstacleSettings{}, orng);
          auto oc = cfg.orpp_optimizer(*pairings[p].orpp);
          oc.seed = derive_seed(job.seed, 3);
          Rng env_rng(derive_seed(job.seed, 4));
          auto run = run_online(start, target, env, cfg.leg.updates, env_rng, cfg.limits, oc);
          detail::fill_leg_row(row, run);
          if (keep) art.leg = std::move(run);
        } else {
          auto g = detail::instance_graph(cfg, out.map.get(), job);
          row.nodes = g.node_count();
          row.edges = g.edge_count();
          auto tc = cfg.tar_optimizer(*pairings[p].tar);
          tc.seed = derive_seed(job.seed, 2);
          if (cfg.kind == ScenarioKind::Tar) {
            auto s = solve_tar(g, cfg.total_time, tc);
            detail::fill_tar_row(row, s, cfg);
            if (keep) art.route = std::move(s);
          } else {
            auto env = detail::instance_environment(cfg, out.map, job);
            auto oc = cfg.orpp_optimizer(*pairings[p].orpp);
            oc.seed = derive_seed(job.seed, 3);
            auto log = run_mission(g, env, tc, oc, ms, derive_seed(job.seed, 4));
            detail::fill_mission_row(row, log, g, ms.weights);
            if (keep) art.mission = std::move(log);
          }
          if (keep) art.graph = std::move(g);
        }
      } catch (const Error& e) {
        row.status = e.code() == ErrorCode::NoRoute ? "no_route" : "error";
        row.success = false;
      }
      row.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (keep) artifacts[j * per_job + p] = std::move(art);
    }
  });
  for (auto& a : artifacts)
    if (a) out.samples.push_back(std::move(*a));
  return out;
}

}  // namespace armsp
