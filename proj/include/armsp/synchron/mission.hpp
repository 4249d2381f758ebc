#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/env/environment.hpp"
#include "armsp/graph/mission_graph.hpp"
#include "armsp/orpp/planner.hpp"
#include "armsp/tar/cost.hpp"
#include "armsp/tar/solver.hpp"

namespace armsp {

enum class ReplanDecision { Continue, MissionReplan };

/// Boundary inclusive: an edge that takes exactly its expected time is on schedule.
inline ReplanDecision check_replan(double realized, double expected) {
  return realized <= expected ? ReplanDecision::Continue : ReplanDecision::MissionReplan;
}

enum class MissionStatus { Success, TimeExhausted, NoRoute };

constexpr std::string_view to_string(MissionStatus s) {
  switch (s) {
    case MissionStatus::Success: return "success";
    case MissionStatus::TimeExhausted: return "time_exhausted";
    case MissionStatus::NoRoute: return "no_route";
  }
  return "?";
}

struct MissionSettings {
  double total_time = 10800.0;  // s available for the whole mission
  double reserve = 0.05;        // share of the remaining time kept out of every route plan
  double update_period = 300.0;  // simulated s between environment updates during a leg
  double initial_detour = 1.0;   // flown over straight length assumed before any leg is flown
  std::size_t max_updates_per_leg = 20;
  ObstacleCounts leg_obstacles{2, 1, 0};  // spawned along each leg when it starts
  ObstacleSettings obstacle_settings;
  VehicleLimits limits;
  PathSettings path;
  TarWeights weights;
  bool include_cpu = false;  // add wall-clock terms to the total cost

  void validate() const {
    require(total_time > 0, ErrorCode::InvalidInput, "total mission time must be positive");
    require(reserve >= 0 && reserve < 1, ErrorCode::InvalidInput, "time reserve must lie in [0,1)");
    require(update_period > 0, ErrorCode::InvalidInput, "update period must be positive");
    require(initial_detour >= 1, ErrorCode::InvalidInput, "initial detour must be >= 1");
    limits.validate();
    weights.validate();
  }
};

/// Where the mission stands at a waypoint.
struct MissionState {
  double total_time = 0.0;     // T_total
  double residual = 0.0;       // time left
  int current = 0;             // waypoint the vehicle sits at
  std::vector<bool> consumed;  // by original edge id
  std::vector<int> visited_edges;
  double flown_length = 0.0;
  double straight_length = 0.0;
  double detour = 1.0;  // route planner edge times assume this flown/straight ratio
  std::size_t replans = 0;
  double tar_cpu = 0.0;
  double path_cpu = 0.0;
  std::vector<double> replan_compute;  // per mission replan: criterion check plus graph surgery, s
  std::vector<double> replan_tar_cpu;  // per mission replan: route planner time, s
};

/// Route revision, in original graph ids.
struct RoutePlan {
  std::vector<int> nodes;
  std::vector<int> edges;
  std::vector<double> edge_times;  // as estimated when planned
  double planned_time = 0.0;
  double budget = 0.0;  // time the route was planned against
  double detour = 1.0;
  double cost = 0.0;
  double violation = 0.0;
  double cpu_time = 0.0;
  std::size_t from_leg = 0;  // number of legs flown before this revision
};

struct LegRecord {
  int edge = -1;
  int from = -1, to = -1;
  std::optional<int> task;
  double expected = 0.0;  // T_eps
  double realized = 0.0;  // T_phi: flight plus task time
  double flight_time = 0.0;
  double path_length = 0.0;
  double path_cost = 0.0;  // cost of the flown trajectory
  double straight_length = 0.0;
  double collision = 0.0;
  double kinematic = 0.0;
  double path_cpu = 0.0;
  std::size_t path_plans = 0;
  bool replanned = false;  // the check after this leg fired a mission replan
  std::vector<Vec3> track;  // flown positions
};

struct MissionLog {
  MissionStatus status = MissionStatus::Success;
  double total_time = 0.0;
  double route_time = 0.0;  // T_R, sum of realized leg times
  double residual = 0.0;
  std::size_t replans = 0;
  std::size_t completed_tasks = 0;
  double obtained_weight = 0.0;
  double tar_cpu = 0.0;
  double path_cpu = 0.0;
  std::vector<double> replan_compute;
  std::vector<double> replan_tar_cpu;
  std::vector<LegRecord> legs;
  std::vector<RoutePlan> routes;
  std::uint64_t seed = 0;

  bool success() const { return status == MissionStatus::Success && residual > 0; }
};

namespace detail {

inline MissionGraph working_graph(const MissionGraph& g, const MissionState& ms, std::vector<int>& kept) {
  const MissionGraph w = g.without_edges(ms.consumed, &kept);
  return MissionGraph(w.waypoints(), w.edges(), w.tasks(), ms.current, g.dest(), g.cruise_speed() / ms.detour);
}

inline RoutePlan plan_route(const MissionGraph& g, const MissionState& ms, const OptimizerConfig& tar_cfg,
                            const MissionSettings& s, std::size_t legs_flown) {
  std::vector<int> kept;
  const MissionGraph w = working_graph(g, ms, kept);
  const double budget = (1.0 - s.reserve) * ms.residual;
  require(budget > 0, ErrorCode::NoRoute, "no time left to plan a route");
  const TarSolution sol = solve_tar(w, budget, tar_cfg, s.weights);
  RoutePlan r;
  r.nodes = sol.route.nodes;
  for (int e : sol.route.edges) {
    r.edges.push_back(kept[static_cast<std::size_t>(e)]);
    r.edge_times.push_back(w.edge(e).time);
  }
  r.planned_time = sol.route.time;
  r.budget = budget;
  r.detour = ms.detour;
  r.cost = sol.cost;
  r.violation = sol.violation;
  r.cpu_time = sol.cpu_time;
  r.from_leg = legs_flown;
  return r;
}

}  // namespace detail

/// Mission replan at the current waypoint: consumed edges are already out of
/// the working graph, the remaining time becomes the new budget and the route
/// planner runs again from here. NoRoute propagates to the caller.
inline RoutePlan apply_mission_replan(MissionState& ms, const MissionGraph& g, const OptimizerConfig& tar_cfg,
                                      const MissionSettings& s, std::size_t legs_flown, double check_time = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> kept;
  (void)detail::working_graph(g, ms, kept);  // timed surgery; plan_route rebuilds it
  const double surgery = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RoutePlan r = detail::plan_route(g, ms, tar_cfg, s, legs_flown);
  ++ms.replans;
  ms.replan_compute.push_back(check_time + surgery);
  ms.replan_tar_cpu.push_back(r.cpu_time);
  ms.tar_cpu += r.cpu_time;
  return r;
}

/// Result of flying one leg with periodic environment updates.
struct LegFlight {
  double flight_time = 0.0;
  double length = 0.0;
  double cost = 0.0;
  double collision = 0.0;
  double kinematic = 0.0;
  double cpu = 0.0;
  std::size_t plans = 0;
  std::vector<Vec3> track;
};

/// Flies from `a` to `b`. Every `period` simulated seconds the environment
/// advances and the path is warm-started from the current position; the last
/// plan is followed to the end. Costs and violations are those of the flown
/// pieces, each judged in the environment it was flown in.
inline LegFlight fly_leg(Vec3 a, Vec3 b, Environment& env, Rng& env_rng, const MissionSettings& s,
                         const OptimizerConfig& orpp_cfg) {
  LegFlight f;
  if (a == b) return f;
  PathPlan plan = plan_path(a, b, env, s.limits, orpp_cfg, s.path);
  f.cpu += plan.cost.cpu_time;
  f.plans = 1;
  auto fly_piece = [&](const PathPlan& p, double upto) {
    const auto& st = p.states;
    std::vector<Vec3> piece;
    for (std::size_t i = 0; i < st.size() && st.t[i] < upto; ++i) piece.push_back(st.position(i));
    piece.push_back(position_after(p, upto));
    if (f.track.empty()) f.track.push_back(piece.front());
    for (std::size_t i = 1; i < piece.size(); ++i) f.track.push_back(piece[i]);
    const PathCost c = evaluate_path(piece, env, s.limits);
    f.length += c.length;
    f.cost += c.cost;
    f.collision += c.collision;
    f.kinematic += c.kinematic();
  };
  for (std::size_t k = 1; k <= s.max_updates_per_leg && plan.cost.time > s.update_period; ++k) {
    fly_piece(plan, s.update_period);
    const Vec3 pos = position_after(plan, s.update_period);
    env = advance_environment(env, env_rng);
    OptimizerConfig c = orpp_cfg;
    c.seed = derive_seed(orpp_cfg.seed, k);
    try {
      plan = replan_path(plan, pos, env, s.limits, c, s.path);
    } catch (const Error& e) {
      // Drifted onto land or off the map: keep the old path, cut at the handover point.
      if (e.code() != ErrorCode::InvalidEndpoint) throw;
      PathProblem problem(pos, b, env, s.limits, s.path);
      Candidate x = reanchor(plan.best, plan.start, pos);
      clamp_to(problem.bounds(), x);
      plan = detail::finish_plan(problem, std::move(x), {}, 0.0);
    }
    f.cpu += plan.cost.cpu_time;
    ++f.plans;
  }
  fly_piece(plan, plan.cost.time + 1.0);
  f.flight_time = f.length / s.limits.speed;
  return f;
}

/// Runs one mission: route, then leg by leg through the path planner; after
/// each waypoint the realized leg time is checked against its share of the
/// time the route was planned with, and an overrun replans the mission from
/// that waypoint. Replans estimate edge times with the flown/straight length
/// ratio seen so far, so a route that kept overrunning gets shortened. `seed` drives the leg obstacles, the environment updates and
/// the planner seeds.
inline MissionLog run_mission(const MissionGraph& g, Environment env, const OptimizerConfig& tar_cfg,
                              const OptimizerConfig& orpp_cfg, const MissionSettings& s, std::uint64_t seed) {
  s.validate();
  require(g.start() != g.dest(), ErrorCode::InvalidEndpoint, "start and destination coincide");
  MissionLog log;
  log.seed = seed;
  log.total_time = s.total_time;
  MissionState ms;
  ms.total_time = s.total_time;
  ms.residual = s.total_time;
  ms.current = g.start();
  ms.consumed.assign(g.edge_count(), false);
  ms.detour = s.initial_detour;

  auto finish = [&](MissionStatus st) {
    log.status = st;
    log.residual = ms.residual;
    log.replans = ms.replans;
    log.tar_cpu = ms.tar_cpu;
    log.path_cpu = ms.path_cpu;
    log.replan_compute = ms.replan_compute;
    log.replan_tar_cpu = ms.replan_tar_cpu;
    return log;
  };

  OptimizerConfig tcfg = tar_cfg;
  tcfg.seed = derive_seed(seed, 0);
  RoutePlan route;
  try {
    route = detail::plan_route(g, ms, tcfg, s, 0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRoute) throw;
    return finish(MissionStatus::NoRoute);
  }
  ms.tar_cpu += route.cpu_time;
  log.routes.push_back(route);

  Rng env_rng(derive_seed(seed, 1));
  std::size_t next = 0;  // index into route.edges
  while (ms.current != g.dest()) {
    const std::size_t leg_no = log.legs.size();
    const int e = route.edges[next];
    const Edge& ed = g.edge(e);
    LegRecord rec;
    rec.edge = e;
    rec.from = ms.current;
    rec.to = ed.other(ms.current);
    rec.task = ed.task;
    const double share = route.planned_time > 0 ? route.budget / route.planned_time : 1.0;
    rec.expected = route.edge_times[next] * share;
    rec.straight_length = ed.distance;

    Rng leg_rng(derive_seed(seed, 2, leg_no));
    env.obstacles.clear();
    if (s.leg_obstacles.total() > 0) {
      try {
        env.obstacles = spawn_obstacles(s.leg_obstacles, g.position(rec.from), g.position(rec.to),
                                        s.obstacle_settings, leg_rng, s.limits.z_min, s.limits.z_max);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::GenerationFailed) throw;  // leg too short to host obstacles
      }
    }
    OptimizerConfig ocfg = orpp_cfg;
    ocfg.seed = derive_seed(seed, 3, leg_no);
    LegFlight fl = fly_leg(g.position(rec.from), g.position(rec.to), env, env_rng, s, ocfg);
    const Task* task = g.edge_task(e);
    rec.flight_time = fl.flight_time;
    rec.realized = fl.flight_time + (task ? task->completion_time : 0.0);
    rec.path_length = fl.length;
    rec.path_cost = fl.cost;
    rec.collision = fl.collision;
    rec.kinematic = fl.kinematic;
    rec.path_cpu = fl.cpu;
    rec.path_plans = fl.plans;
    rec.track = std::move(fl.track);

    ms.path_cpu += rec.path_cpu;
    ms.flown_length += rec.path_length;
    ms.straight_length += rec.straight_length;
    if (ms.straight_length > 0) ms.detour = std::max(1.0, ms.flown_length / ms.straight_length);
    ms.residual -= rec.realized;
    log.route_time += rec.realized;
    ms.consumed[static_cast<std::size_t>(e)] = true;
    ms.visited_edges.push_back(e);
    ms.current = rec.to;
    log.obtained_weight += ed.weight;
    if (task) ++log.completed_tasks;
    log.legs.push_back(std::move(rec));
    LegRecord& done = log.legs.back();

    if (ms.residual <= 0) return finish(MissionStatus::TimeExhausted);
    if (ms.current == g.dest()) break;

    const auto c0 = std::chrono::steady_clock::now();
    const auto decision = check_replan(done.realized, done.expected);
    const double check_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
    if (decision == ReplanDecision::Continue) {
      ++next;
      continue;
    }
    done.replanned = true;
    tcfg.seed = derive_seed(seed, 0, ms.replans + 1);
    try {
      route = apply_mission_replan(ms, g, tcfg, s, log.legs.size(), check_time);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NoRoute) throw;
      ++ms.replans;  // the decision was taken even though no route came back
      return finish(MissionStatus::NoRoute);
    }
    log.routes.push_back(route);
    next = 0;
  }
  return finish(MissionStatus::Success);
}

enum class CostMode { SimulatedOnly, WithCpu };

/// Total mission cost: route cost of the flown legs (budget = total time),
/// scaled by the mean path-quality ratio (flown cost over straight length),
/// plus the path planner time and the replan compute times weighted by the
/// route planner time of the same replan. In WithCpu mode the planner time of
/// each leg is added to its realized time as well.
inline double total_cost(const MissionLog& log, const MissionGraph& g, const TarWeights& w,
                         CostMode mode = CostMode::SimulatedOnly) {
  if (log.legs.empty()) return tar_cost_terms({}, {}, log.total_time, w).cost;
  std::vector<double> times, weights;
  double quality = 0.0;
  for (const auto& leg : log.legs) {
    times.push_back(leg.realized + (mode == CostMode::WithCpu ? leg.path_cpu : 0.0));
    weights.push_back(tar_edge_weight(g, leg.edge, w));
    quality += leg.straight_length > 0 ? leg.path_cost / leg.straight_length : 1.0;
  }
  quality /= static_cast<double>(log.legs.size());
  double total = tar_cost_terms(times, weights, log.total_time, w).cost * quality;
  if (mode == CostMode::WithCpu) {
    total += log.path_cpu;
    for (std::size_t k = 0; k < log.replan_compute.size(); ++k)
      total += log.replan_compute[k] * log.replan_tar_cpu[k];
  }
  return total;
}

inline nlohmann::json mission_log_to_json(const MissionLog& log, const MissionGraph& g, const TarWeights& w = {}) {
  using nlohmann::json;
  json legs = json::array();
  for (const auto& l : log.legs) {
    json track = json::array();
    for (const auto& p : l.track) track.push_back({p.x, p.y, p.z});
    legs.push_back({{"edge", l.edge},
                    {"from", l.from},
                    {"to", l.to},
                    {"task", l.task ? json(*l.task) : json(nullptr)},
                    {"T_eps", l.expected},
                    {"T_phi", l.realized},
                    {"flight_time", l.flight_time},
                    {"path_length", l.path_length},
                    {"path_cost", l.path_cost},
                    {"straight_length", l.straight_length},
                    {"collision", l.collision},
                    {"kinematic", l.kinematic},
                    {"path_cpu_s", l.path_cpu},
                    {"path_plans", l.path_plans},
                    {"replanned", l.replanned},
                    {"track", track}});
  }
  json routes = json::array();
  for (const auto& r : log.routes)
    routes.push_back({{"nodes", r.nodes},
                      {"edges", r.edges},
                      {"planned_time", r.planned_time},
                      {"budget", r.budget},
                      {"detour", r.detour},
                      {"C_TAR", r.cost},
                      {"Viol", r.violation},
                      {"cpu_s", r.cpu_time},
                      {"from_leg", r.from_leg}});
  return {{"schema", "armsp-mission/1"},
          {"seed", log.seed},
          {"status", std::string(to_string(log.status))},
          {"success", log.success()},
          {"T_total", log.total_time},
          {"T_R", log.route_time},
          {"T_residual", log.residual},
          {"rep", log.replans},
          {"completed_tasks", log.completed_tasks},
          {"obtained_weight", log.obtained_weight},
          {"Cost_Total", total_cost(log, g, w)},
          {"tar_cpu_s", log.tar_cpu},
          {"path_cpu_s", log.path_cpu},
          {"replan_compute_s", log.replan_compute},
          {"replan_tar_cpu_s", log.replan_tar_cpu},
          {"routes", routes},
          {"legs", legs}};
}

/// Process exit code for a finished mission.
inline int mission_exit_code(const MissionLog& log) {
  if (log.status == MissionStatus::NoRoute) return 3;
  return log.success() ? 0 : 2;
}

}  // namespace armsp
