#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "armsp/env/environment.hpp"
#include "armsp/opt/optimize.hpp"
#include "armsp/orpp/bspline.hpp"
#include "armsp/orpp/path.hpp"

namespace armsp {

struct PathSettings {
  std::size_t interior_points = 7;  // free control points between the pinned ends
  std::size_t order = 4;
  std::size_t samples = 100;
  double margin = 0.25;  // box expansion as a fraction of the start/target diagonal
  double reuse_fraction = 0.5;   // share of a replan's population seeded from the previous run
  double warm_schedule = 0.75;   // replans resume annealing schedules this far into the iteration budget

  std::size_t dimension() const { return 3 * interior_points; }
};

/// Control-point search for one leg. The decision vector holds the interior
/// points as (x, y, z) triples; start and target are pinned as the outer points.
class PathProblem {
 public:
  PathProblem(Vec3 start, Vec3 target, const Environment& env, const VehicleLimits& lim, const PathSettings& ps)
      : start_(start), target_(target), env_(env), lim_(lim), ps_(ps),
        table_(std::make_shared<BsplineTable>(BsplineTable::make(ps.interior_points + 2, ps.order, ps.samples))) {
    const double diag = distance(start, target);
    const double pad = ps.margin * diag;
    const double lo[3] = {std::min(start.x, target.x), std::min(start.y, target.y), std::min(start.z, target.z)};
    const double hi[3] = {std::max(start.x, target.x), std::max(start.y, target.y), std::max(start.z, target.z)};
    double cap_lo[3] = {-INFINITY, -INFINITY, lim.z_min}, cap_hi[3] = {INFINITY, INFINITY, lim.z_max};
    if (env.map) {
      cap_lo[0] = cap_lo[1] = 0.0;
      cap_hi[0] = env.map->extent_x();
      cap_hi[1] = env.map->extent_y();
    }
    for (std::size_t i = 0; i < ps.interior_points; ++i)
      for (int k = 0; k < 3; ++k) {
        const double a = std::max(cap_lo[k], lo[k] - pad), b = std::min(cap_hi[k], hi[k] + pad);
        bounds_.lower.push_back(std::min(a, lo[k]));
        bounds_.upper.push_back(std::max(b, hi[k]));
      }
  }

  const Bounds& bounds() const { return bounds_; }
  Vec3 start() const { return start_; }
  Vec3 target() const { return target_; }
  const PathSettings& settings() const { return ps_; }

  std::vector<Vec3> control_points(const Candidate& x) const {
    std::vector<Vec3> c;
    c.reserve(ps_.interior_points + 2);
    c.push_back(start_);
    for (std::size_t i = 0; i < ps_.interior_points; ++i) c.push_back({x[3 * i], x[3 * i + 1], x[3 * i + 2]});
    c.push_back(target_);
    return c;
  }

  std::vector<Vec3> curve(const Candidate& x) const {
    std::vector<Vec3> out;
    table_->evaluate(control_points(x), out);
    return out;
  }

  PathCost cost(const Candidate& x, PathStates* states = nullptr) const {
    return evaluate_path(curve(x), env_, lim_, states);
  }

  double evaluate(const Candidate& x) const { return cost(x).cost; }
  double violation(const Candidate& x) const { return cost(x).total_violation(); }

 private:
  Vec3 start_, target_;
  const Environment& env_;
  VehicleLimits lim_;
  PathSettings ps_;
  std::shared_ptr<const BsplineTable> table_;
  Bounds bounds_;
};

struct PathPlan {
  Vec3 start, target;
  Candidate best;                 // interior control points
  std::vector<Vec3> control;      // including the pinned ends
  std::vector<Vec3> curve;
  PathStates states;
  PathCost cost;
  RunTrace trace;
  bool accepted = true;  // false when a replan kept the previous path
};

namespace detail {

inline PathPlan finish_plan(const PathProblem& problem, Candidate best, RunTrace trace, double cpu) {
  PathPlan plan;
  plan.start = problem.start();
  plan.target = problem.target();
  plan.best = std::move(best);
  plan.control = problem.control_points(plan.best);
  plan.curve = problem.curve(plan.best);
  plan.cost = problem.cost(plan.best, &plan.states);
  plan.cost.cpu_time = cpu;
  plan.trace = std::move(trace);
  return plan;
}

inline void check_endpoint(Vec3 p, const Environment& env, const char* what) {
  if (!env.map) return;
  const auto occ = collision_query(p, *env.map, {});
  if (occ == Occupancy::Coast || occ == Occupancy::OutOfBounds)
    fail(ErrorCode::InvalidEndpoint, std::string(what) + " lies on coast or outside the map");
}

}  // namespace detail

/// Plans one leg. `seeds` (already in the decision layout) join the initial population.
inline PathPlan plan_path(Vec3 start, Vec3 target, const Environment& env, const VehicleLimits& lim,
                          const OptimizerConfig& cfg, const PathSettings& ps = {},
                          const std::vector<Candidate>& seeds = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  lim.validate();
  require(!(start == target), ErrorCode::InvalidEndpoint, "start and target coincide");
  detail::check_endpoint(start, env, "start");
  detail::check_endpoint(target, env, "target");
  PathProblem problem(start, target, env, lim, ps);
  auto trace = optimize(problem, cfg, seeds);
  const double cpu = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto best = trace.best_solution;
  return detail::finish_plan(problem, std::move(best), std::move(trace), cpu);
}

/// Shifts interior control points so the path starts at `new_start`: point i of
/// m moves by (1 - i/(m+1)) of the start displacement, so the far end stays put.
inline Candidate reanchor(const Candidate& x, Vec3 old_start, Vec3 new_start) {
  const std::size_t m = x.size() / 3;
  const Vec3 d = new_start - old_start;
  Candidate out = x;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = 1.0 - static_cast<double>(i + 1) / static_cast<double>(m + 1);
    out[3 * i] += f * d.x;
    out[3 * i + 1] += f * d.y;
    out[3 * i + 2] += f * d.z;
  }
  return out;
}

/// Warm-started replan from `new_start`. The previous best and the better part
/// of the previous final population, re-anchored, seed the search; the rest of
/// the population is drawn fresh so moved obstacles can still be escaped.
/// Annealed kernels pick up their schedules part way in, since the seeds are
/// already near a good path. The
/// previous path is kept only when it is collision free and the new one is
/// not, or when the new one costs more.
inline PathPlan replan_path(const PathPlan& previous, Vec3 new_start, const Environment& env, const VehicleLimits& lim,
                            const OptimizerConfig& cfg, const PathSettings& ps = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  PathProblem problem(new_start, previous.target, env, lim, ps);
  const auto reuse = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(ps.reuse_fraction * static_cast<double>(cfg.population))));
  std::vector<Candidate> seeds;
  seeds.push_back(reanchor(previous.best, previous.start, new_start));
  Population prior = previous.trace.final_population;
  prior.sort();
  for (const auto& x : prior.x) {
    if (seeds.size() >= reuse) break;
    if (x == previous.best) continue;
    seeds.push_back(reanchor(x, previous.start, new_start));
  }
  for (auto& x : seeds) clamp_to(problem.bounds(), x);
  OptimizerConfig warm = cfg;
  warm.schedule_offset = static_cast<std::size_t>(std::lround(ps.warm_schedule * static_cast<double>(cfg.iterations)));
  PathPlan fresh = plan_path(new_start, previous.target, env, lim, warm, ps, seeds);
  const PathCost incumbent = problem.cost(seeds.front());
  const bool safer_kept = incumbent.collision == 0.0 && fresh.cost.collision > 0.0;
  if (fresh.cost.cost <= incumbent.cost && !safer_kept) return fresh;
  auto kept = detail::finish_plan(problem, seeds.front(), std::move(fresh.trace),
                                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  kept.accepted = false;
  return kept;
}

/// Position reached after travelling `elapsed` seconds along a planned path.
inline Vec3 position_after(const PathPlan& plan, double elapsed) {
  const auto& s = plan.states;
  if (s.size() == 0) return plan.start;
  if (elapsed <= 0) return s.position(0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.t[i] >= elapsed) {
      const double span = s.t[i] - s.t[i - 1];
      const double f = span > 0 ? (elapsed - s.t[i - 1]) / span : 1.0;
      return s.position(i - 1) + f * (s.position(i) - s.position(i - 1));
    }
  }
  return s.position(s.size() - 1);
}

/// Result of following a leg through a sequence of environment updates.
struct OnlineRun {
  std::vector<PathPlan> plans;       // initial plan followed by one per update
  std::vector<Environment> snapshots;  // environment each plan was made in
  std::vector<Vec3> handover;        // vehicle position at each replan
  double travelled_length = 0.0;
  double travelled_time = 0.0;
  double cpu_time = 0.0;

  const PathPlan& final_plan() const { return plans.back(); }
};

/// Plans a leg, then for each of `updates` environment updates moves the vehicle
/// one step of T/(updates+1) along the current path (T = initial flight time),
/// advances the environment, and replans from the new position.
inline OnlineRun run_online(Vec3 start, Vec3 target, Environment env, std::size_t updates, Rng& env_rng,
                            const VehicleLimits& lim, const OptimizerConfig& cfg, const PathSettings& ps = {}) {
  OnlineRun run;
  run.plans.push_back(plan_path(start, target, env, lim, cfg, ps));
  run.snapshots.push_back(env);
  run.cpu_time += run.plans.back().cost.cpu_time;
  const double step = run.plans.front().cost.time / static_cast<double>(updates + 1);
  for (std::size_t k = 1; k <= updates; ++k) {
    const PathPlan& cur = run.plans.back();
    if (cur.cost.time <= step) break;  // the target is reached before the next update
    const Vec3 pos = position_after(cur, step);
    run.travelled_time += step;
    run.travelled_length += step * lim.speed;
    env = advance_environment(env, env_rng);
    OptimizerConfig c = cfg;
    c.seed = derive_seed(cfg.seed, k);
    run.handover.push_back(pos);
    run.plans.push_back(replan_path(cur, pos, env, lim, c, ps));
    run.snapshots.push_back(env);
    run.cpu_time += run.plans.back().cost.cpu_time;
  }
  run.travelled_length += run.plans.back().cost.length;
  run.travelled_time += run.plans.back().cost.time;
  return run;
}

/// CSV with columns t,X,Y,Z,psi,theta,u,v,w.
inline std::string path_to_csv(const PathStates& s) {
  std::ostringstream out;
  out.precision(10);
  out << "t,X,Y,Z,psi,theta,u,v,w\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << s.t[i] << ',' << s.x[i] << ',' << s.y[i] << ',' << s.z[i] << ',' << s.psi[i] << ',' << s.theta[i] << ','
        << s.u[i] << ',' << s.v[i] << ',' << s.w[i] << '\n';
  return out.str();
}

}  // namespace armsp
