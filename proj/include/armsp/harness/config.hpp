#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "armsp/core/error.hpp"
#include "armsp/core/vec3.hpp"
#include "armsp/env/current_field.hpp"
#include "armsp/env/obstacles.hpp"
#include "armsp/opt/config.hpp"
#include "armsp/orpp/planner.hpp"
#include "armsp/orpp/vehicle.hpp"
#include "armsp/tar/cost.hpp"

namespace armsp {

enum class ScenarioKind { Tar, Orpp, Mission };

constexpr std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Tar: return "tar";
    case ScenarioKind::Orpp: return "orpp";
    case ScenarioKind::Mission: return "mission";
  }
  return "?";
}

struct MapConfig {
  std::string source = "synthetic";  // synthetic | open | none | file (PPM chart)
  std::string path;
  std::size_t width_cells = 1000;
  std::size_t height_cells = 1000;
  double cell_size = 10.0;
  std::size_t islands = 8;
  std::size_t clusters = 3;
  std::uint64_t seed = 7;  // the chart is fixed across runs of a battery
};

struct GraphConfig {
  std::size_t nodes_min = 30;
  std::size_t nodes_max = 50;
  std::vector<std::size_t> sweep;  // when set, every run is repeated at each node count
  std::size_t degree = 4;
  std::size_t tasks = 15;
  double cruise_speed = 2.5;
};

struct CurrentConfig {
  std::size_t vortices = 50;
  double extent = 3500.0;  // vortex centres drawn on [0, extent]^2
  double radius = 2.8;
  double strength = 12.0;
  double noise_lo = 0.1;
  double noise_hi = 0.8;
  double update_period = 4.0;
};

struct LegConfig {
  Vec3 start{250, 250, 50};
  Vec3 target{3250, 3250, 50};
  std::size_t updates = 4;
  ObstacleCounts obstacles{};
};

struct MissionConfig {
  double reserve = 0.05;
  double update_period = 300.0;
  std::size_t max_updates_per_leg = 20;
  ObstacleCounts leg_obstacles{2, 1, 0};
  bool include_cpu = false;
};

struct AlgorithmConfig {
  std::vector<Algorithm> tar{Algorithm::GA};
  std::vector<Algorithm> orpp{Algorithm::FA};
  std::size_t tar_population = 70;
  std::size_t tar_iterations = 100;
  std::size_t orpp_population = 100;
  std::size_t orpp_iterations = 100;
};

/// Everything a battery needs. Defaults here are neutral; the presets carry the
/// study values.
struct ScenarioConfig {
  std::string preset = "custom";
  ScenarioKind kind = ScenarioKind::Tar;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::size_t workers = 1;
  double total_time = 10800.0;
  MapConfig map;
  GraphConfig graph;
  CurrentConfig current;
  LegConfig leg;
  MissionConfig mission;
  AlgorithmConfig algorithms;
  VehicleLimits limits;

  void validate() const {
    auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::ConfigError, what); };
    check(runs >= 1, "runs must be >= 1");
    check(workers >= 1, "workers must be >= 1");
    check(total_time > 0, "total_time must be positive");
    check(map.source == "synthetic" || map.source == "open" || map.source == "none" || map.source == "file",
          "map.source must be synthetic, open, none or file");
    check(map.source != "file" || !map.path.empty(), "map.path is required for a file map");
    check(map.width_cells >= 2 && map.height_cells >= 2 && map.cell_size > 0, "map dimensions must be positive");
    check(map.clusters >= 2, "map.clusters must be >= 2");
    check(graph.nodes_min >= 2 && graph.nodes_min <= graph.nodes_max, "graph node range is invalid");
    for (auto n : graph.sweep) check(n >= 2, "sweep node counts must be >= 2");
    check(graph.degree >= 1 && graph.tasks >= 1 && graph.cruise_speed > 0, "graph parameters must be positive");
    check(current.extent > 0 && current.radius > 0, "current extent and radius must be positive");
    check(current.noise_lo >= 0 && current.noise_lo <= current.noise_hi, "current noise range is invalid");
    check(current.update_period > 0, "current update period must be positive");
    check(!(leg.start == leg.target), "leg start and target coincide");
    check(mission.reserve >= 0 && mission.reserve < 1, "mission.reserve must lie in [0,1)");
    check(mission.update_period > 0, "mission.update_period must be positive");
    check(!algorithms.tar.empty() || kind == ScenarioKind::Orpp, "at least one route planner algorithm is required");
    check(!algorithms.orpp.empty() || kind == ScenarioKind::Tar, "at least one path planner algorithm is required");
    for (auto a : algorithms.orpp) check(a != Algorithm::ACO, "aco searches graphs and cannot plan paths");
    check(algorithms.tar_population >= 1 && algorithms.tar_iterations >= 1 && algorithms.orpp_population >= 1 &&
              algorithms.orpp_iterations >= 1,
          "populations and iteration counts must be >= 1");
    try {
      limits.validate();
    } catch (const Error& e) {
      fail(ErrorCode::ConfigError, e.what());
    }
  }

  OptimizerConfig tar_optimizer(Algorithm a) const {
    auto c = route_planner_defaults(a);
    c.population = algorithms.tar_population;
    c.iterations = algorithms.tar_iterations;
    return c;
  }

  OptimizerConfig orpp_optimizer(Algorithm a) const {
    auto c = path_planner_defaults(a);
    c.population = algorithms.orpp_population;
    c.iterations = algorithms.orpp_iterations;
    return c;
  }

  CurrentSettings current_settings() const {
    CurrentSettings s;
    s.noise_lo = current.noise_lo;
    s.noise_hi = current.noise_hi;
    s.update_period = current.update_period;
    return s;
  }

  VortexSpawn vortex_spawn() const {
    VortexSpawn v;
    v.count = current.vortices;
    v.x_max = v.y_max = current.extent;
    v.radius_min = v.radius_max = current.radius;
    v.strength_min = v.strength_max = current.strength;
    return v;
  }
};

namespace detail {

/// Reads known keys from a JSON object and rejects anything else, so a typo in
/// a config file is an error instead of a silently ignored setting.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j.is_object(), ErrorCode::ConfigError, where_ + " must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ConfigError, where_ + "." + key + ": " + e.what());
    }
  }

  const nlohmann::json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) fail(ErrorCode::ConfigError, "unknown key " + where_ + "." + item.key());
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

inline Vec3 vec_from_json(const nlohmann::json& j, const std::string& where) {
  require(j.is_array() && j.size() == 3, ErrorCode::ConfigError, where + " must be [x, y, z]");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ConfigError, where + ": " + e.what());
  }
}

inline ObstacleCounts counts_from_json(const nlohmann::json& j, const std::string& where) {
  ObstacleCounts c;
  ObjectReader r(j, where);
  r.get("quasi_static", c.quasi_static);
  r.get("moving", c.moving);
  r.get("current_driven", c.current_driven);
  r.finish();
  return c;
}

inline nlohmann::json counts_to_json(const ObstacleCounts& c) {
  return {{"quasi_static", c.quasi_static}, {"moving", c.moving}, {"current_driven", c.current_driven}};
}

inline std::vector<Algorithm> algorithms_from_json(const nlohmann::json& j, const std::string& where) {
  require(j.is_array(), ErrorCode::ConfigError, where + " must be a list of algorithm names");
  std::vector<Algorithm> out;
  for (const auto& item : j) {
    require(item.is_string(), ErrorCode::ConfigError, where + " entries must be strings");
    const auto a = parse_algorithm(item.get<std::string>());
    require(a.has_value(), ErrorCode::ConfigError, where + ": unknown algorithm " + item.get<std::string>());
    out.push_back(*a);
  }
  return out;
}

inline nlohmann::json algorithms_to_json(const std::vector<Algorithm>& v) {
  auto out = nlohmann::json::array();
  for (auto a : v) out.push_back(std::string(to_string(a)));
  return out;
}

}  // namespace detail

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
  const auto& l = c.limits;
  return {
      {"preset", c.preset},
      {"kind", std::string(to_string(c.kind))},
      {"seed", c.seed},
      {"runs", c.runs},
      {"workers", c.workers},
      {"total_time", c.total_time},
      {"map",
       {{"source", c.map.source}, {"path", c.map.path}, {"width_cells", c.map.width_cells},
        {"height_cells", c.map.height_cells}, {"cell_size", c.map.cell_size}, {"islands", c.map.islands},
        {"clusters", c.map.clusters}, {"seed", c.map.seed}}},
      {"graph",
       {{"nodes_min", c.graph.nodes_min}, {"nodes_max", c.graph.nodes_max}, {"sweep", c.graph.sweep},
        {"degree", c.graph.degree}, {"tasks", c.graph.tasks}, {"cruise_speed", c.graph.cruise_speed}}},
      {"current",
       {{"vortices", c.current.vortices}, {"extent", c.current.extent}, {"radius", c.current.radius},
        {"strength", c.current.strength}, {"noise_lo", c.current.noise_lo}, {"noise_hi", c.current.noise_hi},
        {"update_period", c.current.update_period}}},
      {"leg",
       {{"start", {c.leg.start.x, c.leg.start.y, c.leg.start.z}},
        {"target", {c.leg.target.x, c.leg.target.y, c.leg.target.z}},
        {"updates", c.leg.updates},
        {"obstacles", detail::counts_to_json(c.leg.obstacles)}}},
      {"mission",
       {{"reserve", c.mission.reserve}, {"update_period", c.mission.update_period},
        {"max_updates_per_leg", c.mission.max_updates_per_leg},
        {"leg_obstacles", detail::counts_to_json(c.mission.leg_obstacles)}, {"include_cpu", c.mission.include_cpu}}},
      {"algorithms",
       {{"tar", detail::algorithms_to_json(c.algorithms.tar)}, {"orpp", detail::algorithms_to_json(c.algorithms.orpp)},
        {"tar_population", c.algorithms.tar_population}, {"tar_iterations", c.algorithms.tar_iterations},
        {"orpp_population", c.algorithms.orpp_population}, {"orpp_iterations", c.algorithms.orpp_iterations}}},
      {"limits",
       {{"z_min", l.z_min}, {"z_max", l.z_max}, {"u_max", l.u_max}, {"v_min", l.v_min}, {"v_max", l.v_max},
        {"pitch_max_deg", l.pitch_max_deg}, {"yaw_step_min_deg", l.yaw_step_min_deg},
        {"yaw_step_max_deg", l.yaw_step_max_deg}, {"speed", l.speed}}},
  };
}

/// Overlays `j` on `base`. Unknown keys and wrongly typed values raise ConfigError.
inline ScenarioConfig config_from_json(const nlohmann::json& j, ScenarioConfig c = {}) {
  using detail::ObjectReader;
  ObjectReader r(j, "config");
  r.get("preset", c.preset);
  std::string kind(to_string(c.kind));
  r.get("kind", kind);
  if (kind == "tar") c.kind = ScenarioKind::Tar;
  else if (kind == "orpp") c.kind = ScenarioKind::Orpp;
  else if (kind == "mission") c.kind = ScenarioKind::Mission;
  else fail(ErrorCode::ConfigError, "config.kind must be tar, orpp or mission");
  r.get("seed", c.seed);
  r.get("runs", c.runs);
  r.get("workers", c.workers);
  r.get("total_time", c.total_time);
  if (auto* m = r.child("map")) {
    ObjectReader s(*m, r.path("map"));
    s.get("source", c.map.source);
    s.get("path", c.map.path);
    s.get("width_cells", c.map.width_cells);
    s.get("height_cells", c.map.height_cells);
    s.get("cell_size", c.map.cell_size);
    s.get("islands", c.map.islands);
    s.get("clusters", c.map.clusters);
    s.get("seed", c.map.seed);
    s.finish();
  }
  if (auto* g = r.child("graph")) {
    ObjectReader s(*g, r.path("graph"));
    s.get("nodes_min", c.graph.nodes_min);
    s.get("nodes_max", c.graph.nodes_max);
    s.get("sweep", c.graph.sweep);
    s.get("degree", c.graph.degree);
    s.get("tasks", c.graph.tasks);
    s.get("cruise_speed", c.graph.cruise_speed);
    s.finish();
  }
  if (auto* cu = r.child("current")) {
    ObjectReader s(*cu, r.path("current"));
    s.get("vortices", c.current.vortices);
    s.get("extent", c.current.extent);
    s.get("radius", c.current.radius);
    s.get("strength", c.current.strength);
    s.get("noise_lo", c.current.noise_lo);
    s.get("noise_hi", c.current.noise_hi);
    s.get("update_period", c.current.update_period);
    s.finish();
  }
  if (auto* l = r.child("leg")) {
    ObjectReader s(*l, r.path("leg"));
    if (auto* p = s.child("start")) c.leg.start = detail::vec_from_json(*p, s.path("start"));
    if (auto* p = s.child("target")) c.leg.target = detail::vec_from_json(*p, s.path("target"));
    s.get("updates", c.leg.updates);
    if (auto* o = s.child("obstacles")) c.leg.obstacles = detail::counts_from_json(*o, s.path("obstacles"));
    s.finish();
  }
  if (auto* m = r.child("mission")) {
    ObjectReader s(*m, r.path("mission"));
    s.get("reserve", c.mission.reserve);
    s.get("update_period", c.mission.update_period);
    s.get("max_updates_per_leg", c.mission.max_updates_per_leg);
    if (auto* o = s.child("leg_obstacles")) c.mission.leg_obstacles = detail::counts_from_json(*o, s.path("leg_obstacles"));
    s.get("include_cpu", c.mission.include_cpu);
    s.finish();
  }
  if (auto* a = r.child("algorithms")) {
    ObjectReader s(*a, r.path("algorithms"));
    if (auto* t = s.child("tar")) c.algorithms.tar = detail::algorithms_from_json(*t, s.path("tar"));
    if (auto* o = s.child("orpp")) c.algorithms.orpp = detail::algorithms_from_json(*o, s.path("orpp"));
    s.get("tar_population", c.algorithms.tar_population);
    s.get("tar_iterations", c.algorithms.tar_iterations);
    s.get("orpp_population", c.algorithms.orpp_population);
    s.get("orpp_iterations", c.algorithms.orpp_iterations);
    s.finish();
  }
  if (auto* l = r.child("limits")) {
    ObjectReader s(*l, r.path("limits"));
    s.get("z_min", c.limits.z_min);
    s.get("z_max", c.limits.z_max);
    s.get("u_max", c.limits.u_max);
    s.get("v_min", c.limits.v_min);
    s.get("v_max", c.limits.v_max);
    s.get("pitch_max_deg", c.limits.pitch_max_deg);
    s.get("yaw_step_min_deg", c.limits.yaw_step_min_deg);
    s.get("yaw_step_max_deg", c.limits.yaw_step_max_deg);
    s.get("speed", c.limits.speed);
    s.finish();
  }
  r.finish();
  c.validate();
  return c;
}

inline ScenarioConfig config_from_text(const std::string& text, ScenarioConfig base = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);  // comments allowed
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j, std::move(base));
}

}  // namespace armsp
