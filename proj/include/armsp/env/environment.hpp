#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "armsp/core/rng.hpp"
#include "armsp/core/vec3.hpp"
#include "armsp/env/current_field.hpp"
#include "armsp/env/grid_map.hpp"
#include "armsp/env/obstacles.hpp"

namespace armsp {

enum class Occupancy { Free, Coast, Uncertain, ObstacleHit, OutOfBounds };

constexpr std::string_view to_string(Occupancy o) {
  switch (o) {
    case Occupancy::Free: return "Free";
    case Occupancy::Coast: return "Coast";
    case Occupancy::Uncertain: return "Uncertain";
    case Occupancy::ObstacleHit: return "ObstacleHit";
    case Occupancy::OutOfBounds: return "OutOfBounds";
  }
  return "?";
}

/// Coast wins over obstacles, obstacles over uncertain cells. Callers treat
/// OutOfBounds like Coast.
inline Occupancy collision_query(Vec3 p, const GridMap& map, const std::vector<Obstacle>& obstacles) {
  const auto cell = map.value_at(p.x, p.y);
  if (!cell) return Occupancy::OutOfBounds;
  const auto cls = map.classify(*cell);
  if (cls == CellClass::Coast) return Occupancy::Coast;
  for (const auto& o : obstacles)
    if (o.contains(p)) return Occupancy::ObstacleHit;
  if (cls == CellClass::Uncertain) return Occupancy::Uncertain;
  return Occupancy::Free;
}

/// Immutable snapshot of everything the path planner sees. The map is shared
/// between snapshots since it never changes.
struct Environment {
  std::shared_ptr<const GridMap> map;
  CurrentField current;
  std::vector<Obstacle> obstacles;
  double sigma_shape = 1.0;

  double time() const { return current.time; }
};

/// One environment update: current first, then obstacles against the new current.
inline Environment advance_environment(const Environment& env, Rng& rng) {
  Environment next;
  next.map = env.map;
  next.sigma_shape = env.sigma_shape;
  next.current = advance_current(env.current, rng);
  next.obstacles = advance_obstacles(env.obstacles, next.current, rng, env.current.settings.update_period,
                                     env.sigma_shape);
  return next;
}

}  // namespace armsp
