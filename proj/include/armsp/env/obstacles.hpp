#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/core/vec3.hpp"
#include "armsp/env/current_field.hpp"

namespace armsp {

enum class ObstacleKind { QuasiStatic, MovingUncertain, CurrentDriven };

constexpr std::string_view to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::QuasiStatic: return "quasi-static";
    case ObstacleKind::MovingUncertain: return "moving";
    case ObstacleKind::CurrentDriven: return "current-driven";
  }
  return "?";
}

struct Obstacle {
  ObstacleKind kind = ObstacleKind::QuasiStatic;
  Vec3 position;
  double radius = 0.0;            // mean radius, m
  double uncertainty_rate = 0.0;  // m per update
  double confidence_multiplier = 2.0;
  std::size_t updates = 0;
  // Current-driven shape state: (radius, radial rate, spread).
  std::array<double, 3> shape{0.0, 0.0, 0.0};

  /// Accumulated positional uncertainty (one sigma).
  double sigma() const { return uncertainty_rate * static_cast<double>(updates); }

  double boundary_radius() const {
    if (kind == ObstacleKind::CurrentDriven)
      return std::max(0.0, shape[0]) + confidence_multiplier * std::abs(shape[2]);
    return std::max(0.0, radius) + confidence_multiplier * sigma();
  }

  bool contains(Vec3 p) const { return distance(p, position) <= boundary_radius(); }
};

inline Obstacle make_obstacle(ObstacleKind kind, Vec3 position, double radius, double uncertainty_rate) {
  require(radius >= 0.0, ErrorCode::InvalidInput, "obstacle radius must be non-negative");
  Obstacle o;
  o.kind = kind;
  o.position = position;
  o.radius = radius;
  o.uncertainty_rate = uncertainty_rate;
  o.shape = {radius, 0.0, 0.0};
  return o;
}

struct ObstacleSettings {
  double sigma_position = 50.0;  // lateral scatter around the start-target segment, m
  double sigma_rate = 5.0;       // uncertainty rate drawn from U(0, sigma_rate)
  double sigma_shape = 1.0;      // shape process noise, scaled by each obstacle's rate
  double radius_mean = 40.0;
  double radius_sd = 10.0;
  double radius_floor = 10.0;
  double clearance = 15.0;       // extra space kept around start and target
  std::size_t expected_updates = 4;  // growth budget when checking endpoint clearance
};

struct ObstacleCounts {
  std::size_t quasi_static = 0;
  std::size_t moving = 0;
  std::size_t current_driven = 0;
  std::size_t total() const { return quasi_static + moving + current_driven; }
};

/// Places obstacles between start and target: a uniform point on the segment plus
/// Gaussian lateral scatter. Candidates whose grown boundary would swallow an
/// endpoint are redrawn.
inline std::vector<Obstacle> spawn_obstacles(const ObstacleCounts& counts, Vec3 start, Vec3 target,
                                             const ObstacleSettings& s, Rng& rng, double z_min = 0.0,
                                             double z_max = 100.0) {
  std::vector<Obstacle> out;
  auto spawn = [&](ObstacleKind kind) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double f = rng.uniform(0.15, 0.85);
      Vec3 c = start + f * (target - start);
      c.x += rng.normal(0.0, s.sigma_position);
      c.y += rng.normal(0.0, s.sigma_position);
      c.z = std::clamp(c.z + rng.normal(0.0, 0.2 * s.sigma_position), z_min, z_max);
      const double r = std::max(s.radius_floor, rng.normal(s.radius_mean, s.radius_sd));
      const double rate = rng.uniform(0.0, s.sigma_rate);
      Obstacle o = make_obstacle(kind, c, r, rate);
      const double grown = r + o.confidence_multiplier * rate * static_cast<double>(s.expected_updates + 1) + s.clearance;
      if (distance(c, start) > grown && distance(c, target) > grown) {
        out.push_back(o);
        return;
      }
    }
    fail(ErrorCode::GenerationFailed, "could not place obstacle clear of the endpoints");
  };
  for (std::size_t i = 0; i < counts.quasi_static; ++i) spawn(ObstacleKind::QuasiStatic);
  for (std::size_t i = 0; i < counts.moving; ++i) spawn(ObstacleKind::MovingUncertain);
  for (std::size_t i = 0; i < counts.current_driven; ++i) spawn(ObstacleKind::CurrentDriven);
  return out;
}

/// Shape recursion for current-driven obstacles: s' = B1 s + B2 x + B3 rate.
inline std::array<double, 3> propagate_shape(const std::array<double, 3>& s, double current_speed, double noise,
                                             double rate) {
  return {s[0] + current_speed * s[1], s[1] + noise, s[2] + noise + current_speed * rate};
}

/// One update of every obstacle. `period` is the time covered by the update (s)
/// and is used for the drift of current-driven obstacles.
inline std::vector<Obstacle> advance_obstacles(const std::vector<Obstacle>& obstacles, const CurrentField& field,
                                               Rng& rng, double period, double sigma_shape = 1.0) {
  std::vector<Obstacle> next = obstacles;
  for (auto& o : next) {
    switch (o.kind) {
      case ObstacleKind::QuasiStatic:
        break;
      case ObstacleKind::MovingUncertain:
        o.position.x += rng.uniform(-o.uncertainty_rate, o.uncertainty_rate);
        o.position.y += rng.uniform(-o.uncertainty_rate, o.uncertainty_rate);
        o.position.z += rng.uniform(-o.uncertainty_rate, o.uncertainty_rate);
        break;
      case ObstacleKind::CurrentDriven: {
        const Vec3 vc = current_velocity(field, o.position);
        const double speed = norm(vc);
        const double x = rng.normal(0.0, sigma_shape * o.uncertainty_rate);
        o.shape = propagate_shape(o.shape, speed, x, o.uncertainty_rate);
        o.position.x += vc.x * period + rng.normal(0.0, o.uncertainty_rate);
        o.position.y += vc.y * period + rng.normal(0.0, o.uncertainty_rate);
        o.position.z += vc.z * period + rng.normal(0.0, o.uncertainty_rate);
        o.radius = std::max(0.0, o.shape[0]);
        break;
      }
    }
    ++o.updates;
  }
  return next;
}

}  // namespace armsp
