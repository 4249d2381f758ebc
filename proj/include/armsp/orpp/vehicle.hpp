#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "armsp/core/error.hpp"
#include "armsp/core/vec3.hpp"

namespace armsp {

inline constexpr double kDegree = std::numbers::pi / 180.0;

/// Operating envelope of the vehicle and the penalty weight per unit of excess.
/// Angles are stored in degrees; excesses are charged in radians.
struct VehicleLimits {
  double z_min = 0.0;
  double z_max = 100.0;
  double u_max = 2.7;
  double v_min = -0.5;
  double v_max = 0.5;
  double pitch_max_deg = 20.0;
  double yaw_step_min_deg = -17.0;  // per sample step
  double yaw_step_max_deg = 17.0;
  double speed = 2.5;

  double eps_z_min = 100.0;
  double eps_z_max = 100.0;
  double eps_surge = 100.0;
  double eps_sway = 100.0;
  double eps_pitch = 100.0;
  double eps_yaw = 100.0;
  double eps_collision = 1.0e4;  // per offending check point
  double uncertain_weight = 0.5;  // uncertain cells count as this fraction of a collision
  double collision_step = 5.0;    // m between collision checks along the curve; half a map cell

  void validate() const {
    require(z_min < z_max, ErrorCode::InvalidInput, "z_min must be below z_max");
    require(u_max > 0 && speed > 0, ErrorCode::InvalidInput, "speeds must be positive");
    require(collision_step > 0, ErrorCode::InvalidInput, "collision step must be positive");
    require(v_min <= v_max && yaw_step_min_deg <= yaw_step_max_deg && pitch_max_deg >= 0, ErrorCode::InvalidInput,
            "inverted vehicle bounds");
    for (double e : {eps_z_min, eps_z_max, eps_surge, eps_sway, eps_pitch, eps_yaw, eps_collision, uncertain_weight})
      require(e >= 0, ErrorCode::InvalidInput, "penalty weights must be non-negative");
  }
};

/// Body-to-world rotation for heading psi and pitch theta (roll held at zero).
inline Mat3 body_to_world(double psi, double theta) {
  const double cp = std::cos(psi), sp = std::sin(psi), ct = std::cos(theta), st = std::sin(theta);
  return {{{cp * ct, -sp, cp * st}, {sp * ct, cp, sp * st}, {-st, 0.0, ct}}};
}

/// Pose and body velocities; roll and the body rates are carried but unused.
struct VehicleState {
  std::array<double, 6> eta{};  // X, Y, Z, roll, pitch, yaw
  std::array<double, 6> nu{};   // u, v, w, p, q, r

  Vec3 position() const { return {eta[0], eta[1], eta[2]}; }
};

/// Heading difference wrapped to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace armsp
