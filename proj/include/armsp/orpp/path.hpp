#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "armsp/env/environment.hpp"
#include "armsp/orpp/vehicle.hpp"

namespace armsp {

/// Per-sample trajectory. Sample i carries the heading, pitch and velocities of
/// the segment that leaves it; the last sample repeats the final segment.
struct PathStates {
  std::vector<double> t, x, y, z, psi, theta, u, v, w;
  double length = 0.0;
  double time = 0.0;

  std::size_t size() const { return x.size(); }
  Vec3 position(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

/// Raw violation amounts (before the penalty weights) and the resulting cost.
struct PathCost {
  double cost = 0.0;
  double length = 0.0;
  double time = 0.0;
  double depth = 0.0;      // m outside [z_min, z_max], summed over samples
  double surge = 0.0;      // m/s above u_max, summed over segments
  double sway = 0.0;       // m/s outside [v_min, v_max]
  double pitch = 0.0;      // rad above the pitch bound
  double yaw_rate = 0.0;   // rad outside the per-step heading change bounds
  double collision = 0.0;  // offending check points, uncertain cells weighted
  double cpu_time = 0.0;

  double kinematic() const { return depth + surge + sway + pitch + yaw_rate; }
  double total_violation() const { return kinematic() + collision; }
};

/// Heading and pitch of one straight segment.
inline void segment_angles(Vec3 a, Vec3 b, double& psi, double& theta) {
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  psi = std::atan2(dy, dx);
  theta = std::atan2(-dz, std::hypot(dx, dy));
}

/// States and cost of a sampled curve in one environment snapshot. The current
/// is read at segment midpoints. Collisions are checked every collision_step
/// metres along each segment, not only at the samples, so a path cannot slip
/// through a thin wall between two samples. The first sample is where the
/// vehicle already is, so it is not charged: a replan cannot move it, and an
/// obstacle's growing uncertainty boundary may have reached it. Surge and sway are the body-frame components
/// of the ground velocity, so a bound on sway limits cross-track drift rather
/// than eastward motion.
inline PathCost evaluate_path(const std::vector<Vec3>& curve, const Environment& env, const VehicleLimits& lim,
                              PathStates* states = nullptr) {
  PathCost c;
  const std::size_t n = curve.size();
  if (states) {
    *states = PathStates{};
    for (auto* vec : {&states->t, &states->x, &states->y, &states->z, &states->psi, &states->theta, &states->u,
                      &states->v, &states->w})
      vec->assign(n, 0.0);
  }
  if (n == 0) return c;
  const double pitch_max = lim.pitch_max_deg * kDegree;
  const double yaw_lo = lim.yaw_step_min_deg * kDegree, yaw_hi = lim.yaw_step_max_deg * kDegree;
  const GridMap* map = env.map.get();
  auto charge = [&](Vec3 p) {
    const Occupancy occ = collision_query(p, *map, env.obstacles);
    if (occ == Occupancy::Free) return 0.0;
    return occ == Occupancy::Uncertain ? lim.uncertain_weight : 1.0;
  };

  double below = 0.0, above = 0.0;
  double prev_psi = 0.0;
  double psi = 0.0, theta = 0.0, u = 0.0, v = 0.0, w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 p = curve[i];
    if (p.z < lim.z_min) below += lim.z_min - p.z;
    if (p.z > lim.z_max) above += p.z - lim.z_max;
    if (map) {
      if (i > 0) c.collision += charge(p);
      if (i + 1 < n) {
        const Vec3 q = curve[i + 1];
        const auto steps = static_cast<std::size_t>(std::ceil(distance(p, q) / lim.collision_step));
        for (std::size_t j = 1; j < steps; ++j)
          c.collision += charge(p + (static_cast<double>(j) / static_cast<double>(steps)) * (q - p));
      }
    }

    if (i + 1 < n) {
      const Vec3 q = curve[i + 1];
      const double seg = distance(p, q);
      if (seg > 0.0) segment_angles(p, q, psi, theta);  // a zero-length step keeps the previous attitude
      double uc = 0.0, vc = 0.0;
      current_horizontal(env.current, 0.5 * (p + q), uc, vc);
      const double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(psi), sp = std::sin(psi);
      u = lim.speed * ct * cp + uc;
      v = lim.speed * ct * sp + vc;
      w = lim.speed * st;
      // body frame: R^T applied to the ground velocity
      const double surge = cp * ct * u + sp * ct * v - st * w;
      const double sway = -sp * u + cp * v;
      if (surge > lim.u_max) c.surge += surge - lim.u_max;
      if (sway > lim.v_max) c.sway += sway - lim.v_max;
      if (sway < lim.v_min) c.sway += lim.v_min - sway;
      if (std::abs(theta) > pitch_max) c.pitch += std::abs(theta) - pitch_max;
      if (i > 0) {
        const double dpsi = wrap_angle(psi - prev_psi);
        if (dpsi > yaw_hi) c.yaw_rate += dpsi - yaw_hi;
        if (dpsi < yaw_lo) c.yaw_rate += yaw_lo - dpsi;
      }
      prev_psi = psi;
      c.length += seg;
    }
    if (states) {
      states->x[i] = p.x;
      states->y[i] = p.y;
      states->z[i] = p.z;
      states->psi[i] = psi;
      states->theta[i] = theta;
      states->u[i] = u;
      states->v[i] = v;
      states->w[i] = w;
    }
  }
  c.time = c.length / lim.speed;
  if (states) {
    double acc = 0.0;
    states->t[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      acc += distance(curve[i - 1], curve[i]);
      states->t[i] = acc / lim.speed;
    }
    states->length = c.length;
    states->time = c.time;
  }
  c.depth = below + above;
  c.cost = c.length + lim.eps_z_min * below + lim.eps_z_max * above + lim.eps_surge * c.surge + lim.eps_sway * c.sway +
           lim.eps_pitch * c.pitch + lim.eps_yaw * c.yaw_rate + lim.eps_collision * c.collision;
  return c;
}

}  // namespace armsp
