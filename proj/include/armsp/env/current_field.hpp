#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/core/vec3.hpp"

namespace armsp {

struct LambVortex {
  double x0 = 0.0;
  double y0 = 0.0;
  double radius = 1.0;    // core radius, m
  double strength = 0.0;  // circulation, m^2/s; sign is the rotation sense
};

struct CurrentSettings {
  double vertical_scale = 0.1;
  std::size_t layer_count = 5;
  double depth_extent = 100.0;         // layers split [0, depth_extent] into uniform bands
  double layer_noise_fraction = 0.05;  // per-layer sigma relative to each parameter's magnitude
  double update_period = 4.0;          // s
  double noise_lo = 0.1;               // update rate drawn uniformly from [noise_lo, noise_hi]
  double noise_hi = 0.8;
  double sigma_center = 20.0;  // m
  double sigma_radius = 0.5;   // m
  double sigma_strength = 2.0; // m^2/s
  double min_radius = 0.1;     // m
  double kinematic_viscosity = 1.0e-6;  // m^2/s, carried for reference only
};

/// Snapshot of the vortex field. `layers[k]` holds the materialized vortex set for
/// depth band k; `offsets` are the fixed per-layer perturbations applied to `base`.
struct CurrentField {
  std::vector<LambVortex> base;
  std::vector<std::vector<LambVortex>> offsets;
  std::vector<std::vector<LambVortex>> layers;
  CurrentSettings settings;
  double time = 0.0;
  std::size_t updates = 0;
  double drift_u = 0.0;  // uniform background flow added everywhere, m/s
  double drift_v = 0.0;

  std::size_t layer_of(double z) const {
    const auto n = layers.size();
    if (n <= 1 || settings.depth_extent <= 0.0) return 0;
    const double band = settings.depth_extent / static_cast<double>(n);
    const double idx = std::floor(std::max(0.0, z) / band);
    return std::min(n - 1, static_cast<std::size_t>(idx));
  }
};

namespace detail {
inline void materialize_layers(CurrentField& f) {
  f.layers.assign(f.offsets.size(), {});
  for (std::size_t k = 0; k < f.offsets.size(); ++k) {
    auto& layer = f.layers[k];
    layer.resize(f.base.size());
    for (std::size_t i = 0; i < f.base.size(); ++i) {
      const auto& b = f.base[i];
      const auto& o = f.offsets[k][i];
      layer[i] = {b.x0 + o.x0, b.y0 + o.y0, std::max(f.settings.min_radius, b.radius + o.radius),
                  b.strength + o.strength};
    }
  }
}
}  // namespace detail

/// Builds a field from base vortices. Layer 0 is the base set; each deeper layer
/// re-perturbs the one above with Gaussian noise scaled by the parameter magnitude.
inline CurrentField make_current_field(std::vector<LambVortex> vortices, const CurrentSettings& settings, Rng& rng) {
  require(settings.layer_count >= 1, ErrorCode::InvalidInput, "layer_count must be >= 1");
  require(settings.update_period > 0.0, ErrorCode::InvalidInput, "update_period must be positive");
  require(settings.min_radius > 0.0, ErrorCode::InvalidInput, "min_radius must be positive");
  CurrentField f;
  f.settings = settings;
  f.base = std::move(vortices);
  for (auto& v : f.base) v.radius = std::max(settings.min_radius, v.radius);
  f.offsets.assign(settings.layer_count, std::vector<LambVortex>(f.base.size(), LambVortex{0, 0, 0, 0}));
  const double s = settings.layer_noise_fraction;
  for (std::size_t k = 1; k < settings.layer_count; ++k) {
    for (std::size_t i = 0; i < f.base.size(); ++i) {
      const auto& b = f.base[i];
      const auto& above = f.offsets[k - 1][i];
      auto& o = f.offsets[k][i];
      o.x0 = above.x0 + rng.normal(0.0, s * std::abs(b.x0 + above.x0));
      o.y0 = above.y0 + rng.normal(0.0, s * std::abs(b.y0 + above.y0));
      o.radius = above.radius + rng.normal(0.0, s * std::abs(b.radius + above.radius));
      o.strength = above.strength + rng.normal(0.0, s * std::abs(b.strength + above.strength));
    }
  }
  detail::materialize_layers(f);
  return f;
}

struct VortexSpawn {
  std::size_t count = 50;
  double x_min = 0, x_max = 3500, y_min = 0, y_max = 3500;
  double radius_min = 2.8, radius_max = 2.8;
  double strength_min = 12.0, strength_max = 12.0;
  bool random_sign = true;
};

inline std::vector<LambVortex> random_vortices(const VortexSpawn& s, Rng& rng) {
  std::vector<LambVortex> out;
  out.reserve(s.count);
  for (std::size_t i = 0; i < s.count; ++i) {
    LambVortex v;
    v.x0 = rng.uniform(s.x_min, s.x_max);
    v.y0 = rng.uniform(s.y_min, s.y_max);
    v.radius = rng.uniform(s.radius_min, s.radius_max);
    v.strength = rng.uniform(s.strength_min, s.strength_max);
    if (s.random_sign && rng.bernoulli(0.5)) v.strength = -v.strength;
    out.push_back(v);
  }
  return out;
}

/// Horizontal Lamb vortex velocity of a single vortex at (x, y).
inline void lamb_horizontal(const LambVortex& v, double x, double y, double& u, double& w) {
  const double dx = x - v.x0, dy = y - v.y0;
  const double r2 = dx * dx + dy * dy;
  if (r2 == 0.0) {
    u = w = 0.0;
    return;
  }
  const double q = r2 / (v.radius * v.radius);
  // beyond q = 40 the core term is below 1e-17 and rounds away anyway
  const double profile = q > 40.0 ? 1.0 : -std::expm1(-q);
  const double k = v.strength * profile / (2.0 * std::numbers::pi * r2);
  u = -k * dy;
  w = k * dx;
}

/// Current velocity (u_c, v_c, w_c) at p for the snapshot's time.
inline Vec3 current_velocity(const CurrentField& field, Vec3 p) {
  Vec3 out{field.drift_u, field.drift_v, 0.0};
  if (field.layers.empty()) return out;
  const auto& layer = field.layers[field.layer_of(p.z)];
  const double gamma = field.settings.vertical_scale;
  for (const auto& v : layer) {
    double u, w;
    lamb_horizontal(v, p.x, p.y, u, w);
    out.x += u;
    out.y += w;
    const double dx = p.x - v.x0, dy = p.y - v.y0;
    const double e = (dx * dx + dy * dy) / (2.0 * v.radius);
    if (e < 700.0) out.z += gamma * v.strength / (2.0 * std::numbers::pi * v.radius) * std::exp(-e);
  }
  return out;
}

/// Horizontal part only; the hot path of path evaluation.
inline void current_horizontal(const CurrentField& field, Vec3 p, double& u, double& v) {
  u = field.drift_u;
  v = field.drift_v;
  if (field.layers.empty()) return;
  for (const auto& vortex : field.layers[field.layer_of(p.z)]) {
    double a, b;
    lamb_horizontal(vortex, p.x, p.y, a, b);
    u += a;
    v += b;
  }
}

/// One noisy update of every base vortex; the input is left untouched.
inline CurrentField advance_current(const CurrentField& field, Rng& rng) {
  CurrentField next = field;
  const auto& s = field.settings;
  const double rate = rng.uniform(s.noise_lo, s.noise_hi);
  for (auto& v : next.base) {
    v.x0 += rate * rng.normal(0.0, s.sigma_center);
    v.y0 += rate * rng.normal(0.0, s.sigma_center);
    v.radius = std::max(s.min_radius, v.radius + rate * rng.normal(0.0, s.sigma_radius));
    v.strength += rate * rng.normal(0.0, s.sigma_strength);
  }
  detail::materialize_layers(next);
  next.time += s.update_period;
  ++next.updates;
  return next;
}

}  // namespace armsp
