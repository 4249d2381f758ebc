#pragma once

#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/vec3.hpp"

namespace armsp {

/// Clamped uniform knot vector for n control points of order k (degree k-1).
inline std::vector<double> clamped_knots(std::size_t n, std::size_t k) {
  require(k >= 1 && n >= k, ErrorCode::InvalidSpline, "need at least as many control points as the spline order");
  std::vector<double> t(n + k);
  const double spans = static_cast<double>(n - k + 1);
  for (std::size_t j = 0; j < n + k; ++j) {
    if (j < k)
      t[j] = 0.0;
    else if (j >= n)
      t[j] = 1.0;
    else
      t[j] = static_cast<double>(j - k + 1) / spans;
  }
  return t;
}

/// All n basis values of order k at parameter u in [0,1] (Cox-de Boor).
inline std::vector<double> bspline_basis(std::size_t n, std::size_t k, double u) {
  const auto t = clamped_knots(n, k);
  const std::size_t m = n + k - 1;  // number of order-1 intervals
  std::vector<double> b(m, 0.0);
  if (u >= 1.0) {
    std::vector<double> last(n, 0.0);
    last[n - 1] = 1.0;
    return last;
  }
  for (std::size_t j = 0; j < m; ++j) b[j] = (t[j] <= u && u < t[j + 1]) ? 1.0 : 0.0;
  for (std::size_t order = 2; order <= k; ++order) {
    for (std::size_t j = 0; j + order <= n + k - 1 && j < m; ++j) {
      double v = 0.0;
      const double d1 = t[j + order - 1] - t[j];
      const double d2 = t[j + order] - t[j + 1];
      if (d1 > 0) v += (u - t[j]) / d1 * b[j];
      if (d2 > 0 && j + 1 < m) v += (t[j + order] - u) / d2 * b[j + 1];
      b[j] = v;
    }
  }
  b.resize(n);
  return b;
}

/// Basis values tabulated at `samples` uniform parameters, row-major
/// (samples x control points). Built once per problem and reused for every candidate.
struct BsplineTable {
  std::size_t control_points = 0;
  std::size_t order = 4;
  std::size_t samples = 0;
  std::vector<double> weights;

  static BsplineTable make(std::size_t n, std::size_t k, std::size_t samples) {
    require(samples >= 2, ErrorCode::InvalidSpline, "need at least two samples");
    clamped_knots(n, k);
    BsplineTable tab{n, k, samples, {}};
    tab.weights.reserve(n * samples);
    for (std::size_t s = 0; s < samples; ++s) {
      const double u = static_cast<double>(s) / static_cast<double>(samples - 1);
      const auto b = bspline_basis(n, k, u);
      tab.weights.insert(tab.weights.end(), b.begin(), b.end());
    }
    return tab;
  }

  /// Writes the sampled curve into `out` (resized to `samples`).
  void evaluate(const std::vector<Vec3>& control, std::vector<Vec3>& out) const {
    require(control.size() == control_points, ErrorCode::InvalidSpline, "control point count mismatch");
    out.assign(samples, Vec3{});
    for (std::size_t s = 0; s < samples; ++s) {
      const double* w = &weights[s * control_points];
      Vec3 p{};
      for (std::size_t i = 0; i < control_points; ++i)
        if (w[i] != 0.0) p += w[i] * control[i];
      out[s] = p;
    }
  }
};

inline std::vector<Vec3> bspline_curve(const std::vector<Vec3>& control, std::size_t order, std::size_t samples) {
  const auto tab = BsplineTable::make(control.size(), order, samples);
  std::vector<Vec3> out;
  tab.evaluate(control, out);
  return out;
}

}  // namespace armsp
