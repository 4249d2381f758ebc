#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/env/grid_map.hpp"

namespace armsp {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(Rgb, Rgb) = default;
};

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  // row-major, row 0 first

  Rgb& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgb& at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

struct ClusterSettings {
  Rgb water_reference{0, 0, 255};
  Rgb coast_reference{139, 69, 19};
  double uncertain_value = 0.2;
  double water_threshold = 0.35;
  double cell_size = 10.0;
  std::size_t max_iterations = 100;
};

struct ClusterResult {
  GridMap map;
  std::vector<std::array<double, 3>> centroids;
  std::vector<std::size_t> cluster_sizes;
  std::size_t iterations = 0;
  std::size_t empty_clusters = 0;
  bool degenerate = false;  // k exceeded the number of distinct colors
};

namespace detail {
inline double color_distance2(const std::array<double, 3>& c, Rgb p) {
  const double dr = c[0] - p.r, dg = c[1] - p.g, db = c[2] - p.b;
  return dr * dr + dg * dg + db * db;
}
inline std::array<double, 3> to_vec(Rgb p) { return {double(p.r), double(p.g), double(p.b)}; }
}  // namespace detail

/// k-means over pixel colors. Seeding is deterministic: the first centroid is the
/// color closest to the water reference, each further one is the color farthest
/// from the centroids chosen so far.
inline ClusterResult cluster_map(const Image& image, std::size_t k, const ClusterSettings& settings = {}) {
  require(image.width > 0 && image.height > 0 && image.pixels.size() == image.width * image.height,
          ErrorCode::InvalidInput, "image must be non-empty");
  require(k >= 2, ErrorCode::InvalidInput, "k must be at least 2");

  // Work on the distinct colors with multiplicities; maps are mostly a handful of hues.
  std::vector<Rgb> colors;
  std::vector<std::size_t> pixel_color(image.pixels.size());
  {
    std::unordered_map<std::uint32_t, std::size_t> lookup;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
      const Rgb p = image.pixels[i];
      const auto key = (std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b;
      auto [it, inserted] = lookup.try_emplace(key, colors.size());
      if (inserted) colors.push_back(p);
      pixel_color[i] = it->second;
    }
  }
  std::vector<double> weight(colors.size(), 0.0);
  for (auto c : pixel_color) weight[c] += 1.0;

  ClusterResult result;
  result.degenerate = k > colors.size();

  const auto water = detail::to_vec(settings.water_reference);
  std::size_t first = 0;
  for (std::size_t c = 1; c < colors.size(); ++c)
    if (detail::color_distance2(water, colors[c]) < detail::color_distance2(water, colors[first])) first = c;
  std::vector<std::array<double, 3>> centroids{detail::to_vec(colors[first])};
  std::vector<double> nearest(colors.size());
  for (std::size_t c = 0; c < colors.size(); ++c) nearest[c] = detail::color_distance2(centroids[0], colors[c]);
  while (centroids.size() < k) {
    const auto far = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
    centroids.push_back(detail::to_vec(colors[far]));  // duplicates collapse when colors run out
    for (std::size_t c = 0; c < colors.size(); ++c)
      nearest[c] = std::min(nearest[c], detail::color_distance2(centroids.back(), colors[c]));
  }

  std::vector<std::size_t> assign(colors.size(), k);
  for (result.iterations = 0; result.iterations < settings.max_iterations;) {
    ++result.iterations;
    bool changed = false;
    for (std::size_t c = 0; c < colors.size(); ++c) {
      std::size_t best = 0;
      double best_d = detail::color_distance2(centroids[0], colors[c]);
      for (std::size_t j = 1; j < k; ++j) {
        const double d = detail::color_distance2(centroids[j], colors[c]);
        if (d < best_d) { best_d = d; best = j; }
      }
      if (assign[c] != best) { assign[c] = best; changed = true; }
    }
    if (!changed) break;
    std::vector<std::array<double, 3>> sum(k, {0, 0, 0});
    std::vector<double> count(k, 0.0);
    for (std::size_t c = 0; c < colors.size(); ++c) {
      const auto v = detail::to_vec(colors[c]);
      for (int a = 0; a < 3; ++a) sum[assign[c]][a] += weight[c] * v[a];
      count[assign[c]] += weight[c];
    }
    for (std::size_t j = 0; j < k; ++j)
      if (count[j] > 0)
        for (int a = 0; a < 3; ++a) centroids[j][a] = sum[j][a] / count[j];
  }

  result.cluster_sizes.assign(k, 0);
  for (auto c : pixel_color) ++result.cluster_sizes[assign[c]];
  result.empty_clusters = static_cast<std::size_t>(std::count(result.cluster_sizes.begin(), result.cluster_sizes.end(), 0u));
  result.centroids = centroids;

  // Label clusters: nearest to water -> 1, nearest to coast (among the rest) -> 0, others uncertain.
  const auto coast = detail::to_vec(settings.coast_reference);
  auto ref_distance = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  };
  std::size_t water_cluster = k, coast_cluster = k;
  for (std::size_t j = 0; j < k; ++j) {
    if (result.cluster_sizes[j] == 0) continue;
    if (water_cluster == k || ref_distance(centroids[j], water) < ref_distance(centroids[water_cluster], water))
      water_cluster = j;
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (result.cluster_sizes[j] == 0 || j == water_cluster) continue;
    if (coast_cluster == k || ref_distance(centroids[j], coast) < ref_distance(centroids[coast_cluster], coast))
      coast_cluster = j;
  }
  std::vector<double> label(k, settings.uncertain_value);
  if (water_cluster < k) label[water_cluster] = 1.0;
  if (coast_cluster < k) label[coast_cluster] = 0.0;

  GridMap& map = result.map;
  map.width_cells = image.width;
  map.height_cells = image.height;
  map.cell_size = settings.cell_size;
  map.water_threshold = settings.water_threshold;
  map.cells.resize(image.pixels.size());
  for (std::size_t i = 0; i < image.pixels.size(); ++i) map.cells[i] = label[assign[pixel_color[i]]];
  map.validate();
  return result;
}

// ---- raster input ------------------------------------------------------------

/// Binary (P6) or ASCII (P3) PPM with maxval <= 255.
inline Image read_ppm(const std::string& bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    require(pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])), ErrorCode::InvalidInput,
            "malformed PPM header");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) v = v * 10 + (bytes[pos++] - '0');
    return v;
  };
  require(bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '3'), ErrorCode::InvalidInput,
          "not a PPM image");
  const bool binary = bytes[1] == '6';
  pos = 2;
  Image img;
  img.width = static_cast<std::size_t>(read_int());
  img.height = static_cast<std::size_t>(read_int());
  const long maxval = read_int();
  require(maxval > 0 && maxval <= 255, ErrorCode::InvalidInput, "unsupported PPM maxval");
  require(img.width > 0 && img.height > 0, ErrorCode::InvalidInput, "empty PPM image");
  img.pixels.resize(img.width * img.height);
  auto scale = [&](long v) { return static_cast<std::uint8_t>(v * 255 / maxval); };
  if (binary) {
    ++pos;  // single whitespace after maxval
    require(bytes.size() >= pos + img.pixels.size() * 3, ErrorCode::InvalidInput, "truncated PPM data");
    for (auto& p : img.pixels) {
      p.r = scale(static_cast<unsigned char>(bytes[pos++]));
      p.g = scale(static_cast<unsigned char>(bytes[pos++]));
      p.b = scale(static_cast<unsigned char>(bytes[pos++]));
    }
  } else {
    for (auto& p : img.pixels) {
      p.r = scale(read_int());
      p.g = scale(read_int());
      p.b = scale(read_int());
    }
  }
  return img;
}

inline std::string write_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  for (auto p : img.pixels) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

// ---- synthetic maps ----------------------------------------------------------

struct IslandSettings {
  std::size_t width = 350;
  std::size_t height = 350;
  std::size_t islands = 6;
  double min_radius_fraction = 0.04;  // island scale relative to the map width
  double max_radius_fraction = 0.10;
  int color_noise = 12;               // per-channel jitter, in 0..255 units
};

/// Colored island chart: brown land, a grey shoal fringe, noisy blue water.
/// Used by the presets so that maps go through the same clustering path as real charts.
inline Image synthetic_chart(const IslandSettings& s, Rng& rng) {
  struct Blob { double x, y, r; };
  std::vector<Blob> blobs;
  for (std::size_t i = 0; i < s.islands; ++i) {
    const double r = rng.uniform(s.min_radius_fraction, s.max_radius_fraction) * static_cast<double>(s.width);
    blobs.push_back({rng.uniform(0.0, double(s.width)), rng.uniform(0.0, double(s.height)), r});
  }
  Image img;
  img.width = s.width;
  img.height = s.height;
  img.pixels.resize(s.width * s.height);
  for (std::size_t y = 0; y < s.height; ++y) {
    for (std::size_t x = 0; x < s.width; ++x) {
      double h = 0.0;
      for (const auto& b : blobs) {
        const double dx = double(x) + 0.5 - b.x, dy = double(y) + 0.5 - b.y;
        h = std::max(h, std::exp(-(dx * dx + dy * dy) / (2.0 * b.r * b.r)));
      }
      Rgb base = h > 0.6 ? Rgb{139, 69, 19} : h > 0.45 ? Rgb{150, 150, 140} : Rgb{0, 0, 255};
      auto jitter = [&](std::uint8_t c) {
        const int v = int(c) + int(rng.index(2 * std::size_t(s.color_noise) + 1)) - s.color_noise;
        return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      };
      img.at(x, y) = {jitter(base.r), jitter(base.g), jitter(base.b)};
    }
  }
  return img;
}

/// Inverse of the clustering labels, for rendering a grid as a chart.
inline Image chart_from_grid(const GridMap& map) {
  Image img;
  img.width = map.width_cells;
  img.height = map.height_cells;
  img.pixels.resize(map.cells.size());
  for (std::size_t i = 0; i < map.cells.size(); ++i) {
    switch (map.classify(map.cells[i])) {
      case CellClass::Water: img.pixels[i] = {0, 0, 255}; break;
      case CellClass::Coast: img.pixels[i] = {139, 69, 19}; break;
      case CellClass::Uncertain: img.pixels[i] = {150, 150, 140}; break;
      case CellClass::Free: img.pixels[i] = {80, 120, 230}; break;
    }
  }
  return img;
}

}  // namespace armsp
