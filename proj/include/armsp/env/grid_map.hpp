#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "armsp/core/error.hpp"

namespace armsp {

enum class CellClass { Water, Coast, Uncertain, Free };

/// Occupancy grid: 1 is open water, 0 is coast, (0, water_threshold] is uncertain.
/// Cells are stored row-major with row 0 at y = 0.
struct GridMap {
  std::size_t width_cells = 0;
  std::size_t height_cells = 0;
  double cell_size = 10.0;
  double water_threshold = 0.35;
  std::vector<double> cells;

  static GridMap filled(std::size_t width, std::size_t height, double value, double cell_size = 10.0) {
    require(width > 0 && height > 0, ErrorCode::InvalidInput, "grid must be non-empty");
    require(value >= 0.0 && value <= 1.0, ErrorCode::InvalidInput, "cell value outside [0,1]");
    GridMap m;
    m.width_cells = width;
    m.height_cells = height;
    m.cell_size = cell_size;
    m.cells.assign(width * height, value);
    return m;
  }

  double extent_x() const { return static_cast<double>(width_cells) * cell_size; }
  double extent_y() const { return static_cast<double>(height_cells) * cell_size; }

  double& at(std::size_t cx, std::size_t cy) { return cells[cy * width_cells + cx]; }
  double at(std::size_t cx, std::size_t cy) const { return cells[cy * width_cells + cx]; }

  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x < extent_x() && y < extent_y();
  }

  /// Cell value under (x, y), or nothing when outside the extent.
  std::optional<double> value_at(double x, double y) const {
    if (!contains(x, y)) return std::nullopt;
    auto cx = std::min(width_cells - 1, static_cast<std::size_t>(x / cell_size));
    auto cy = std::min(height_cells - 1, static_cast<std::size_t>(y / cell_size));
    return at(cx, cy);
  }

  CellClass classify(double value) const {
    if (value == 1.0) return CellClass::Water;
    if (value == 0.0) return CellClass::Coast;
    if (value <= water_threshold) return CellClass::Uncertain;
    return CellClass::Free;
  }

  void validate() const {
    require(width_cells > 0 && height_cells > 0, ErrorCode::InvalidInput, "grid must be non-empty");
    require(cells.size() == width_cells * height_cells, ErrorCode::InvalidInput, "cell count mismatch");
    require(cell_size > 0.0, ErrorCode::InvalidInput, "cell_size must be positive");
    require(water_threshold > 0.0 && water_threshold <= 1.0, ErrorCode::InvalidInput,
            "water_threshold must lie in (0,1]");
    for (double v : cells)
      require(v >= 0.0 && v <= 1.0, ErrorCode::InvalidInput, "cell value outside [0,1]");
  }

  std::size_t water_cell_count() const {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), 1.0));
  }
};

// ---- export ---------------------------------------------------------------

/// One row per line, values separated by single spaces, shortest round-trip form.
inline std::string grid_to_text(const GridMap& map) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t cy = 0; cy < map.height_cells; ++cy) {
    for (std::size_t cx = 0; cx < map.width_cells; ++cx) {
      if (cx) out << ' ';
      out << map.at(cx, cy);
    }
    out << '\n';
  }
  return out.str();
}

inline GridMap grid_from_text(const std::string& text, double cell_size = 10.0) {
  GridMap map;
  map.cell_size = cell_size;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t count = 0;
    double v;
    while (row >> v) {
      map.cells.push_back(v);
      ++count;
    }
    if (map.height_cells == 0) map.width_cells = count;
    require(count == map.width_cells, ErrorCode::InvalidInput, "ragged grid text");
    ++map.height_cells;
  }
  map.validate();
  return map;
}

inline constexpr char kGridMagic[] = "ARMSPGRID";
inline constexpr std::size_t kGridMagicSize = 9;
inline constexpr std::size_t kGridHeaderSize = kGridMagicSize + 8;

namespace detail {
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}
inline std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
}  // namespace detail

/// Packed header (magic, u32 LE width, u32 LE height) followed by
/// width*height IEEE-754 doubles in little-endian byte order.
inline std::string grid_to_binary(const GridMap& map) {
  std::string out(kGridMagic, kGridMagicSize);
  detail::put_u32(out, static_cast<std::uint32_t>(map.width_cells));
  detail::put_u32(out, static_cast<std::uint32_t>(map.height_cells));
  out.reserve(out.size() + map.cells.size() * 8);
  for (double v : map.cells) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
  }
  return out;
}

inline GridMap grid_from_binary(const std::string& bytes, double cell_size = 10.0) {
  require(bytes.size() >= kGridHeaderSize && bytes.compare(0, kGridMagicSize, kGridMagic) == 0,
          ErrorCode::InvalidInput, "not a grid file");
  auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  GridMap map;
  map.cell_size = cell_size;
  map.width_cells = detail::get_u32(p + kGridMagicSize);
  map.height_cells = detail::get_u32(p + kGridMagicSize + 4);
  const std::size_t n = map.width_cells * map.height_cells;
  require(bytes.size() == kGridHeaderSize + 8 * n, ErrorCode::InvalidInput, "grid payload size mismatch");
  map.cells.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(p[kGridHeaderSize + 8 * i + b]) << (8 * b);
    std::memcpy(&map.cells[i], &bits, 8);
  }
  map.validate();
  return map;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::IoError, "cannot open " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(f), ErrorCode::IoError, "write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::IoError, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace armsp
