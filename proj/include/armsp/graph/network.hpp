#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/env/grid_map.hpp"
#include "armsp/graph/mission_graph.hpp"

namespace armsp {

struct NetworkSettings {
  std::size_t degree_target = 4;
  double cruise_speed = 2.5;
  double z_min = 0.0;
  double z_max = 100.0;
  double min_separation = 0.0;  // m; 0 means one cell
  double blocked_edge_factor = 0.01;  // sampling weight multiplier for edges that cross land
};

namespace detail {
/// True when the straight segment between a and b never touches a coast cell.
inline bool segment_over_water(const GridMap& map, Vec3 a, Vec3 b) {
  const double len = horizontal_distance(a, b);
  const auto steps = static_cast<std::size_t>(std::ceil(len / (0.5 * map.cell_size))) + 1;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(steps);
    const auto v = map.value_at(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y));
    if (!v || *v == 0.0) return false;
  }
  return true;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};
}  // namespace detail

/// Random waypoint network over the water cells of `map`. Node 0 is the start; the
/// destination is the waypoint farthest from it. Each node draws neighbours with
/// Gaussian distance weighting until it has half of the degree target, then
/// components are bridged by their closest node pairs.
inline MissionGraph generate_network(const GridMap& map, std::size_t n_nodes, const NetworkSettings& s, Rng& rng) {
  require(n_nodes >= 2, ErrorCode::InvalidInput, "need at least two waypoints");
  map.validate();
  if (map.water_cell_count() < n_nodes) fail(ErrorCode::GenerationFailed, "not enough water cells for waypoints");
  const double sep = s.min_separation > 0 ? s.min_separation : map.cell_size;

  std::vector<Waypoint> wps;
  const std::size_t max_attempts = 2000 * n_nodes;
  for (std::size_t attempt = 0; wps.size() < n_nodes; ++attempt) {
    if (attempt >= max_attempts) fail(ErrorCode::GenerationFailed, "could not place waypoints in water");
    Vec3 p{rng.uniform(0.0, map.extent_x()), rng.uniform(0.0, map.extent_y()), rng.uniform(s.z_min, s.z_max)};
    const auto v = map.value_at(p.x, p.y);
    if (!v || *v != 1.0) continue;
    bool crowded = false;
    for (const auto& w : wps) crowded |= horizontal_distance(w.position, p) < sep;
    if (crowded) continue;
    wps.push_back({static_cast<int>(wps.size()), p});
  }

  const std::size_t n = n_nodes;
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = distance(wps[i].position, wps[j].position);

  // Scale of the Gaussian weighting: mean distance to the degree_target-th neighbour.
  const std::size_t kth = std::min(n - 1, std::max<std::size_t>(1, s.degree_target));
  double sigma = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(dist[i][j]);
    std::nth_element(d.begin(), d.begin() + static_cast<long>(kth - 1), d.end());
    sigma += d[kth - 1];
  }
  sigma = std::max(sigma / static_cast<double>(n), 1e-9);

  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  std::vector<std::size_t> degree(n, 0);
  std::vector<Edge> edges;
  auto link = [&](std::size_t i, std::size_t j) {
    linked[i][j] = linked[j][i] = true;
    ++degree[i];
    ++degree[j];
    Edge e;
    e.a = static_cast<int>(std::min(i, j));
    e.b = static_cast<int>(std::max(i, j));
    edges.push_back(e);
  };

  const std::size_t half = (s.degree_target + 1) / 2;
  std::vector<double> w(n);
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] >= half) continue;
    for (std::size_t j = 0; j < n; ++j) {
      base[j] = 0.0;
      if (j == i) continue;
      base[j] = std::exp(-dist[i][j] * dist[i][j] / (2.0 * sigma * sigma)) + 1e-300;
      if (!detail::segment_over_water(map, wps[i].position, wps[j].position)) base[j] *= s.blocked_edge_factor;
    }
    while (degree[i] < half) {
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        w[j] = linked[i][j] ? 0.0 : base[j];
        total += w[j];
      }
      if (total <= 0.0) break;
      double r = rng.uniform() * total;
      std::size_t pick = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (w[j] <= 0.0) continue;
        pick = j;
        r -= w[j];
        if (r < 0.0) break;
      }
      link(i, pick);
    }
  }

  // Bridge components with their closest pairs until connected.
  for (;;) {
    detail::DisjointSets ds(n);
    for (const auto& e : edges) ds.unite(e.a, e.b);
    const int root0 = ds.find(0);
    double best = INFINITY;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ds.find(static_cast<int>(i)) != root0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (ds.find(static_cast<int>(j)) == root0) continue;
        if (dist[i][j] < best) { best = dist[i][j]; bi = i; bj = j; }
      }
    }
    if (!std::isfinite(best)) break;
    link(bi, bj);
  }

  int dest = 1;
  for (std::size_t j = 1; j < n; ++j)
    if (dist[0][j] > dist[0][static_cast<std::size_t>(dest)]) dest = static_cast<int>(j);
  return MissionGraph(std::move(wps), std::move(edges), {}, 0, dest, s.cruise_speed);
}

/// Puts tasks on a random subset of min(E, |tasks|) edges; each chosen edge gets a
/// task drawn uniformly from the pool, so a task may appear on more than one edge.
inline MissionGraph assign_tasks(const MissionGraph& g, const std::vector<Task>& tasks, Rng& rng) {
  require(!tasks.empty(), ErrorCode::InvalidInput, "task pool is empty");
  for (const auto& t : tasks) {
    validate_task(t);
    require(t.weight() > 1.0, ErrorCode::InvalidInput, "task priority/risk must exceed 1");
  }
  const std::size_t e_count = g.edge_count();
  std::vector<std::size_t> order(e_count);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = e_count; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  std::vector<std::optional<int>> per_edge(e_count);
  const std::size_t count = std::min(e_count, tasks.size());
  for (std::size_t k = 0; k < count; ++k) per_edge[order[k]] = static_cast<int>(rng.index(tasks.size()));
  MissionGraph out = g;
  out.set_tasks(tasks, per_edge);
  return out;
}

/// Small connected graph on a square of side `extent` metres: a random spanning
/// tree plus extra edges up to `edge_count`, with start 0 and destination n-1.
inline MissionGraph small_random_graph(std::size_t n_nodes, std::size_t edge_count, double extent, double speed, Rng& rng) {
  require(n_nodes >= 2, ErrorCode::InvalidInput, "need at least two waypoints");
  const std::size_t max_edges = n_nodes * (n_nodes - 1) / 2;
  require(edge_count >= n_nodes - 1 && edge_count <= max_edges, ErrorCode::InvalidInput, "edge count out of range");
  std::vector<Waypoint> wps(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i)
    wps[i] = {static_cast<int>(i), {rng.uniform(0, extent), rng.uniform(0, extent), rng.uniform(0, 100)}};
  std::vector<std::vector<char>> used(n_nodes, std::vector<char>(n_nodes, 0));
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    used[a][b] = used[b][a] = 1;
    edges.push_back({static_cast<int>(a), static_cast<int>(b), std::nullopt});
  };
  for (std::size_t i = 1; i < n_nodes; ++i) add(i, rng.index(i));
  while (edges.size() < edge_count) {
    const std::size_t a = rng.index(n_nodes), b = rng.index(n_nodes);
    if (a != b && !used[a][b]) add(a, b);
  }
  return MissionGraph(std::move(wps), std::move(edges), {}, 0, static_cast<int>(n_nodes - 1), speed);
}

}  // namespace armsp
