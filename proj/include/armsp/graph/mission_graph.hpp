#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/core/rng.hpp"
#include "armsp/core/vec3.hpp"

namespace armsp {

struct Task {
  int id = 0;
  double priority = 1.0;         // in [1, 10]
  double risk = 50.0;            // percentage in (0, 100]
  double completion_time = 0.0;  // s

  double weight() const { return priority / risk; }
};

inline void validate_task(const Task& t) {
  require(t.risk > 0.0, ErrorCode::InvalidInput, "task risk must be positive");
  require(t.priority >= 1.0, ErrorCode::InvalidInput, "task priority must be >= 1");
  require(t.completion_time >= 0.0, ErrorCode::InvalidInput, "task completion time must be >= 0");
}

struct TaskRanges {
  double priority_lo = 1.0, priority_hi = 10.0;
  double risk_lo = 0.0, risk_hi = 100.0;
  double time_lo = 20.0, time_hi = 200.0;
};

/// Random task pool. Draws are conditioned on priority/risk > 1 so that every task
/// edge outweighs a plain edge.
inline std::vector<Task> random_tasks(std::size_t count, Rng& rng, const TaskRanges& r = {}) {
  std::vector<Task> tasks;
  tasks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Task t;
    t.id = static_cast<int>(i);
    do {
      t.priority = rng.uniform(r.priority_lo, r.priority_hi);
      t.risk = rng.uniform(r.risk_lo, r.risk_hi);
    } while (!(t.risk > 0.0 && t.priority / t.risk > 1.0));
    t.completion_time = rng.uniform(r.time_lo, r.time_hi);
    tasks.push_back(t);
  }
  return tasks;
}

struct Waypoint {
  int id = 0;
  Vec3 position;
};

struct Edge {
  int a = 0;
  int b = 0;
  std::optional<int> task;  // index into MissionGraph::tasks
  double weight = 1.0;
  double distance = 0.0;
  double time = 0.0;

  int other(int node) const { return node == a ? b : a; }
};

struct Arc {
  int node;
  int edge;
};

/// Undirected waypoint network. Waypoint ids equal their index.
class MissionGraph {
 public:
  MissionGraph() = default;

  MissionGraph(std::vector<Waypoint> waypoints, std::vector<Edge> edges, std::vector<Task> tasks, int start, int dest,
               double cruise_speed)
      : waypoints_(std::move(waypoints)),
        edges_(std::move(edges)),
        tasks_(std::move(tasks)),
        start_(start),
        dest_(dest),
        speed_(cruise_speed) {
    rebuild();
  }

  std::size_t node_count() const { return waypoints_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Task>& tasks() const { return tasks_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  const Vec3& position(int node) const { return waypoints_[static_cast<std::size_t>(node)].position; }
  int start() const { return start_; }
  int dest() const { return dest_; }
  double cruise_speed() const { return speed_; }

  /// Neighbors sorted by node id.
  const std::vector<Arc>& neighbors(int node) const { return adjacency_[static_cast<std::size_t>(node)]; }

  /// Edge id joining a and b, or -1.
  int find_edge(int a, int b) const {
    if (a < 0 || b < 0 || a >= int(node_count()) || b >= int(node_count())) return -1;
    for (const auto& arc : neighbors(a))
      if (arc.node == b) return arc.edge;
    return -1;
  }

  const Task* edge_task(int e) const {
    const auto& t = edge(e).task;
    return t ? &tasks_[static_cast<std::size_t>(*t)] : nullptr;
  }

  void set_endpoints(int start, int dest) {
    require(start >= 0 && dest >= 0 && start < int(node_count()) && dest < int(node_count()), ErrorCode::InvalidInput,
            "endpoint out of range");
    start_ = start;
    dest_ = dest;
  }

  void set_tasks(std::vector<Task> tasks, const std::vector<std::optional<int>>& per_edge) {
    require(per_edge.size() == edges_.size(), ErrorCode::InvalidInput, "task assignment size mismatch");
    tasks_ = std::move(tasks);
    for (std::size_t e = 0; e < edges_.size(); ++e) edges_[e].task = per_edge[e];
    rebuild();
  }

  /// Copy with the given edges removed. Edge ids are renumbered; `kept` maps new ids to old ones.
  MissionGraph without_edges(const std::vector<bool>& removed, std::vector<int>* kept = nullptr) const {
    std::vector<Edge> edges;
    if (kept) kept->clear();
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (removed[e]) continue;
      edges.push_back(edges_[e]);
      if (kept) kept->push_back(static_cast<int>(e));
    }
    return MissionGraph(waypoints_, std::move(edges), tasks_, start_, dest_, speed_);
  }

 private:
  void rebuild() {
    require(speed_ > 0.0, ErrorCode::InvalidInput, "cruise speed must be positive");
    const int n = static_cast<int>(waypoints_.size());
    for (int i = 0; i < n; ++i)
      require(waypoints_[static_cast<std::size_t>(i)].id == i, ErrorCode::InvalidInput, "waypoint ids must be 0..n-1");
    require(n == 0 || (start_ >= 0 && start_ < n && dest_ >= 0 && dest_ < n), ErrorCode::InvalidInput,
            "endpoint out of range");
    for (const auto& t : tasks_) validate_task(t);
    adjacency_.assign(waypoints_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto& ed = edges_[e];
      require(ed.a >= 0 && ed.b >= 0 && ed.a < n && ed.b < n, ErrorCode::InvalidInput, "edge endpoint out of range");
      require(ed.a != ed.b, ErrorCode::InvalidInput, "self-loop");
      require(!ed.task || (*ed.task >= 0 && *ed.task < int(tasks_.size())), ErrorCode::InvalidInput,
              "edge task out of range");
      ed.distance = armsp::distance(position(ed.a), position(ed.b));
      const Task* t = ed.task ? &tasks_[static_cast<std::size_t>(*ed.task)] : nullptr;
      ed.weight = t ? t->weight() : 1.0;
      ed.time = ed.distance / speed_ + (t ? t->completion_time : 0.0);
      adjacency_[static_cast<std::size_t>(ed.a)].push_back({ed.b, static_cast<int>(e)});
      adjacency_[static_cast<std::size_t>(ed.b)].push_back({ed.a, static_cast<int>(e)});
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end(), [](Arc x, Arc y) { return x.node < y.node; });
      for (std::size_t i = 1; i < adj.size(); ++i)
        require(adj[i].node != adj[i - 1].node, ErrorCode::InvalidInput, "duplicate edge");
    }
  }

  std::vector<Waypoint> waypoints_;
  std::vector<Edge> edges_;
  std::vector<Task> tasks_;
  int start_ = 0;
  int dest_ = 0;
  double speed_ = 2.5;
  std::vector<std::vector<Arc>> adjacency_;
};

/// Breadth-first hop counts to `target` (-1 when unreachable).
inline std::vector<int> hops_to(const MissionGraph& g, int target) {
  std::vector<int> hops(g.node_count(), -1);
  if (g.node_count() == 0) return hops;
  std::vector<int> queue{target};
  hops[static_cast<std::size_t>(target)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (const auto& arc : g.neighbors(u)) {
      if (hops[static_cast<std::size_t>(arc.node)] < 0) {
        hops[static_cast<std::size_t>(arc.node)] = hops[static_cast<std::size_t>(u)] + 1;
        queue.push_back(arc.node);
      }
    }
  }
  return hops;
}

}  // namespace armsp
