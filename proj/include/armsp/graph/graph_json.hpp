#pragma once

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "armsp/core/error.hpp"
#include "armsp/graph/mission_graph.hpp"

namespace armsp {

/// Edge task references in the document use task ids, not pool positions.
inline nlohmann::json graph_to_json(const MissionGraph& g) {
  using nlohmann::json;
  json doc;
  doc["waypoints"] = json::array();
  for (const auto& w : g.waypoints())
    doc["waypoints"].push_back({{"id", w.id}, {"x", w.position.x}, {"y", w.position.y}, {"z", w.position.z}});
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) {
    json je{{"a", e.a}, {"b", e.b}};
    if (e.task) je["task_id"] = g.tasks()[static_cast<std::size_t>(*e.task)].id;
    doc["edges"].push_back(je);
  }
  doc["tasks"] = json::array();
  for (const auto& t : g.tasks())
    doc["tasks"].push_back({{"id", t.id}, {"rho", t.priority}, {"xi", t.risk}, {"delta", t.completion_time}});
  doc["start"] = g.start();
  doc["dest"] = g.dest();
  doc["cruise_speed"] = g.cruise_speed();
  return doc;
}

inline MissionGraph graph_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Waypoint> wps;
    for (const auto& w : doc.at("waypoints"))
      wps.push_back({w.at("id").get<int>(), {w.at("x").get<double>(), w.at("y").get<double>(), w.at("z").get<double>()}});
    std::sort(wps.begin(), wps.end(), [](const Waypoint& a, const Waypoint& b) { return a.id < b.id; });
    std::vector<Task> tasks;
    if (doc.contains("tasks"))
      for (const auto& t : doc.at("tasks"))
        tasks.push_back({t.at("id").get<int>(), t.at("rho").get<double>(), t.at("xi").get<double>(),
                         t.at("delta").get<double>()});
    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges")) {
      Edge e;
      e.a = je.at("a").get<int>();
      e.b = je.at("b").get<int>();
      if (je.contains("task_id")) {
        const int id = je.at("task_id").get<int>();
        auto it = std::find_if(tasks.begin(), tasks.end(), [id](const Task& t) { return t.id == id; });
        require(it != tasks.end(), ErrorCode::InvalidInput, "edge references unknown task " + std::to_string(id));
        e.task = static_cast<int>(it - tasks.begin());
      }
      edges.push_back(e);
    }
    return MissionGraph(std::move(wps), std::move(edges), std::move(tasks), doc.at("start").get<int>(),
                        doc.at("dest").get<int>(), doc.at("cruise_speed").get<double>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed graph document: ") + e.what());
  }
}

}  // namespace armsp
