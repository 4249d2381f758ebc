#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "armsp/harness/config.hpp"

namespace armsp {

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"ch3-sweep", "ch3-montecarlo", "scenario1", "scenario2", "scenario3",
                                              "scenario4", "ch5-mission",    "ch5-montecarlo"};
  return names;
}

namespace detail {

// Route planning studies: waypoint networks over a 10 km chart.
inline ScenarioConfig route_study() {
  ScenarioConfig c;
  c.kind = ScenarioKind::Tar;
  c.map = MapConfig{"synthetic", "", 1000, 1000, 10.0, 8, 3, 7};
  c.graph.nodes_min = 30;
  c.graph.nodes_max = 50;
  c.graph.tasks = 15;
  c.total_time = 3.42e4;
  c.algorithms.tar = {Algorithm::ACO, Algorithm::GA, Algorithm::BBO, Algorithm::PSO};
  c.algorithms.tar_population = 70;
  c.algorithms.tar_iterations = 100;
  return c;
}

// Single-leg path planning on a 3.5 km box with 50 vortices and four updates.
inline ScenarioConfig leg_study() {
  ScenarioConfig c;
  c.kind = ScenarioKind::Orpp;
  c.map = MapConfig{"open", "", 350, 350, 10.0, 0, 3, 7};
  c.current = CurrentConfig{50, 3500.0, 2.8, 12.0, 0.1, 0.8, 4.0};
  c.leg.start = {250, 250, 50};
  c.leg.target = {3250, 3250, 50};
  c.leg.updates = 4;
  c.runs = 20;
  c.algorithms.orpp = {Algorithm::FA, Algorithm::DE, Algorithm::BBO, Algorithm::PSO};
  c.algorithms.orpp_population = 100;
  c.algorithms.orpp_iterations = 100;
  return c;
}

// Full missions on the 10 km chart; paths are planned with a lighter budget
// because every leg is replanned at each environment update.
inline ScenarioConfig mission_study() {
  ScenarioConfig c = route_study();
  c.kind = ScenarioKind::Mission;
  c.current = CurrentConfig{50, 10000.0, 2.8, 12.0, 0.1, 0.8, 4.0};
  c.algorithms.orpp_population = 40;
  c.algorithms.orpp_iterations = 60;
  return c;
}

}  // namespace detail

/// Study presets. Returns nothing for an unknown name.
inline std::optional<ScenarioConfig> find_preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "ch3-sweep") {
    c = detail::route_study();
    c.graph.sweep = {30, 50, 70, 90, 110, 130, 150};
    c.runs = 5;
  } else if (name == "ch3-montecarlo") {
    c = detail::route_study();
    c.runs = 150;
  } else if (name == "scenario1") {
    c = detail::leg_study();
  } else if (name == "scenario2") {
    c = detail::leg_study();
    c.leg.obstacles = {5, 0, 0};
  } else if (name == "scenario3") {
    c = detail::leg_study();
    c.leg.obstacles = {5, 3, 0};
  } else if (name == "scenario4") {
    c = detail::leg_study();
    c.map = MapConfig{"synthetic", "", 350, 350, 10.0, 6, 3, 11};
    c.leg.obstacles = {5, 3, 0};
  } else if (name == "ch5-mission") {
    c = detail::mission_study();
    c.total_time = 7200.0;
    c.runs = 50;
    c.algorithms.tar = {Algorithm::DE};
    c.algorithms.orpp = {Algorithm::FA};
  } else if (name == "ch5-montecarlo") {
    c = detail::mission_study();
    c.total_time = 10800.0;
    c.runs = 20;
    c.algorithms.tar = {Algorithm::DE, Algorithm::ACO};
    c.algorithms.orpp = {Algorithm::FA, Algorithm::BBO};
  } else {
    return std::nullopt;
  }
  c.preset = std::string(name);
  c.validate();
  return c;
}

}  // namespace armsp
