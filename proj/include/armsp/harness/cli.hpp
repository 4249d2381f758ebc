#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "armsp/graph/graph_json.hpp"
#include "armsp/harness/battery.hpp"
#include "armsp/harness/outputs.hpp"
#include "armsp/harness/presets.hpp"

namespace armsp {

// sysexits-style codes
inline constexpr int kExitUsage = 64;
inline constexpr int kExitConfig = 65;
inline constexpr int kExitIo = 74;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Applies --algo tokens: "tar=de", "orpp=fa,bbo", or a bare list for the
/// planner the scenario kind exercises.
inline void apply_algorithms(ScenarioConfig& c, const std::vector<std::string>& tokens) {
  std::vector<Algorithm> tar, orpp;
  bool set_tar = false, set_orpp = false;
  for (const auto& tok : tokens) {
    std::string role, names = tok;
    if (auto eq = tok.find('='); eq != std::string::npos) {
      role = tok.substr(0, eq);
      names = tok.substr(eq + 1);
    } else {
      role = c.kind == ScenarioKind::Orpp ? "orpp" : "tar";
    }
    if (role != "tar" && role != "orpp") throw UsageError("--algo role must be tar or orpp: " + tok);
    auto& list = role == "tar" ? tar : orpp;
    (role == "tar" ? set_tar : set_orpp) = true;
    std::stringstream ss(names);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto a = parse_algorithm(name);
      if (!a) throw UsageError("unknown algorithm '" + name + "'");
      if (role == "orpp" && *a == Algorithm::ACO) throw UsageError("aco is not offered for path planning");
      list.push_back(*a);
    }
  }
  if (set_tar) c.algorithms.tar = tar;
  if (set_orpp) c.algorithms.orpp = orpp;
}

inline std::string default_preset(const std::string& sub) {
  if (sub == "tar") return "ch3-montecarlo";
  if (sub == "orpp") return "scenario3";
  if (sub == "mission") return "ch5-mission";
  return "";
}

inline int render_file(const std::string& input, const std::string& outdir, std::ostream& out) {
  namespace fs = std::filesystem;
  const std::string text = read_file(input);
  const std::string stem = fs::path(input).stem().string();
  std::error_code ec;
  fs::create_directories(outdir, ec);
  const auto target = [&](const std::string& suffix) { return (fs::path(outdir) / (stem + suffix)).string(); };
  if (fs::path(input).extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::ConfigError, input + ": " + e.what());
    }
    require(doc.value("schema", "") == "armsp-mission/1" && doc.contains("graph"), ErrorCode::ConfigError,
            input + " is not a mission document with its graph");
    const MissionGraph g = graph_from_json(doc["graph"]);
    MissionLog log;
    log.total_time = doc.at("T_total").get<double>();
    log.route_time = doc.at("T_R").get<double>();
    log.residual = doc.at("T_residual").get<double>();
    log.replans = doc.at("rep").get<std::size_t>();
    log.completed_tasks = doc.at("completed_tasks").get<std::size_t>();
    const auto status = doc.at("status").get<std::string>();
    log.status = status == "success" ? MissionStatus::Success
                 : status == "no_route" ? MissionStatus::NoRoute
                                        : MissionStatus::TimeExhausted;
    for (const auto& r : doc.at("routes")) {
      RoutePlan p;
      p.nodes = r.at("nodes").get<std::vector<int>>();
      p.from_leg = r.at("from_leg").get<std::size_t>();
      log.routes.push_back(std::move(p));
    }
    for (const auto& l : doc.at("legs")) {
      LegRecord rec;
      for (const auto& q : l.at("track")) rec.track.push_back({q[0].get<double>(), q[1].get<double>(), q[2].get<double>()});
      log.legs.push_back(std::move(rec));
    }
    write_file(target(".svg"), mission_storyboard_svg(log, g, nullptr));
    out << "wrote " << target(".svg") << '\n';
    return 0;
  }
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  if (header.rfind("iteration,best_cost", 0) == 0) {
    Series s{stem, {}};
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) s.y.push_back(parse_double(split_csv_line(line).at(1)));
    write_file(target(".svg"), convergence_svg({s}, stem));
    out << "wrote " << target(".svg") << '\n';
    return 0;
  }
  if (split_csv_line(header) == metrics_columns()) {
    const auto rows = metrics_from_csv(text);
    std::vector<BoxGroup> boxes;
    std::size_t k = 0;
    for (const auto& [key, members] : group_rows(rows, false)) {
      BoxGroup b{key, {}, svg_palette()[k++ % svg_palette().size()]};
      for (const auto* r : members) b.values.push_back(r->cost_total);
      boxes.push_back(std::move(b));
    }
    write_file(target("_boxplot.svg"), boxplot_svg(boxes, "Cost_Total per group", "cost"));
    out << "wrote " << target("_boxplot.svg") << '\n';
    return 0;
  }
  fail(ErrorCode::ConfigError, input + ": unrecognised input (expected a mission JSON, trace CSV or metrics.csv)");
}

}  // namespace detail

/// Command-line entry point; returns the process exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Mission planning simulator: route planning, online path planning and full missions."};
  app.name("armsp");
  std::string config_path, preset, outdir = "armsp_out";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs, workers;
  std::vector<std::string> algos;
  std::vector<std::string> inputs;
  app.add_option("--config", config_path, "JSON config file overlaid on the preset");
  app.add_option("--preset", preset, "one of: ch3-sweep ch3-montecarlo scenario1..4 ch5-mission ch5-montecarlo");
  app.add_option("--seed", seed, "master seed (beats the config file and ARMSP_SEED)");
  app.add_option("--algo", algos, "planner selection, e.g. tar=de orpp=fa or tar=aco,ga")->expected(1, -1);
  app.add_option("--out", outdir, "output directory");
  app.add_option("--runs", runs, "number of runs");
  app.add_option("--workers", workers, "worker threads across runs");
  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("tar", "route planning on generated waypoint networks"));
  subs.push_back(app.add_subcommand("orpp", "online path planning of a single leg"));
  subs.push_back(app.add_subcommand("mission", "full missions with route and path replanning"));
  subs.push_back(app.add_subcommand("battery", "Monte Carlo battery of a preset or config"));
  auto* render = app.add_subcommand("render", "redraw figures from mission JSON, trace CSV or metrics.csv");
  render->add_option("--input", inputs, "files to render")->required()->expected(1, -1);
  subs.push_back(render);
  for (auto* s : subs) s->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    if (sub == "render") {
      for (const auto& in : inputs) detail::render_file(in, outdir, out);
      return 0;
    }
    std::string name = preset.empty() ? detail::default_preset(sub) : preset;
    if (name.empty() && config_path.empty())
      throw detail::UsageError("battery needs --preset or --config");
    ScenarioConfig cfg;
    if (!name.empty()) {
      auto p = find_preset(name);
      if (!p) throw detail::UsageError("unknown preset '" + name + "'");
      cfg = *p;
    }
    bool config_seed = false;
    if (!config_path.empty()) {
      std::string text;
      try {
        text = read_file(config_path);
      } catch (const Error& e) {
        fail(ErrorCode::ConfigError, e.what());
      }
      cfg = config_from_text(text, cfg);
      config_seed = nlohmann::json::parse(text, nullptr, false, true).contains("seed");
    }
    if (seed) {
      cfg.seed = *seed;
    } else if (!config_seed) {
      if (const char* env = std::getenv("ARMSP_SEED"); env && *env) {
        try {
          std::size_t used = 0;
          cfg.seed = std::stoull(env, &used);
          if (env[used] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
          throw detail::UsageError(std::string("ARMSP_SEED is not an unsigned integer: ") + env);
        }
      }
    }
    if (sub != "battery") {
      const std::string want = sub;
      if (want != to_string(cfg.kind))
        throw detail::UsageError("preset/config '" + cfg.preset + "' is a " + std::string(to_string(cfg.kind)) +
                                 " scenario; use that subcommand or battery");
      cfg.runs = 1;
    }
    if (runs) cfg.runs = *runs;
    if (workers) cfg.workers = *workers;
    detail::apply_algorithms(cfg, algos);
    try {
      cfg.validate();
    } catch (const Error& e) {
      fail(ErrorCode::ConfigError, e.what());
    }

    const auto result = run_battery(cfg);
    const auto files = emit_outputs(result, outdir);
    std::size_t ok = 0;
    for (const auto& r : result.rows) ok += r.success;
    out << cfg.preset << " (" << to_string(cfg.kind) << "): " << result.rows.size() << " rows, " << ok
        << " successful; " << files.files.size() << " files in " << outdir << '\n';
    if (sub == "battery" || result.rows.empty()) return 0;
    const auto& row = result.rows.front();
    if (row.status == "no_route") return 3;
    if (sub == "mission") return row.success ? 0 : 2;
    return 0;
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::IoError) return kExitIo;
    return kExitConfig;
  }
}

}  // namespace armsp
