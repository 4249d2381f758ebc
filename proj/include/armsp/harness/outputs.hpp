#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "armsp/core/stats.hpp"
#include "armsp/graph/graph_json.hpp"
#include "armsp/harness/battery.hpp"
#include "armsp/harness/svg.hpp"

namespace armsp {

/// metrics.csv columns, in file order. Wall-clock values are kept out so the
/// file is reproducible byte for byte.
inline const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols{
      "run",         "seed",          "nodes",          "edges",         "tar_algo",    "orpp_algo",
      "status",      "C_TAR",         "Viol_TAR",       "T_R",           "T_Residual",  "completed_tasks",
      "obtained_weight", "path_cost_mean", "path_cost_max", "collision_violation", "kinematic_violation",
      "replans",     "paths",         "Cost_Total",     "success"};
  return cols;
}

/// Shortest text that parses back to the same double; NaN becomes an empty cell.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  require(r.ec == std::errc() && r.ptr == s.data() + s.size(), ErrorCode::InvalidInput, "bad number '" + s + "'");
  return v;
}

inline std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  const auto& cols = metrics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << r.run << ',' << r.seed << ',' << r.nodes << ',' << r.edges << ',' << r.tar_algo << ',' << r.orpp_algo << ','
        << r.status << ',' << format_double(r.c_tar) << ',' << format_double(r.viol_tar) << ',' << format_double(r.t_r)
        << ',' << format_double(r.t_residual) << ',' << r.completed_tasks << ',' << format_double(r.obtained_weight)
        << ',' << format_double(r.path_cost_mean) << ',' << format_double(r.path_cost_max) << ','
        << format_double(r.collision) << ',' << format_double(r.kinematic) << ',' << r.replans << ',' << r.paths << ','
        << format_double(r.cost_total) << ',' << (r.success ? 1 : 0) << '\n';
  }
  return out.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',') out.emplace_back();
    else if (ch != '\r') out.back() += ch;
  }
  return out;
}

/// Parses a file written by metrics_to_csv. Timing and trace fields stay empty.
inline std::vector<MetricsRow> metrics_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::InvalidInput, "metrics file is empty");
  const auto header = split_csv_line(line);
  require(header == metrics_columns(), ErrorCode::InvalidInput, "unexpected metrics header");
  std::vector<MetricsRow> rows;
  auto to_size = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == header.size(), ErrorCode::InvalidInput, "metrics row has the wrong field count");
    MetricsRow r;
    r.run = to_size(f[0]);
    r.seed = std::stoull(f[1]);
    r.nodes = to_size(f[2]);
    r.edges = to_size(f[3]);
    r.tar_algo = f[4];
    r.orpp_algo = f[5];
    r.status = f[6];
    r.c_tar = parse_double(f[7]);
    r.viol_tar = parse_double(f[8]);
    r.t_r = parse_double(f[9]);
    r.t_residual = parse_double(f[10]);
    r.completed_tasks = to_size(f[11]);
    r.obtained_weight = parse_double(f[12]);
    r.path_cost_mean = parse_double(f[13]);
    r.path_cost_max = parse_double(f[14]);
    r.collision = parse_double(f[15]);
    r.kinematic = parse_double(f[16]);
    r.replans = to_size(f[17]);
    r.paths = to_size(f[18]);
    r.cost_total = parse_double(f[19]);
    r.success = f[20] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::string timings_to_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "run,nodes,tar_algo,orpp_algo,tar_cpu_s,path_cpu_s,wall_s\n";
  for (const auto& r : rows)
    out << r.run << ',' << r.nodes << ',' << r.tar_algo << ',' << r.orpp_algo << ',' << format_double(r.tar_cpu) << ','
        << format_double(r.path_cpu) << ',' << format_double(r.wall) << '\n';
  return out.str();
}

/// Rows grouped by algorithm pairing and node count, in first-seen order.
inline std::vector<std::pair<std::string, std::vector<const MetricsRow*>>> group_rows(const std::vector<MetricsRow>& rows,
                                                                                       bool by_nodes) {
  std::vector<std::pair<std::string, std::vector<const MetricsRow*>>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    std::string key = r.tar_algo.empty() ? r.orpp_algo : (r.orpp_algo.empty() ? r.tar_algo : r.tar_algo + "/" + r.orpp_algo);
    if (by_nodes) key += "@" + std::to_string(r.nodes);
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) groups.push_back({key, {}});
    groups[it->second].second.push_back(&r);
  }
  return groups;
}

namespace detail {

inline nlohmann::json summary_stats(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  if (v.empty()) return {{"count", 0}};
  const auto s = summarize(v);
  return {{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"q1", s.q1},
          {"q3", s.q3},       {"iqr", s.iqr()}, {"min", s.min},       {"max", s.max}};
}

inline nlohmann::json metric_block(const std::vector<const MetricsRow*>& rows) {
  using nlohmann::json;
  auto pick = [&](auto field) {
    std::vector<double> v;
    for (const auto* r : rows) v.push_back(static_cast<double>(field(*r)));
    return summary_stats(v);
  };
  std::size_t ok = 0;
  for (const auto* r : rows) ok += r->success;
  return {{"count", rows.size()},
          {"success_rate", rows.empty() ? json(nullptr) : json(static_cast<double>(ok) / static_cast<double>(rows.size()))},
          {"metrics",
           {{"C_TAR", pick([](const MetricsRow& r) { return r.c_tar; })},
            {"Viol_TAR", pick([](const MetricsRow& r) { return r.viol_tar; })},
            {"T_R", pick([](const MetricsRow& r) { return r.t_r; })},
            {"T_Residual", pick([](const MetricsRow& r) { return r.t_residual; })},
            {"completed_tasks", pick([](const MetricsRow& r) { return r.completed_tasks; })},
            {"obtained_weight", pick([](const MetricsRow& r) { return r.obtained_weight; })},
            {"path_cost_mean", pick([](const MetricsRow& r) { return r.path_cost_mean; })},
            {"collision_violation", pick([](const MetricsRow& r) { return r.collision; })},
            {"kinematic_violation", pick([](const MetricsRow& r) { return r.kinematic; })},
            {"replans", pick([](const MetricsRow& r) { return r.replans; })},
            {"Cost_Total", pick([](const MetricsRow& r) { return r.cost_total; })}}}};
}

}  // namespace detail

/// Aggregates per algorithm group (and per node count in a sweep) plus overall.
/// Medians and quartiles for the boxplot view, means alongside.
inline nlohmann::json summary_json(const ScenarioConfig& cfg, const std::vector<MetricsRow>& rows) {
  using nlohmann::json;
  json groups = json::array();
  for (const auto& [key, members] : group_rows(rows, !cfg.graph.sweep.empty() && cfg.kind == ScenarioKind::Tar)) {
    json g = detail::metric_block(members);
    g["group"] = key;
    g["tar_algo"] = members.front()->tar_algo;
    g["orpp_algo"] = members.front()->orpp_algo;
    if (members.front()->nodes) g["nodes"] = members.front()->nodes;
    groups.push_back(std::move(g));
  }
  std::vector<const MetricsRow*> all;
  for (const auto& r : rows) all.push_back(&r);
  return {{"schema", "armsp-metrics/1"},
          {"preset", cfg.preset},
          {"kind", std::string(to_string(cfg.kind))},
          {"seed", cfg.seed},
          {"runs", cfg.runs},
          {"T_total", cfg.total_time},
          {"rows", rows.size()},
          {"overall", detail::metric_block(all)},
          {"groups", groups}};
}

/// One panel per route revision: the revision's planned route dashed, the legs
/// flown under it solid, earlier legs faded.
inline std::string mission_storyboard_svg(const MissionLog& log, const MissionGraph& g, const GridMap* map) {
  const std::size_t panels = std::max<std::size_t>(1, log.routes.size());
  const double pw = 360, ph = 360, gap = 20;
  SvgCanvas c(gap + static_cast<double>(panels) * (pw + gap), ph + 90);
  double x1 = 0, y1 = 0;
  if (map) {
    x1 = map->extent_x();
    y1 = map->extent_y();
  } else {
    for (const auto& w : g.waypoints()) {
      x1 = std::max(x1, w.position.x);
      y1 = std::max(y1, w.position.y);
    }
  }
  for (std::size_t k = 0; k < panels; ++k) {
    const double left = gap + static_cast<double>(k) * (pw + gap);
    c.set_area(left, 50, left + pw, 50 + ph);
    c.set_range(0, x1, 0, y1);
    c.raw("<rect x=\"" + SvgCanvas::num(left) + "\" y=\"50\" width=\"" + SvgCanvas::num(pw) + "\" height=\"" +
          SvgCanvas::num(ph) + "\" fill=\"#eef5fb\" stroke=\"#333\"/>\n");
    if (map) draw_map(c, *map, 120);
    for (const auto& e : g.edges()) {
      const auto &a = g.position(e.a), &b = g.position(e.b);
      c.line(a.x, a.y, b.x, b.y, e.task ? "#9ecae1" : "#ccc", e.task ? 1.5 : 0.7);
    }
    const std::size_t from = log.routes.empty() ? 0 : log.routes[k].from_leg;
    const std::size_t until = k + 1 < log.routes.size() ? log.routes[k + 1].from_leg : log.legs.size();
    for (std::size_t i = 0; i < std::min(until, log.legs.size()); ++i) {
      const auto& t = log.legs[i].track;
      std::vector<double> xs, ys;
      for (const auto& p : t) { xs.push_back(p.x); ys.push_back(p.y); }
      c.polyline(xs, ys, i < from ? "#999" : "#d62728", i < from ? 1.2 : 2.0);
    }
    if (!log.routes.empty()) {
      const auto& nodes = log.routes[k].nodes;
      for (std::size_t i = 1; i < nodes.size(); ++i) {
        const auto &a = g.position(nodes[i - 1]), &b = g.position(nodes[i]);
        c.line(a.x, a.y, b.x, b.y, "#1f77b4", 1.5, "5,3");
      }
    }
    for (const auto& w : g.waypoints()) c.circle(w.position.x, w.position.y, 2.0, "#555");
    c.circle(g.position(g.start()).x, g.position(g.start()).y, 5, "#2ca02c");
    c.circle(g.position(g.dest()).x, g.position(g.dest()).y, 5, "#ff7f0e");
    std::string label = k == 0 ? "initial route" : "mission replan " + std::to_string(k);
    c.text(left + pw / 2, 40, label, 13, "middle");
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "status %s, T_R %.0f s, residual %.0f s, %zu replans, %zu tasks",
                std::string(to_string(log.status)).c_str(), log.route_time, log.residual, log.replans,
                log.completed_tasks);
  c.text(gap, ph + 80, buf, 12);
  return c.str();
}

/// One panel per path plan of an online leg: obstacles at their confidence
/// boundary, previous plans faded, the handover point marked.
inline std::string leg_storyboard_svg(const OnlineRun& run, const std::string& title) {
  const std::size_t panels = run.plans.size();
  const double pw = 320, ph = 320, gap = 20;
  SvgCanvas c(gap + static_cast<double>(panels) * (pw + gap), ph + 80);
  const auto& first = run.plans.front();
  double x0 = std::min(first.start.x, first.target.x), x1 = std::max(first.start.x, first.target.x);
  double y0 = std::min(first.start.y, first.target.y), y1 = std::max(first.start.y, first.target.y);
  for (const auto& p : run.plans)
    for (const auto& q : p.curve) {
      x0 = std::min(x0, q.x); x1 = std::max(x1, q.x);
      y0 = std::min(y0, q.y); y1 = std::max(y1, q.y);
    }
  const double pad = 0.05 * std::max(x1 - x0, y1 - y0);
  const double side = std::max(x1 - x0, y1 - y0) + 2 * pad;
  for (std::size_t k = 0; k < panels; ++k) {
    const double left = gap + static_cast<double>(k) * (pw + gap);
    c.set_area(left, 40, left + pw, 40 + ph);
    c.set_range(x0 - pad, x0 - pad + side, y0 - pad, y0 - pad + side);
    c.raw("<rect x=\"" + SvgCanvas::num(left) + "\" y=\"40\" width=\"" + SvgCanvas::num(pw) + "\" height=\"" +
          SvgCanvas::num(ph) + "\" fill=\"#eef5fb\" stroke=\"#333\"/>\n");
    const auto& env = run.snapshots[k];
    if (env.map) draw_map(c, *env.map, 120);
    const double scale = pw / side;
    for (const auto& o : env.obstacles) {
      c.circle(o.position.x, o.position.y, o.boundary_radius() * scale, "#b5e3b5", "#2ca02c");
      c.circle(o.position.x, o.position.y, std::max(0.0, o.radius) * scale, "#555");
    }
    for (std::size_t i = 0; i <= k; ++i) {
      std::vector<double> xs, ys;
      for (const auto& q : run.plans[i].curve) { xs.push_back(q.x); ys.push_back(q.y); }
      c.polyline(xs, ys, i == k ? "#d62728" : "#bbb", i == k ? 2.0 : 1.0);
    }
    if (k > 0) c.circle(run.handover[k - 1].x, run.handover[k - 1].y, 4, "#ffd700", "#333");
    c.circle(first.start.x, first.start.y, 4, "#2ca02c");
    c.circle(first.target.x, first.target.y, 4, "#ff7f0e");
    c.text(left + pw / 2, 30, k == 0 ? "initial plan" : "update " + std::to_string(k), 13, "middle");
  }
  c.text(gap, ph + 70, title, 12);
  return c.str();
}

/// Files written by emit_outputs, relative to the output directory.
struct OutputSet {
  std::vector<std::string> files;
};

/// Writes metrics.csv, timings.csv, summary.json, convergence CSVs and the SVG
/// figures into `outdir` (created if missing).
inline OutputSet emit_outputs(const BatteryResult& result, const std::string& outdir) {
  namespace fs = std::filesystem;
  OutputSet set;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  require(!ec && fs::is_directory(outdir), ErrorCode::IoError, "cannot create output directory " + outdir);
  auto put = [&](const std::string& name, const std::string& content) {
    write_file((fs::path(outdir) / name).string(), content);
    set.files.push_back(name);
  };
  const auto& cfg = result.config;
  const auto& rows = result.rows;
  put("metrics.csv", metrics_to_csv(rows));
  put("timings.csv", timings_to_csv(rows));
  put("summary.json", summary_json(cfg, rows).dump(2) + "\n");
  put("config.json", config_to_json(cfg).dump(2) + "\n");

  const bool sweep = !cfg.graph.sweep.empty() && cfg.kind == ScenarioKind::Tar;
  const auto groups = group_rows(rows, sweep);

  // Convergence: the first run's trace per group, and a figure of the group means.
  std::vector<Series> curves;
  for (const auto& [key, members] : groups) {
    std::size_t len = 0;
    for (const auto* r : members) len = std::max(len, r->convergence.size());
    if (len == 0) continue;
    std::string safe = key;
    for (auto& ch : safe)
      if (ch == '/' || ch == '@') ch = '_';
    const auto& tr = members.front()->convergence;
    std::ostringstream csv;
    csv << "iteration,best_cost\n";
    for (std::size_t i = 0; i < tr.size(); ++i) csv << i + 1 << ',' << format_double(tr[i]) << '\n';
    put("convergence_" + safe + ".csv", csv.str());
    Series s{key, std::vector<double>(len, 0.0)};
    std::vector<std::size_t> n(len, 0);
    for (const auto* r : members)
      for (std::size_t i = 0; i < r->convergence.size(); ++i)
        if (std::isfinite(r->convergence[i])) { s.y[i] += r->convergence[i]; ++n[i]; }
    for (std::size_t i = 0; i < len; ++i) s.y[i] = n[i] ? s.y[i] / static_cast<double>(n[i]) : NAN;
    curves.push_back(std::move(s));
  }
  if (!curves.empty()) put("convergence.svg", convergence_svg(curves, "mean best cost, " + cfg.preset));

  // Boxplots.
  std::vector<BoxGroup> boxes;
  std::size_t color = 0;
  if (cfg.kind == ScenarioKind::Mission) {
    for (const auto& [key, members] : groups) {
      BoxGroup eps{key + " T_eps", {}, "#9ecae1"}, phi{key + " T_phi", {}, "#fdae6b"};
      for (const auto* r : members) {
        eps.values.insert(eps.values.end(), r->expected_times.begin(), r->expected_times.end());
        phi.values.insert(phi.values.end(), r->realized_times.begin(), r->realized_times.end());
      }
      boxes.push_back(std::move(eps));
      boxes.push_back(std::move(phi));
    }
    if (!boxes.empty()) put("leg_times_boxplot.svg", boxplot_svg(boxes, "expected vs realized leg time", "s"));
    boxes.clear();
    for (const auto& [key, members] : groups) {
      BoxGroup b{key, {}, svg_palette()[color++ % svg_palette().size()]};
      for (const auto* r : members) b.values.push_back(r->t_residual);
      boxes.push_back(std::move(b));
    }
    if (!boxes.empty()) put("residual_boxplot.svg", boxplot_svg(boxes, "residual time", "s", 0.0));
  } else {
    for (const auto& [key, members] : groups) {
      BoxGroup b{key, {}, svg_palette()[color++ % svg_palette().size()]};
      for (const auto* r : members) b.values.push_back(r->cost_total);
      boxes.push_back(std::move(b));
    }
    if (!boxes.empty()) put("cost_boxplot.svg", boxplot_svg(boxes, "final cost per run", "cost"));
  }

  // Storyboards and raw artifacts of the first run of each group.
  for (const auto& a : result.samples) {
    std::string tag = a.tar_algo.empty() ? a.orpp_algo : (a.orpp_algo.empty() ? a.tar_algo : a.tar_algo + "-" + a.orpp_algo);
    if (a.graph && sweep) tag += "_" + std::to_string(a.graph->node_count());
    if (a.mission && a.graph) {
      auto doc = mission_log_to_json(*a.mission, *a.graph);
      doc["graph"] = graph_to_json(*a.graph);
      put("mission_" + tag + ".json", doc.dump(1) + "\n");
      put("storyboard_" + tag + ".svg", mission_storyboard_svg(*a.mission, *a.graph, result.map.get()));
    }
    if (a.route) {
      auto doc = tar_solution_to_json(*a.route);
      if (a.graph) doc["graph"] = graph_to_json(*a.graph);
      put("route_" + tag + ".json", doc.dump(1) + "\n");
      put("trace_" + tag + ".csv", trace_to_csv(a.route->trace));
    }
    if (a.leg) {
      put("path_" + tag + ".csv", path_to_csv(a.leg->final_plan().states));
      put("storyboard_" + tag + ".svg", leg_storyboard_svg(*a.leg, cfg.preset + " " + tag));
    }
  }
  return set;
}

}  // namespace armsp
