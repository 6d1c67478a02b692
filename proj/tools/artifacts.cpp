// Copyright 2026 The stlcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "stlcomm/error.hpp"
#include "stlcomm/stl/formula.hpp"

namespace stlcomm::cli {

namespace {

using nlohmann::json;

constexpr double kPixelsPerMeter = 60.0;
constexpr double kMargin = 40.0;
constexpr const char* kAgentColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Maps world coordinates onto the SVG canvas with y pointing up.
struct Canvas {
  double x0, y0, x1, y1;

  double width() const { return (x1 - x0) * kPixelsPerMeter + 2 * kMargin; }
  double height() const { return (y1 - y0) * kPixelsPerMeter + 2 * kMargin; }
  double px(double x) const { return kMargin + (x - x0) * kPixelsPerMeter; }
  double py(double y) const { return kMargin + (y1 - y) * kPixelsPerMeter; }

  std::string points(const std::vector<Vec2>& pts) const {
    std::string out;
    for (const auto& p : pts) {
      if (!out.empty()) out += ' ';
      out += fixed(px(p[0])) + "," + fixed(py(p[1]));
    }
    return out;
  }
};

std::string polygon(const Canvas& c, const Polytope& poly, const std::string& style) {
  const auto pts = clip_to_box(poly, c.x0, c.x1, c.y0, c.y1);
  if (pts.empty()) return {};
  return "  <polygon points=\"" + c.points(pts) + "\" " + style + "/>\n";
}

double parse_number(std::string_view text, const std::string& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ValidationError(where, "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

// Linear blend through a dark-blue to yellow ramp.
std::string ramp(double t) {
  static constexpr double stops[][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(static_cast<int>(t), 3);
  const double f = t - k;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const planner::AgentPlan& agent, double dt) {
  out << "t,px,py,vx,vy,ux,uy\n";
  for (std::size_t t = 0; t < agent.states.size(); ++t) {
    const auto& x = agent.states[t];
    out << format_number(static_cast<double>(t) * dt);
    for (double v : x) out << ',' << format_number(v);
    if (t < agent.inputs.size()) {
      out << ',' << format_number(agent.inputs[t][0]) << ',' << format_number(agent.inputs[t][1]);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

std::vector<std::array<double, 4>> read_trajectory_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(source, "empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,px,py,vx,vy,ux,uy") throw ValidationError(source, "expected header t,px,py,vx,vy,ux,uy");
  std::vector<std::array<double, 4>> rows;
  for (std::size_t row = 2; std::getline(in, line); ++row) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    const std::string where = source + ":" + std::to_string(row);
    if (cells.size() != 7) throw ValidationError(where, "expected 7 columns");
    std::array<double, 4> x{};
    for (std::size_t k = 0; k < 4; ++k) x[k] = parse_number(cells[k + 1], where);
    rows.push_back(x);
  }
  if (rows.empty()) throw ValidationError(source, "no samples");
  return rows;
}

stl::Signal stack_trajectories(const std::vector<std::vector<std::array<double, 4>>>& agents, double dt) {
  if (agents.empty()) throw ValidationError("trajectories", "at least one trajectory is required");
  const std::size_t steps = agents.front().size();
  for (const auto& a : agents) {
    if (a.size() != steps) throw ValidationError("trajectories", "trajectories differ in length");
  }
  std::vector<double> data;
  data.reserve(steps * agents.size() * 4);
  for (std::size_t t = 0; t < steps; ++t) {
    for (const auto& a : agents) data.insert(data.end(), a[t].begin(), a[t].end());
  }
  return stl::Signal(agents.size() * 4, std::move(data), dt);
}

json costs_json(const planner::PlanResult& plan) {
  return json{
      {"alpha", plan.alpha},
      {"J1", plan.costs.j1},
      {"J2", plan.costs.j2},
      {"total", plan.costs.total},
      {"solver_objective", plan.costs.solver_objective},
      {"solver",
       {{"mode", plan.solver.mode},
        {"status", solver::to_string(plan.solver.status)},
        {"objective", plan.solver.objective},
        {"bound", plan.solver.bound},
        {"nodes", plan.solver.nodes},
        {"lp_iterations", plan.solver.lp_iterations}}},
      {"model",
       {{"variables", plan.model.variables},
        {"binaries", plan.model.binaries},
        {"integers", plan.model.integers},
        {"constraints", plan.model.constraints}}},
  };
}

json verification_json(const planner::PlanResult& plan) {
  const auto& v = plan.verification;
  json stl = json::array();
  for (std::size_t i = 0; i < v.stl_satisfied.size(); ++i) {
    stl.push_back({{"agent", i + 1}, {"satisfied", static_cast<bool>(v.stl_satisfied[i])}});
  }
  json turning = json::array();
  for (const auto& c : v.turning) {
    json entry{{"agent", c.agent}, {"step", c.step}, {"limit", c.limit}, {"skipped", c.skipped}};
    if (!c.skipped) {
      entry["omega"] = c.omega;
      entry["violated"] = c.violated;
    }
    turning.push_back(std::move(entry));
  }
  json separations = json::array();
  for (const auto& s : v.separations) {
    separations.push_back({{"agents", {s.first, s.second}}, {"min_dx", s.min_dx}, {"min_dy", s.min_dy}});
  }
  return json{
      {"stl", std::move(stl)},
      {"dynamics_residual", v.dynamics_residual},
      {"cost_audit_error", v.cost_audit_error},
      {"cells_consistent", v.cells_consistent},
      {"separations", std::move(separations)},
      {"turning_rate", std::move(turning)},
      {"notes", v.notes},
  };
}

std::string plan_svg(const planner::Scenario& s, const planner::PlanResult& plan) {
  const Canvas c{s.grid.x_min, s.grid.y_min, s.grid.x_max(), s.grid.y_max()};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(c.width()) << "\" height=\""
      << fixed(c.height() + 24) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(c.width()) << "\" height=\"" << fixed(c.height() + 24)
      << "\" fill=\"white\"/>\n";
  for (int k = 0; k <= s.grid.N; ++k) {
    const double x = s.grid.x_min + k * s.grid.d;
    const double y = s.grid.y_min + k * s.grid.d;
    out << "  <line x1=\"" << fixed(c.px(x)) << "\" y1=\"" << fixed(c.py(c.y0)) << "\" x2=\"" << fixed(c.px(x))
        << "\" y2=\"" << fixed(c.py(c.y1)) << "\" stroke=\"#cccccc\"/>\n";
    out << "  <line x1=\"" << fixed(c.px(c.x0)) << "\" y1=\"" << fixed(c.py(y)) << "\" x2=\"" << fixed(c.px(c.x1))
        << "\" y2=\"" << fixed(c.py(y)) << "\" stroke=\"#cccccc\"/>\n";
  }
  for (const auto& o : s.buffered_obstacles()) {
    out << polygon(c, o, "fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"4 3\"");
  }
  for (const auto& o : s.obstacles) out << polygon(c, o, "fill=\"#888888\" stroke=\"#444444\"");
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const std::string color = kAgentColors[i % std::size(kAgentColors)];
    out << polygon(c, s.agents[i].goal,
                   "fill=\"" + color + "\" fill-opacity=\"0.15\" stroke=\"" + color + "\" stroke-dasharray=\"2 2\"");
  }
  for (std::size_t i = 0; i < plan.agents.size(); ++i) {
    const std::string color = kAgentColors[i % std::size(kAgentColors)];
    std::vector<Vec2> pts;
    for (const auto& x : plan.agents[i].states) pts.push_back({x[0], x[1]});
    out << "  <polyline points=\"" << c.points(pts) << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    for (const auto& p : pts) {
      out << "  <circle cx=\"" << fixed(c.px(p[0])) << "\" cy=\"" << fixed(c.py(p[1])) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    }
    out << "  <text x=\"" << fixed(c.px(pts.front()[0]) + 6) << "\" y=\"" << fixed(c.py(pts.front()[1]) - 6)
        << "\" fill=\"" << color << "\">agent " << i + 1 << "</text>\n";
  }
  out << "  <rect x=\"" << fixed(c.px(c.x0)) << "\" y=\"" << fixed(c.py(c.y1)) << "\" width=\""
      << fixed(c.px(c.x1) - c.px(c.x0)) << "\" height=\"" << fixed(c.py(c.y0) - c.py(c.y1))
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << fixed(kMargin) << "\" y=\"" << fixed(c.height() + 8) << "\">"
      << escape_xml("J1 " + fixed(plan.costs.j1) + "   J2 " + fixed(plan.costs.j2) + "   total " +
                    fixed(plan.costs.total) + "   alpha " + format_number(plan.alpha))
      << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string gain_svg(const channel::GainMatrix& gain) {
  constexpr double kCell = 12.0;
  constexpr double kOffset = 50.0;
  const int n = gain.size();
  const double lo = gain.G.minCoeff();
  const double hi = gain.G.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  const double side = std::max(kOffset + n * kCell + 20.0, 360.0);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(side) << "\" height=\"" << fixed(side + 30)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(side) << "\" height=\"" << fixed(side + 30)
      << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << fixed(kOffset) << "\" y=\"20\">G(i, j): partition i by row, partition j by column</text>\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << "  <rect x=\"" << fixed(kOffset + j * kCell) << "\" y=\"" << fixed(kOffset + i * kCell)
          << "\" width=\"" << fixed(kCell) << "\" height=\"" << fixed(kCell) << "\" fill=\""
          << ramp((gain.G(i, j) - lo) / span) << "\"/>\n";
    }
  }
  for (int k = 0; k < n; k += std::max(1, n / 10)) {
    out << "  <text x=\"" << fixed(kOffset + k * kCell) << "\" y=\"" << fixed(kOffset - 4) << "\">" << k + 1
        << "</text>\n";
    out << "  <text x=\"4\" y=\"" << fixed(kOffset + (k + 1) * kCell - 2) << "\">" << k + 1 << "</text>\n";
  }
  out << "  <text x=\"" << fixed(kOffset) << "\" y=\"" << fixed(kOffset + n * kCell + 20) << "\">"
      << escape_xml("G from " + fixed4(lo) + " to " + fixed4(hi) + " (1/dB)") << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

void write_gain_csv(std::ostream& out, const channel::GainMatrix& gain) {
  const int n = gain.size();
  out << "partition";
  for (int j = 1; j <= n; ++j) out << ',' << j;
  out << '\n';
  for (int i = 1; i <= n; ++i) {
    out << i;
    for (int j = 1; j <= n; ++j) out << ',' << format_number(gain.at(i, j));
    out << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_plan_artifacts(const std::filesystem::path& dir, const planner::Scenario& s,
                          const planner::PlanResult& plan) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  for (std::size_t i = 0; i < plan.agents.size(); ++i) {
    const std::string stem = "agent" + std::to_string(i + 1);
    std::ostringstream csv;
    write_trajectory_csv(csv, plan.agents[i], s.dt);
    write_text(dir / (stem + ".csv"), csv.str());
    write_text(dir / (stem + ".stl"), stl::to_string(s.agent_formula(i)) + "\n");
  }
  write_text(dir / "costs.json", costs_json(plan).dump(2) + "\n");
  write_text(dir / "verify.json", verification_json(plan).dump(2) + "\n");
  write_text(dir / "plan.svg", plan_svg(s, plan));
}

}  // namespace stlcomm::cli
