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

#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "artifacts.hpp"
#include "stlcomm/encoder/encoder.hpp"
#include "stlcomm/error.hpp"
#include "stlcomm/milp/model.hpp"
#include "stlcomm/stl/monitor.hpp"
#include "stlcomm/stl/parser.hpp"

namespace stlcomm::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SolverFlags {
  std::string mode = "internal";
  std::string command;
  double gap = 1e-6;
  double time_limit = 600.0;
  std::int64_t node_limit = 10'000'000;
  bool verbose = false;
};

void add_solver_flags(CLI::App& cmd, SolverFlags& f) {
  cmd.add_option("--solver", f.mode, "internal or external")
      ->check(CLI::IsMember({"internal", "external"}))
      ->capture_default_str();
  cmd.add_option("--solver-cmd", f.command, "external solver command with {mps} and {sol} placeholders");
  cmd.add_option("--gap", f.gap, "relative optimality gap")->capture_default_str();
  cmd.add_option("--time-limit", f.time_limit, "seconds")->capture_default_str();
  cmd.add_option("--node-limit", f.node_limit, "branch-and-bound nodes")->capture_default_str();
  cmd.add_flag("--verbose", f.verbose, "print solver progress");
}

solver::SolveOptions solve_options(const SolverFlags& f, std::ostream& out) {
  solver::SolveOptions o;
  o.relative_gap = f.gap;
  o.time_limit = f.time_limit;
  o.node_limit = f.node_limit;
  if (f.verbose) o.log = &out;
  if (f.mode == "external") {
    o.mode = solver::SolveMode::kExternal;
    o.external_command = f.command;
#ifdef STLCOMM_CBC_EXECUTABLE
    if (o.external_command.empty()) o.external_command = solver::cbc_command(STLCOMM_CBC_EXECUTABLE);
#endif
    if (o.external_command.empty()) throw ValidationError("solver-cmd", "required with --solver external");
  }
  o.validate();
  return o;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_summary(std::ostream& out, const std::string& label, const planner::PlanResult& p) {
  out << label << ": status " << solver::to_string(p.solver.status) << ", J1 " << format_number(p.costs.j1)
      << ", J2 " << format_number(p.costs.j2) << ", total " << format_number(p.costs.total) << ", "
      << p.solver.nodes << " nodes\n";
  std::size_t warnings = 0;
  for (const auto& c : p.verification.turning) warnings += c.violated ? 1 : 0;
  if (warnings > 0) out << label << ": turning-rate limit exceeded at " << warnings << " steps\n";
}

int cmd_plan(const std::string& scenario_path, const fs::path& dir, const SolverFlags& flags, std::ostream& out) {
  const auto s = planner::load_scenario_file(scenario_path);
  const auto options = solve_options(flags, out);
  const auto start = std::chrono::steady_clock::now();
  const auto result = planner::plan(s, options);
  write_plan_artifacts(dir, s, result);
  print_summary(out, "plan", result);
  out << "plan: solved in " << seconds_since(start) << " s, artifacts in " << dir.string() << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& scenario_path, const fs::path& dir, const SolverFlags& flags,
                std::ostream& out) {
  const auto s = planner::load_scenario_file(scenario_path);
  const auto options = solve_options(flags, out);
  const auto c = planner::compare_baseline(s, options);
  ensure_directory(dir);
  write_plan_artifacts(dir / "joint", s, c.joint);
  planner::Scenario baseline = s;
  baseline.baseline = true;
  baseline.alpha = 1.0;
  write_plan_artifacts(dir / "motion_only", baseline, c.motion_only);
  const json report{
      {"J2_joint", c.j2_joint},
      {"J2_motion_only", c.j2_motion_only},
      {"relative_change", c.relative_change},
      {"joint", {{"J1", c.joint.costs.j1}, {"J2", c.joint.costs.j2}, {"total", c.joint.costs.total}}},
      {"motion_only", {{"J1", c.motion_only.costs.j1}, {"J2", c.j2_motion_only}}},
  };
  write_text(dir / "comparison.json", report.dump(2) + "\n");
  print_summary(out, "joint", c.joint);
  print_summary(out, "motion-only", c.motion_only);
  out << "compare: J2 joint " << format_number(c.j2_joint) << ", J2 motion-only " << format_number(c.j2_motion_only)
      << ", relative change " << format_number(c.relative_change) << "\n";
  return kExitOk;
}

int cmd_monitor(const std::string& formula_path, const std::vector<std::string>& trajectories, double dt,
                std::ostream& out) {
  std::vector<std::vector<std::array<double, 4>>> agents;
  for (const auto& path : trajectories) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    agents.push_back(read_trajectory_csv(in, path));
  }
  const auto signal = stack_trajectories(agents, dt);
  const auto formula = stl::parse_formula(read_text(formula_path), signal.dimension());
  const bool satisfied = stl::eval_monitor(formula, signal);
  out << (satisfied ? "satisfied" : "violated") << "\n";
  return satisfied ? kExitOk : kExitViolated;
}

int cmd_export(const std::string& scenario_path, const fs::path& file, std::ostream& out) {
  const auto s = planner::load_scenario_file(scenario_path);
  const auto assembly = encoder::assemble(s, planner::gain_matrix(s));
  if (file.has_parent_path()) ensure_directory(file.parent_path());
  std::ostringstream mps;
  milp::write_mps(assembly.model, mps);
  write_text(file, mps.str());
  const auto& st = assembly.stats;
  out << "export: " << st.variables << " variables (" << st.binaries << " binary, " << st.integers
      << " integer), " << st.constraints << " constraints written to " << file.string() << "\n";
  return kExitOk;
}

int cmd_gain(const std::string& scenario_path, const fs::path& dir, std::ostream& out) {
  const auto s = planner::load_scenario_file(scenario_path);
  const auto gain = planner::gain_matrix(s);
  ensure_directory(dir);
  std::ostringstream csv;
  write_gain_csv(csv, gain);
  write_text(dir / "gain.csv", csv.str());
  write_text(dir / "gain.svg", gain_svg(gain));
  out << "gain: " << gain.size() << " x " << gain.size() << " matrix written to " << dir.string() << "\n";
  return kExitOk;
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& message,
           const std::string& path = {}) {
  json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  if (!path.empty()) j["path"] = path;
  err << j.dump() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Communication-aware multi-agent motion planning from STL specifications", "stlcomm"};
  app.require_subcommand(1);
  std::int64_t seed = 0;
  app.add_option("--seed", seed, "reserved for randomized tie-breaks; the pipeline is deterministic");

  std::string scenario, formula_path, out_path;
  std::vector<std::string> trajectories;
  double dt = 1.0;
  SolverFlags flags;

  auto* plan = app.add_subcommand("plan", "solve a scenario and write trajectories, costs, checks and a plot");
  plan->add_option("scenario", scenario, "scenario JSON")->required();
  plan->add_option("-o,--out", out_path, "output directory")->required();
  add_solver_flags(*plan, flags);

  auto* compare = app.add_subcommand("compare", "solve the joint and the motion-only problem and compare J2");
  compare->add_option("scenario", scenario, "scenario JSON")->required();
  compare->add_option("-o,--out", out_path, "output directory")->required();
  add_solver_flags(*compare, flags);

  auto* monitor = app.add_subcommand("monitor", "evaluate a formula on trajectory CSVs; exit 0 iff satisfied");
  monitor->add_option("formula", formula_path, "formula file")->required();
  monitor->add_option("trajectories", trajectories, "one CSV per agent, stacked in order")->required();
  monitor->add_option("--dt", dt, "sample period in seconds")->capture_default_str();

  auto* exporter = app.add_subcommand("export", "write the planning MILP as MPS without solving");
  exporter->add_option("scenario", scenario, "scenario JSON")->required();
  exporter->add_option("-o,--out", out_path, "MPS file")->required();

  auto* gain = app.add_subcommand("gain", "write the partition gain matrix as CSV and SVG heatmap");
  gain->add_option("scenario", scenario, "scenario JSON")->required();
  gain->add_option("-o,--out", out_path, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, kExitValidation, "usage", e.what());
  }

  try {
    if (*plan) return cmd_plan(scenario, out_path, flags, out);
    if (*compare) return cmd_compare(scenario, out_path, flags, out);
    if (*monitor) return cmd_monitor(formula_path, trajectories, dt, out);
    if (*exporter) return cmd_export(scenario, out_path, out);
    return cmd_gain(scenario, out_path, out);
  } catch (const ValidationError& e) {
    return report(err, kExitValidation, "validation", e.what(), e.path());
  } catch (const InfeasibleError& e) {
    return report(err, kExitInfeasible, "infeasible", e.what());
  } catch (const SolverLimitError& e) {
    return report(err, kExitSolverLimit, "solver_limit", e.what());
  } catch (const IoError& e) {
    return report(err, kExitIo, "io", e.what());
  } catch (const ExternalSolverError& e) {
    return report(err, kExitIo, "external_solver", e.what());
  } catch (const NumericalError& e) {
    return report(err, kExitNumerical, "numerical", e.what());
  }
}

}  // namespace stlcomm::cli
