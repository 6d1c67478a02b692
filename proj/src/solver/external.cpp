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

#include <sys/wait.h>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "stlcomm/error.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::solver {

namespace {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t at = text.find(key); at != std::string::npos; at = text.find(key, at + value.size())) {
    text.replace(at, key.size(), value);
  }
  return text;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool parse_number(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

std::optional<SolveStatus> status_word(std::string w) {
  for (auto& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (w == "optimal") return SolveStatus::kOptimal;
  if (w == "infeasible" || w == "integer") return SolveStatus::kInfeasible;
  if (w == "unbounded") return SolveStatus::kUnbounded;
  if (w == "stopped" || w == "feasible-gap" || w == "feasible") return SolveStatus::kFeasibleGap;
  if (w == "limit") return SolveStatus::kLimit;
  return std::nullopt;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "stlcomm-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw IoError("cannot create a temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

ExternalSolution parse_solution_text(const std::string& text) {
  ExternalSolution sol;
  std::istringstream in(text);
  bool first = true;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto toks = split(line);
    if (toks.empty()) continue;
    if (toks[0][0] == '#') {
      if (toks.size() >= 3 && toks[0] == "#" && toks[1] == "status") {
        auto st = status_word(toks[2]);
        if (!st) throw ExternalSolverError("unknown solution status '" + toks[2] + "'");
        sol.status = *st;
      }
      continue;
    }
    if (first) {
      first = false;
      // CBC opens with "<Status> - objective value <v>".
      if (line.find("objective value") != std::string::npos) {
        auto st = status_word(toks[0]);
        if (!st) throw ExternalSolverError("unknown solution status line '" + line + "'");
        sol.status = *st;
        continue;
      }
    }
    if (toks[0] == "**") toks.erase(toks.begin());
    double value = 0.0;
    if (toks.size() == 2 && parse_number(toks[1], value)) {
      sol.values.emplace_back(toks[0], value);
    } else if (toks.size() >= 3 && parse_number(toks[2], value) &&
               toks[0].find_first_not_of("0123456789") == std::string::npos) {
      sol.values.emplace_back(toks[1], value);
    } else {
      throw ExternalSolverError("unreadable solution line " + std::to_string(line_no) + ": '" + line + "'");
    }
  }
  return sol;
}

std::string cbc_command(const std::string& executable) {
  return shell_quote(executable) + " -import {mps} -increment 0 -heuristics off -solve -solution {sol}";
}

SolveResult solve_external(const milp::MilpModel& model, const SolveOptions& options) {
  options.validate();
  if (options.external_command.empty()) {
    throw ValidationError("solver/command", "external mode needs a command template");
  }
  const auto start = std::chrono::steady_clock::now();
  TempDir dir;
  const fs::path mps = dir.path() / "model.mps";
  const fs::path sol = dir.path() / "model.sol";
  {
    std::ofstream out(mps);
    if (!out) throw IoError("cannot write " + mps.string());
    milp::write_mps(model, out);
  }
  std::string cmd = substitute(options.external_command, "{mps}", shell_quote(mps.string()));
  cmd = substitute(cmd, "{sol}", shell_quote(sol.string()));
  cmd = "( " + cmd + " ) > " + shell_quote((dir.path() / "solver.log").string()) + " 2>&1";

  const int raw = std::system(cmd.c_str());
  if (raw == -1) throw ExternalSolverError("could not start external solver");
  const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : 128;
  if (code == 127) throw ExternalSolverError("external solver command not found: " + options.external_command);
  if (code != 0) {
    throw ExternalSolverError("external solver exited with status " + std::to_string(code));
  }
  std::ifstream in(sol);
  if (!in) throw ExternalSolverError("external solver wrote no solution file");
  std::stringstream buf;
  buf << in.rdbuf();
  const ExternalSolution parsed = parse_solution_text(buf.str());

  SolveResult res;
  res.status = parsed.status;
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (parsed.status == SolveStatus::kInfeasible || parsed.status == SolveStatus::kUnbounded ||
      (parsed.status == SolveStatus::kLimit && parsed.values.empty())) {
    return res;
  }

  std::vector<double> values(model.num_variables(), 0.0);
  for (const auto& [name, v] : parsed.values) {
    auto id = model.find_variable(name);
    if (!id) throw ExternalSolverError("solution names unknown variable '" + name + "'");
    values[static_cast<std::size_t>(id->value)] = v;
  }
  // Snap integers the way a strict reader would see them.
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (model.variables()[j].is_integer() &&
        std::abs(values[j] - std::round(values[j])) <= options.feasibility_tol) {
      values[j] = std::round(values[j]);
    }
  }
  milp::Assignment a{std::move(values)};
  const auto report = milp::check_solution(model, a, options.feasibility_tol);
  if (!report.feasible()) {
    const auto& v = report.violations.front();
    throw ExternalSolverError("external solution violates '" + v.name + "' by " +
                              milp::format_double(v.amount));
  }
  res.objective = report.objective;
  res.bound = report.objective;
  res.assignment = std::move(a);
  return res;
}

}  // namespace stlcomm::solver
