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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stlcomm/milp/model.hpp"
#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {

enum class SolveMode { kInternal, kExternal };
// Pseudo-cost branching scores candidates by the objective change observed
// on earlier branchings of the same column, falling back to the fraction.
enum class Branching { kPseudoCost, kMostFractional, kFirstFractional };
enum class NodeSelection { kBestBound, kDepthFirst };

struct SolveOptions {
  SolveMode mode = SolveMode::kInternal;
  double relative_gap = 1e-6;
  double feasibility_tol = milp::kDefaultFeasibilityTol;
  std::int64_t node_limit = 10'000'000;
  double time_limit = 600.0;  // seconds
  Branching branching = Branching::kPseudoCost;
  // Best-bound selection runs depth-first until the first incumbent, then
  // dives into a child while its bound stays close to the best open bound.
  NodeSelection node_selection = NodeSelection::kBestBound;
  // Shell command with {mps} and {sol} placeholders.
  std::string external_command;
  // Tighten integer bounds from row activities at every node.
  bool propagate = true;
  LpOptions lp;
  // Progress lines go here when set.
  std::ostream* log = nullptr;
  double log_interval = 10.0;  // seconds

  void validate() const;
};

enum class SolveStatus { kOptimal, kFeasibleGap, kInfeasible, kUnbounded, kLimit };

std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  std::optional<milp::Assignment> assignment;
  double objective = 0.0;  // model sense
  double bound = 0.0;      // model sense
  std::int64_t nodes = 0;
  double wall_time = 0.0;
  std::int64_t lp_iterations = 0;
  // Global bound after every processed node, minimization sense.
  std::vector<double> bound_history;
};

// LP-relaxation branch-and-bound. Deterministic for fixed options.
SolveResult solve_bb(const milp::MilpModel& model, const SolveOptions& options = {});

// Writes MPS to a temporary directory, runs the external command, reads the
// solution back by variable name and checks it against the model. Throws
// ExternalSolverError on process failure, unreadable output, or a solution
// that violates the model.
SolveResult solve_external(const milp::MilpModel& model, const SolveOptions& options);

// External command for a CBC executable. The cutoff increment is zeroed so
// that nodes improving the incumbent by less than CBC's estimate are kept;
// primal heuristics are off, as on the planning models they cost more time
// than they save.
std::string cbc_command(const std::string& executable);

// Dispatches on options.mode.
SolveResult solve(const milp::MilpModel& model, const SolveOptions& options = {});

// Parses `<name> <value>` lines (with `#` comments and an optional
// `# status <word>` line) or CBC's native solution format. Unlisted
// variables read as zero.
struct ExternalSolution {
  SolveStatus status = SolveStatus::kOptimal;
  std::vector<std::pair<std::string, double>> values;
};
ExternalSolution parse_solution_text(const std::string& text);

}  // namespace stlcomm::solver
