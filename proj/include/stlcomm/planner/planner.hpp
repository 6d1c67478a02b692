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

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stlcomm/channel/gp.hpp"
#include "stlcomm/encoder/encoder.hpp"
#include "stlcomm/encoder/scenario.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::planner {

using encoder::Scenario;
using encoder::State;

inline constexpr int kScenarioSchemaVersion = 1;

// Parses and validates a scenario document. Relative paths inside it are
// resolved against base_dir. Throws ValidationError with the field path.
Scenario load_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scenario load_scenario_file(const std::filesystem::path& path);

// GP channel fitted on the scenario's training samples (prior only when
// there are none) and the partition gain matrix built from it.
channel::GpChannelModel fit_channel(const Scenario& s);
channel::GainMatrix gain_matrix(const Scenario& s);

struct AgentPlan {
  std::vector<State> states;                  // t = 0..T_f
  std::vector<std::array<double, 2>> inputs;  // t = 0..T_f-1
  std::vector<int> cells;                     // occupied partition per step
};

struct CostBreakdown {
  double j1 = 0.0;     // recomputed from the trajectories
  double j2 = 0.0;     // recomputed from the occupied partitions
  double total = 0.0;  // alpha j1 + (1 - alpha) j2
  double solver_objective = 0.0;
};

struct TurningRateCheck {
  int agent = 0;
  int step = 0;
  double omega = 0.0;
  double limit = 0.0;
  bool skipped = false;  // speed too small for a turning rate
  bool violated = false;
};

struct PairSeparation {
  int first = 0;
  int second = 0;
  double min_dx = 0.0;
  double min_dy = 0.0;
};

struct Verification {
  std::vector<bool> stl_satisfied;  // per agent
  std::vector<TurningRateCheck> turning;
  std::vector<PairSeparation> separations;
  double dynamics_residual = 0.0;
  double cost_audit_error = 0.0;  // |objective - total| / max(1, |objective|)
  bool cells_consistent = true;   // every reported partition contains its position
  std::vector<std::string> notes;
};

struct SolverStats {
  std::string mode;
  solver::SolveStatus status = solver::SolveStatus::kOptimal;
  double objective = 0.0;
  double bound = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_time = 0.0;
};

struct PlanResult {
  double alpha = 0.0;
  std::vector<AgentPlan> agents;
  CostBreakdown costs;
  SolverStats solver;
  encoder::ModelStats model;
  Verification verification;
};

inline constexpr double kDynamicsTolerance = 1e-6;
inline constexpr double kCostAuditTolerance = 1e-5;

// Fits the channel, assembles and solves the model, decodes and verifies
// the plan. Throws InfeasibleError naming the first constraint group whose
// removal restores feasibility, SolverLimitError when the solver stops
// without a plan, and NumericalError when the decoded plan fails its own
// specification. A limit reached with an incumbent returns that plan with
// the solver status set accordingly.
PlanResult plan(const Scenario& s, const solver::SolveOptions& options);
PlanResult plan(const Scenario& s, const channel::GainMatrix& gain, const solver::SolveOptions& options);

// J1 over states t = 0..T_f and inputs t = 0..T_f-1.
double motion_cost(const Scenario& s, const std::vector<AgentPlan>& agents);
// Sum over steps and communicating pairs of G at the occupied partitions.
double communication_cost(const Scenario& s, const channel::GainMatrix& gain,
                          const std::vector<AgentPlan>& agents);

struct Comparison {
  PlanResult joint;
  PlanResult motion_only;
  double j2_joint = 0.0;
  double j2_motion_only = 0.0;
  // (J2 motion-only - J2 joint) / |J2 joint|; positive when the joint plan
  // communicates better.
  double relative_change = 0.0;
};

// Solves the joint problem and the motion-only baseline (alpha = 1) and
// prices both plans with the same gain matrix.
Comparison compare_baseline(const Scenario& s, const solver::SolveOptions& options);

}  // namespace stlcomm::planner
