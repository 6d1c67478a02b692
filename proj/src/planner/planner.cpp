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

#include "stlcomm/planner/planner.hpp"

#include <algorithm>
#include <cmath>

#include "stlcomm/error.hpp"
#include "stlcomm/stl/monitor.hpp"

namespace stlcomm::planner {

namespace {

using encoder::Assembly;
using encoder::AssembleOptions;
using encoder::FormulaGroups;
using milp::LinearExpr;
using milp::VarId;
using solver::SolveOptions;
using solver::SolveResult;
using solver::SolveStatus;

constexpr double kProbeTimeLimit = 60.0;  // seconds per localization probe
constexpr double kCellTolerance = 1e-6;   // m
constexpr double kStillSpeed = 1e-9;      // m/s

bool has_plan(const SolveResult& r) {
  return r.assignment.has_value() && (r.status == SolveStatus::kOptimal || r.status == SolveStatus::kFeasibleGap ||
                                      r.status == SolveStatus::kLimit);
}

// Re-solves the continuous part with the integers fixed, so that an
// externally produced point satisfies the equality rows to LP precision.
void polish(const milp::MilpModel& model, SolveResult& r) {
  milp::MilpModel fixed = model;
  const auto& vars = fixed.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (!vars[j].is_integer()) continue;
    const double v = std::round(r.assignment->values[j]);
    fixed.set_bounds(VarId{static_cast<int>(j)}, v, v);
  }
  const auto lp = solver::solve_lp(fixed);
  if (lp.status != solver::LpStatus::kOptimal) return;
  r.assignment = lp.assignment;
  r.objective = lp.objective;
}

SolveResult run_solver(const milp::MilpModel& model, const SolveOptions& options) {
  SolveResult r = solver::solve(model, options);
  if (options.mode == solver::SolveMode::kExternal && r.assignment) polish(model, r);
  return r;
}

bool probe_feasible(const Scenario& s, const channel::GainMatrix& gain, const AssembleOptions& drop,
                    const SolveOptions& options) {
  Assembly probe = encoder::assemble(s, gain, drop);
  probe.model.set_objective(LinearExpr{}, milp::Sense::kMinimize);
  SolveOptions o = options;
  o.time_limit = std::min(options.time_limit, kProbeTimeLimit);
  o.log = nullptr;
  return has_plan(run_solver(probe.model, o));
}

// Names the first constraint group, in the order goal, obstacles,
// collisions, occupancy, whose removal makes the problem feasible.
std::string localize_infeasibility(const Scenario& s, const channel::GainMatrix& gain,
                                   const SolveOptions& options) {
  const std::size_t P = s.agent_count();
  const char* names[] = {"goal", "obstacle", "collision"};
  for (int g = 0; g < 3; ++g) {
    for (std::size_t i = 0; i < P; ++i) {
      AssembleOptions drop;
      drop.groups.assign(P, FormulaGroups{});
      FormulaGroups& groups = drop.groups[i];
      if (g == 0) groups.goal = false;
      if (g == 1) {
        if (s.obstacles.empty()) continue;
        groups.obstacles = false;
      }
      if (g == 2) {
        if (P < 2) continue;
        // Collision rows of a pair live in both agents' formulas.
        for (auto& other : drop.groups) other.collisions = false;
        if (i > 0) continue;
      }
      if (probe_feasible(s, gain, drop, options)) {
        if (g == 2) return "infeasible: relaxing the collision requirement restores feasibility";
        return "infeasible: relaxing the " + std::string(names[g]) + " requirement of agent " +
               std::to_string(i + 1) + " restores feasibility";
      }
    }
  }
  if (s.alpha < 1.0) {
    AssembleOptions drop;
    drop.occupancy = false;
    if (probe_feasible(s, gain, drop, options)) {
      return "infeasible: relaxing the occupancy constraints restores feasibility";
    }
  }
  return "infeasible: no single constraint group explains it (dynamics, bounds and initial states conflict)";
}

std::vector<AgentPlan> decode(const Scenario& s, const Assembly& a, const std::vector<double>& x) {
  auto value = [&](VarId v) { return x[static_cast<std::size_t>(v.value)]; };
  std::vector<AgentPlan> out(s.agent_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& ap = out[i];
    for (int t = 0; t <= s.horizon; ++t) {
      const auto& sv = a.index.state[i][static_cast<std::size_t>(t)];
      ap.states.push_back({value(sv[0]), value(sv[1]), value(sv[2]), value(sv[3])});
      const auto& cv = a.index.cells.empty() ? std::nullopt : a.index.cells[i][static_cast<std::size_t>(t)];
      if (cv) {
        ap.cells.push_back(static_cast<int>(std::lround(value(cv->r))));
      } else {
        ap.cells.push_back(s.grid.cell_of({ap.states.back()[0], ap.states.back()[1]}, 0, kCellTolerance));
      }
    }
    for (int t = 0; t < s.horizon; ++t) {
      const auto& uv = a.index.input[i][static_cast<std::size_t>(t)];
      ap.inputs.push_back({value(uv[0]), value(uv[1])});
    }
  }
  return out;
}

stl::Signal stacked(const std::vector<AgentPlan>& agents) {
  std::vector<std::vector<double>> rows(agents.front().states.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (const auto& ap : agents) rows[t].insert(rows[t].end(), ap.states[t].begin(), ap.states[t].end());
  }
  return stl::Signal(rows);
}

Verification verify(const Scenario& s, const Assembly& a, const std::vector<AgentPlan>& agents) {
  Verification v;
  const stl::Signal sig = stacked(agents);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    v.stl_satisfied.push_back(stl::eval_monitor(a.formulas[i], sig, 0));
  }

  for (std::size_t i = 0; i < agents.size(); ++i) {
    const double m = s.agents[i].mass;
    const double limit = s.u_max / (m * s.v_max);
    for (int t = 0; t < s.horizon; ++t) {
      const auto& x = agents[i].states[static_cast<std::size_t>(t)];
      const auto& u = agents[i].inputs[static_cast<std::size_t>(t)];
      TurningRateCheck c;
      c.agent = static_cast<int>(i) + 1;
      c.step = t;
      c.limit = limit;
      const double speed = std::hypot(x[2], x[3]);
      if (speed < kStillSpeed) {
        c.skipped = true;
        v.notes.push_back("agent " + std::to_string(i + 1) + " step " + std::to_string(t) +
                          ": turning rate skipped at zero speed");
      } else {
        c.omega = std::hypot(u[0], u[1]) / (m * speed);
        c.violated = c.omega > limit;
        if (c.violated) {
          v.notes.push_back("agent " + std::to_string(i + 1) + " step " + std::to_string(t) +
                            ": turning rate above its limit");
        }
      }
      v.turning.push_back(c);
    }
  }

  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      PairSeparation p{static_cast<int>(i) + 1, static_cast<int>(j) + 1, INFINITY, INFINITY};
      for (std::size_t t = 0; t < agents[i].states.size(); ++t) {
        p.min_dx = std::min(p.min_dx, std::abs(agents[i].states[t][0] - agents[j].states[t][0]));
        p.min_dy = std::min(p.min_dy, std::abs(agents[i].states[t][1] - agents[j].states[t][1]));
      }
      v.separations.push_back(p);
    }
  }

  for (const auto& ap : agents) {
    for (int t = 0; t < s.horizon; ++t) {
      Eigen::Vector4d x, next;
      for (int k = 0; k < 4; ++k) {
        x(k) = ap.states[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)];
        next(k) = ap.states[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(k)];
      }
      const Eigen::Vector2d u(ap.inputs[static_cast<std::size_t>(t)][0], ap.inputs[static_cast<std::size_t>(t)][1]);
      const Eigen::Vector4d r = next - s.A_d * x - s.B_d * u;
      v.dynamics_residual = std::max(v.dynamics_residual, r.cwiseAbs().maxCoeff());
    }
    for (std::size_t t = 0; t < ap.states.size(); ++t) {
      const Vec2 p{ap.states[t][0], ap.states[t][1]};
      if (s.grid.cell_of(p, ap.cells[t], kCellTolerance) != ap.cells[t]) v.cells_consistent = false;
    }
  }
  if (!v.cells_consistent) v.notes.push_back("a reported partition does not contain its position");
  return v;
}

}  // namespace

channel::GpChannelModel fit_channel(const Scenario& s) {
  std::vector<channel::PairSample> samples;
  if (!s.channel.training_path.empty()) samples = channel::load_training_csv(s.channel.training_path);
  return channel::GpChannelModel::fit(s.channel.hyperparams, std::move(samples));
}

channel::GainMatrix gain_matrix(const Scenario& s) {
  return channel::build_gain_matrix(fit_channel(s), s.grid, {s.channel.rssi_exclusion_db});
}

double motion_cost(const Scenario& s, const std::vector<AgentPlan>& agents) {
  double j1 = 0.0;
  for (const auto& ap : agents) {
    for (const auto& x : ap.states) {
      for (std::size_t k = 0; k < 4; ++k) j1 += s.q[k] * std::abs(x[k]);
    }
    for (const auto& u : ap.inputs) {
      for (std::size_t k = 0; k < 2; ++k) j1 += s.r[k] * std::abs(u[k]);
    }
  }
  return j1;
}

double communication_cost(const Scenario& s, const channel::GainMatrix& gain,
                          const std::vector<AgentPlan>& agents) {
  double j2 = 0.0;
  for (const auto& [p, q] : s.communication_pairs()) {
    const auto& cp = agents[static_cast<std::size_t>(p)].cells;
    const auto& cq = agents[static_cast<std::size_t>(q)].cells;
    for (std::size_t t = 0; t < cp.size(); ++t) j2 += gain.at(cp[t], cq[t]);
  }
  return j2;
}

PlanResult plan(const Scenario& s, const SolveOptions& options) { return plan(s, gain_matrix(s), options); }

PlanResult plan(const Scenario& s, const channel::GainMatrix& gain, const SolveOptions& options) {
  s.validate();
  options.validate();
  Assembly a = encoder::assemble(s, gain);
  const SolveResult r = run_solver(a.model, options);

  if (r.status == SolveStatus::kInfeasible) throw InfeasibleError(localize_infeasibility(s, gain, options));
  if (r.status == SolveStatus::kUnbounded) throw NumericalError("planning model reported unbounded");
  if (!has_plan(r)) throw SolverLimitError("solver stopped at its limit without a plan");

  PlanResult out;
  out.alpha = s.alpha;
  out.agents = decode(s, a, r.assignment->values);
  out.costs.j1 = motion_cost(s, out.agents);
  out.costs.j2 = communication_cost(s, gain, out.agents);
  out.costs.total = s.alpha * out.costs.j1 + (1.0 - s.alpha) * out.costs.j2;
  out.costs.solver_objective = r.objective;
  out.solver = {options.mode == solver::SolveMode::kInternal ? "internal" : "external",
                r.status,
                r.objective,
                r.bound,
                r.nodes,
                r.lp_iterations,
                r.wall_time};
  out.model = a.stats;
  out.verification = verify(s, a, out.agents);
  out.verification.cost_audit_error =
      std::abs(r.objective - out.costs.total) / std::max(1.0, std::abs(r.objective));

  for (std::size_t i = 0; i < out.agents.size(); ++i) {
    if (!out.verification.stl_satisfied[i]) {
      throw NumericalError("decoded plan of agent " + std::to_string(i + 1) +
                           " fails its specification; solver tolerance artifact");
    }
  }
  if (out.verification.dynamics_residual > kDynamicsTolerance) {
    throw NumericalError("decoded plan violates the dynamics by " + std::to_string(out.verification.dynamics_residual));
  }
  return out;
}

Comparison compare_baseline(const Scenario& s, const SolveOptions& options) {
  const channel::GainMatrix gain = gain_matrix(s);
  Scenario motion = s;
  motion.baseline = true;
  motion.alpha = 1.0;
  Comparison c;
  c.joint = plan(s, gain, options);
  c.motion_only = plan(motion, gain, options);
  c.j2_joint = c.joint.costs.j2;
  c.j2_motion_only = c.motion_only.costs.j2;
  const double denom = std::abs(c.j2_joint);
  c.relative_change = denom > 0.0 ? (c.j2_motion_only - c.j2_joint) / denom : 0.0;
  return c;
}

}  // namespace stlcomm::planner
