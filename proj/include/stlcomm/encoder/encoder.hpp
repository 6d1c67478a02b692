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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "stlcomm/channel/gp.hpp"
#include "stlcomm/encoder/scenario.hpp"
#include "stlcomm/milp/model.hpp"
#include "stlcomm/stl/formula.hpp"

namespace stlcomm::encoder {

using milp::LinearExpr;
using milp::MilpModel;
using milp::VarId;

struct CellVars {
  VarId a;  // column along x, 1..N
  VarId b;  // row along y, 1..N
  VarId r;  // partition (a-1) N + b
  // indicator[c-1] is 1 iff the agent is in partition c. Empty unless the
  // scenario enables occupancy tightening.
  std::vector<VarId> indicator;
};

struct PairOccupancy {
  int sender = 0;
  int receiver = 0;
  int cells = 0;  // n
  // occupancy[t][(i-1) n + (j-1)] is O_{ijt}; zero exactly at the occupied pair.
  std::vector<std::vector<VarId>> occupancy;

  VarId at(int t, int i, int j) const {
    return occupancy[static_cast<std::size_t>(t)][static_cast<std::size_t>((i - 1) * cells + (j - 1))];
  }
};

// Where every decision variable of the planning model lives.
struct DecisionIndex {
  int horizon = 0;
  std::vector<std::vector<std::array<VarId, 4>>> state;        // [agent][t], t = 0..T_f
  std::vector<std::vector<std::array<VarId, 2>>> input;        // [agent][t], t = 0..T_f-1
  std::vector<std::vector<std::array<VarId, 4>>> state_slack;  // alpha_{it}
  std::vector<std::vector<std::array<VarId, 2>>> input_slack;  // beta_{it}
  std::vector<std::vector<std::optional<CellVars>>> cells;     // [agent][t]
  std::vector<PairOccupancy> pairs;
  // Satisfaction variable of (formula node, step).
  std::map<std::pair<const stl::FormulaNode*, int>, VarId> satisfaction;
  std::vector<VarId> requirement;  // z_0 of each agent's phi_i

  // Stacked position/velocity variables of all agents, [t][4 P].
  std::vector<std::vector<VarId>> stacked_signal() const;
};

// Adds state and input variables with their bounds: positions inside the
// workspace and the set reachable from the initial state, velocities inside
// the box around the speed polygon, inputs inside [-u_max, u_max].
DecisionIndex create_decision_variables(MilpModel& model, const Scenario& s);

void encode_dynamics(MilpModel& model, const Scenario& s, const DecisionIndex& index);
void encode_input_velocity_bounds(MilpModel& model, const Scenario& s, const DecisionIndex& index);
LinearExpr encode_cost_motion(MilpModel& model, const Scenario& s, DecisionIndex& index);

struct StlEncodingOptions {
  double big_m = 1e5;
  double epsilon = 1e-4;
};

// Big-M encoding of STL over a signal of model variables. Every node and
// step gets a binary indicator; nodes above the predicates are pinned by
// their children, so they never need branching.
class StlEncoder {
 public:
  // signal[t][k] holds coordinate k at step t; its bounds must be finite.
  StlEncoder(MilpModel& model, std::vector<std::vector<VarId>> signal, StlEncodingOptions options,
             std::map<std::pair<const stl::FormulaNode*, int>, VarId>* cache = nullptr);

  // z = 1 forces mu >= epsilon; z = 0 forces mu <= -epsilon for strict and
  // mu <= 0 for non-strict predicates. Throws ValidationError when M is too
  // small for the variable bounds.
  VarId encode_predicate(const stl::AffinePredicate& p, int t, const std::string& name);
  VarId encode(const stl::Formula& f, int t);
  // encode(f, 0) plus the row z = 1.
  VarId require(const stl::Formula& f);

  int steps() const { return static_cast<int>(signal_.size()); }

 private:
  VarId truth();
  VarId combine(bool conjunction, const std::vector<VarId>& parts, const std::string& name);
  int node_id(const stl::FormulaNode* n);

  MilpModel& model_;
  std::vector<std::vector<VarId>> signal_;
  StlEncodingOptions opt_;
  std::map<std::pair<const stl::FormulaNode*, int>, VarId> own_cache_;
  std::map<std::pair<const stl::FormulaNode*, int>, VarId>* cache_;
  std::map<const stl::FormulaNode*, int> node_ids_;
  // Structurally equal predicates share one indicator per step.
  std::map<std::tuple<std::vector<double>, double, stl::Strictness, int>, VarId> predicates_;
  std::optional<VarId> truth_;
  int aux_ = 0;
};

// Occupancy for one (sender, receiver) pair over t = 0..T_f. Cell variables
// are shared between pairs that involve the same agent.
void encode_occupancy(MilpModel& model, const Scenario& s, std::pair<int, int> pair,
                      DecisionIndex& index);

// Sum over steps and pairs of G_ij (1 - O_ijt).
LinearExpr encode_cost_comm(const channel::GainMatrix& gain, const DecisionIndex& index);

struct ModelStats {
  std::size_t variables = 0;
  std::size_t binaries = 0;
  std::size_t integers = 0;  // general integers, excluding binaries
  std::size_t constraints = 0;
};

struct Assembly {
  MilpModel model;
  DecisionIndex index;
  LinearExpr j1;  // motion cost
  LinearExpr j2;  // communication cost, constant included
  std::vector<stl::Formula> formulas;  // phi_i per agent
  ModelStats stats;
};

// Constraint groups to include; used to localize infeasibility.
struct AssembleOptions {
  std::vector<FormulaGroups> groups;  // per agent; empty means all groups
  bool occupancy = true;
};

// Full planning model: minimize alpha J1 + (1 - alpha) J2 subject to the
// dynamics, bounds, every agent's phi_i and the occupancy of every pair.
// With alpha = 1 occupancy is left out and J2 is empty.
Assembly assemble(const Scenario& s, const channel::GainMatrix& gain, const AssembleOptions& options = {});

ModelStats model_stats(const MilpModel& model);

}  // namespace stlcomm::encoder
