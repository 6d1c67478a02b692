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

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "stlcomm/channel/gp.hpp"
#include "stlcomm/geometry.hpp"
#include "stlcomm/stl/builders.hpp"
#include "stlcomm/stl/formula.hpp"

namespace stlcomm::encoder {

using State = std::array<double, 4>;  // px, py, vx, vy

// Parts of an agent's specification; used to localize infeasibility.
struct FormulaGroups {
  bool goal = true;
  bool obstacles = true;
  bool collisions = true;
};

struct AgentSpec {
  State initial_state{};
  double mass = 1.0;  // kg
  Polytope goal;
};

struct ChannelConfig {
  channel::ChannelHyperparams hyperparams;
  std::string training_path;  // empty: prior mean only
  double rssi_exclusion_db = 0.1;
};

struct Scenario {
  std::vector<AgentSpec> agents;
  std::vector<Polytope> obstacles;
  double obstacle_buffer = 0.0;  // margin added to every obstacle face, m

  int horizon = 8;  // T_f, steps
  double dt = 1.0;  // s
  double u_max = 1.0;
  double v_max = 1.0;
  int polygon_sides = 8;  // H
  double d1 = 0.5;
  double d2 = 0.5;
  std::array<double, 4> q{1.0, 1.0, 1.0, 1.0};
  std::array<double, 2> r{1.0, 1.0};
  double alpha = 0.1;
  double big_m = 1e5;
  double epsilon = 1e-4;

  Grid grid;
  ChannelConfig channel;
  Eigen::Matrix4d A_d = Eigen::Matrix4d::Identity();
  Eigen::Matrix<double, 4, 2> B_d = Eigen::Matrix<double, 4, 2>::Zero();

  stl::CollisionMode collision_mode = stl::CollisionMode::kConjunction;
  stl::ObstacleMode obstacle_mode = stl::ObstacleMode::kDisjunction;

  // Communicating (sender, receiver) agent pairs. Empty means every
  // unordered pair (i, j) with i < j.
  std::vector<std::pair<int, int>> pairs;

  // Adds one binary per agent, step and partition marking the occupied
  // partition, tied to the position, to a and b, and to the row and column
  // sums of 1 - O. Every integer occupancy extends uniquely to these, so
  // the plans are unchanged; the relaxation gets much tighter and O becomes
  // integral as soon as the indicators are. The big-M occupancy rows are
  // implied by these and left out; without tightening they are the only
  // link between O and the cells.
  bool occupancy_tightening = true;

  // Motion-only mode: permits alpha = 1.
  bool baseline = false;

  // Throws ValidationError naming the offending field.
  void validate() const;

  std::size_t agent_count() const { return agents.size(); }
  std::vector<std::pair<int, int>> communication_pairs() const;
  // Obstacles as seen by the planner, i.e. grown by obstacle_buffer.
  std::vector<Polytope> buffered_obstacles() const;
  // phi_i over the stacked state of all agents.
  stl::Formula agent_formula(std::size_t agent, FormulaGroups groups = {}) const;
};

// Double-integrator matrices with sampling time dt; dt = 1 gives the
// reference model used throughout the examples.
Eigen::Matrix4d double_integrator_A(double dt);
Eigen::Matrix<double, 4, 2> double_integrator_B(double dt);

}  // namespace stlcomm::encoder
