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

#include <cstddef>
#include <vector>

#include "stlcomm/geometry.hpp"
#include "stlcomm/stl/formula.hpp"

namespace stlcomm::stl {

// Each agent occupies 4 consecutive coordinates (px, py, vx, vy) of the
// stacked state.
inline constexpr std::size_t kAgentStateDim = 4;

enum class CollisionMode {
  kConjunction,  // both axis separations required
  kDisjunction,       // separation along either axis suffices
};

enum class ObstacleMode {
  kConjunction,  // strictly outside every face at once
  kDisjunction,       // strictly outside at least one face
};

// F[0,T_f] of the agent's position lying in the goal polytope.
Formula build_goal_formula(const Polytope& goal, int horizon, std::size_t agent,
                           std::size_t agent_count);

struct SafetyParams {
  double d1 = 0.0;
  double d2 = 0.0;
  int horizon = 0;
  CollisionMode collision_mode = CollisionMode::kConjunction;
  ObstacleMode obstacle_mode = ObstacleMode::kDisjunction;
  bool collisions = true;  // false leaves out the inter-agent separation
};

// G[0,T_f] of obstacle avoidance and pairwise separation for `agent`.
Formula build_safety_formula(const std::vector<Polytope>& obstacles, std::size_t agent,
                             std::size_t agent_count, const SafetyParams& params);

// Goal and safety combined.
Formula build_agent_formula(const Polytope& goal, const std::vector<Polytope>& obstacles,
                            std::size_t agent, std::size_t agent_count,
                            const SafetyParams& params);

}  // namespace stlcomm::stl
