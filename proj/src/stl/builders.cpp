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

#include "stlcomm/stl/builders.hpp"

#include <string>

#include "stlcomm/error.hpp"

namespace stlcomm::stl {

namespace {

AffinePredicate position_predicate(std::size_t agent, std::size_t agent_count, Vec2 coeff,
                                   double offset, Strictness strictness) {
  std::vector<double> c(kAgentStateDim * agent_count, 0.0);
  c[kAgentStateDim * agent] = coeff[0];
  c[kAgentStateDim * agent + 1] = coeff[1];
  return AffinePredicate(std::move(c), offset, strictness);
}

// p_{i,axis} - p_{j,axis} - d >= 0
Formula separation(std::size_t i, std::size_t j, std::size_t axis, double d,
                   std::size_t agent_count) {
  std::vector<double> c(kAgentStateDim * agent_count, 0.0);
  c[kAgentStateDim * i + axis] = 1.0;
  c[kAgentStateDim * j + axis] = -1.0;
  return Formula::predicate(AffinePredicate(std::move(c), -d, Strictness::kNonStrict));
}

void check_agent(std::size_t agent, std::size_t agent_count) {
  if (agent >= agent_count) {
    throw ValidationError("agent index " + std::to_string(agent) + " out of range");
  }
}

}  // namespace

Formula build_goal_formula(const Polytope& goal, int horizon, std::size_t agent,
                           std::size_t agent_count) {
  check_agent(agent, agent_count);
  if (goal.faces.size() < 3) {
    throw ValidationError("goal polytope needs at least 3 faces, got " +
                          std::to_string(goal.faces.size()));
  }
  if (horizon < 0) throw ValidationError("negative horizon");
  std::vector<Formula> inside;
  for (const auto& f : goal.faces) {
    // a.p + b <= 0  <=>  -a.p - b >= 0
    inside.push_back(Formula::predicate(position_predicate(
        agent, agent_count, {-f.a[0], -f.a[1]}, -f.b, Strictness::kNonStrict)));
  }
  return Formula::eventually({0, horizon}, Formula::conjunction(std::move(inside)));
}

Formula build_safety_formula(const std::vector<Polytope>& obstacles, std::size_t agent,
                             std::size_t agent_count, const SafetyParams& params) {
  check_agent(agent, agent_count);
  if (!(params.d1 > 0.0) || !(params.d2 > 0.0)) {
    throw ValidationError("safety distances must be positive");
  }
  if (params.horizon < 1) throw ValidationError("horizon must be at least 1");

  std::vector<Formula> clauses;
  for (const auto& obs : obstacles) {
    if (obs.faces.empty()) throw ValidationError("obstacle without faces");
    std::vector<Formula> outside;
    for (const auto& f : obs.faces) {
      outside.push_back(Formula::predicate(
          position_predicate(agent, agent_count, f.a, f.b, Strictness::kStrict)));
    }
    clauses.push_back(params.obstacle_mode == ObstacleMode::kDisjunction
                          ? Formula::any_of(std::move(outside))
                          : Formula::all_of(std::move(outside)));
  }

  const double dist[2] = {params.d1, params.d2};
  for (std::size_t other = 0; other < agent_count && params.collisions; ++other) {
    if (other == agent) continue;
    std::vector<Formula> axes;
    for (std::size_t axis = 0; axis < 2; ++axis) {
      axes.push_back(Formula::disjunction({separation(agent, other, axis, dist[axis], agent_count),
                                           separation(other, agent, axis, dist[axis], agent_count)}));
    }
    if (params.collision_mode == CollisionMode::kConjunction) {
      clauses.push_back(Formula::conjunction(std::move(axes)));
    } else {
      std::vector<Formula> flat;
      for (const auto& ax : axes) {
        flat.insert(flat.end(), ax.children().begin(), ax.children().end());
      }
      clauses.push_back(Formula::disjunction(std::move(flat)));
    }
  }
  return Formula::always({0, params.horizon}, Formula::all_of(std::move(clauses)));
}

Formula build_agent_formula(const Polytope& goal, const std::vector<Polytope>& obstacles,
                            std::size_t agent, std::size_t agent_count,
                            const SafetyParams& params) {
  return Formula::conjunction({build_goal_formula(goal, params.horizon, agent, agent_count),
                               build_safety_formula(obstacles, agent, agent_count, params)});
}

}  // namespace stlcomm::stl
