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

#include "stlcomm/encoder/scenario.hpp"

#include <cmath>
#include <string>

#include "stlcomm/error.hpp"

namespace stlcomm::encoder {

namespace {

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ValidationError(path, what);
}

bool finite(double v) { return std::isfinite(v); }

void check_polytope(const Polytope& p, const std::string& path, std::size_t min_faces) {
  require(p.faces.size() >= min_faces, path,
          "needs at least " + std::to_string(min_faces) + " faces, got " + std::to_string(p.faces.size()));
  for (std::size_t j = 0; j < p.faces.size(); ++j) {
    const auto& f = p.faces[j];
    const std::string at = path + "/" + std::to_string(j);
    require(finite(f.a[0]) && finite(f.a[1]) && finite(f.b), at, "non-finite face");
    require(f.a[0] != 0.0 || f.a[1] != 0.0, at, "face normal is zero");
  }
}

}  // namespace

void Scenario::validate() const {
  require(!agents.empty(), "agents", "at least one agent is required");
  require(horizon >= 1, "T_f", "must be at least 1");
  require(dt > 0.0 && finite(dt), "dt", "must be positive");
  require(u_max > 0.0 && finite(u_max), "u_max", "must be positive");
  require(v_max > 0.0 && finite(v_max), "v_max", "must be positive");
  require(polygon_sides >= 3, "H", "must be at least 3");
  require(d1 > 0.0 && finite(d1), "d1", "must be positive");
  require(d2 > 0.0 && finite(d2), "d2", "must be positive");
  for (std::size_t k = 0; k < q.size(); ++k) {
    require(q[k] >= 0.0 && finite(q[k]), "q/" + std::to_string(k), "must be non-negative");
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    require(r[k] >= 0.0 && finite(r[k]), "r/" + std::to_string(k), "must be non-negative");
  }
  if (baseline) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha", "must lie in (0,1]");
  } else {
    require(alpha > 0.0 && alpha < 1.0, "alpha", "must lie strictly between 0 and 1");
  }
  require(big_m > 0.0 && finite(big_m), "M", "must be positive");
  require(epsilon > 0.0 && finite(epsilon), "epsilon", "must be positive");
  require(obstacle_buffer >= 0.0 && finite(obstacle_buffer), "obstacle_buffer", "must be non-negative");
  grid.validate();
  channel.hyperparams.validate();
  require(channel.rssi_exclusion_db >= 0.0, "channel/epsilon_rssi", "must be non-negative");
  require(A_d.allFinite(), "A_d", "non-finite entry");
  require(B_d.allFinite(), "B_d", "non-finite entry");

  const double tol = 1e-9;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& ag = agents[i];
    const std::string path = "agents/" + std::to_string(i);
    for (double v : ag.initial_state) require(finite(v), path + "/initial_state", "non-finite entry");
    require(ag.mass > 0.0 && finite(ag.mass), path + "/mass", "must be positive");
    check_polytope(ag.goal, path + "/goal/faces", 3);
    require(grid.contains({ag.initial_state[0], ag.initial_state[1]}, tol), path + "/initial_state",
            "initial position lies outside the workspace");
    for (int h = 1; h <= polygon_sides; ++h) {
      const double th = 2.0 * M_PI * h / polygon_sides;
      require(std::sin(th) * ag.initial_state[2] + std::cos(th) * ag.initial_state[3] <= v_max + tol,
              path + "/initial_state", "initial velocity exceeds the speed polygon");
    }
    // Bounded goal region inside the workspace.
    const double pad = 1e3 * (1.0 + grid.N * grid.d);
    const auto verts = clip_to_box(ag.goal, grid.x_min - pad, grid.x_max() + pad, grid.y_min - pad,
                                   grid.y_max() + pad);
    require(!verts.empty(), path + "/goal", "goal region is empty");
    for (const auto& v : verts) {
      require(grid.contains(v, 1e-6), path + "/goal", "goal region extends outside the workspace");
    }
  }
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    check_polytope(obstacles[k], "obstacles/" + std::to_string(k) + "/faces", 3);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [p, qa] = pairs[k];
    const std::string path = "pairs/" + std::to_string(k);
    const int n = static_cast<int>(agents.size());
    require(p >= 0 && p < n && qa >= 0 && qa < n, path, "agent index out of range");
    require(p != qa, path, "an agent cannot communicate with itself");
  }
}

std::vector<std::pair<int, int>> Scenario::communication_pairs() const {
  if (!pairs.empty()) return pairs;
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(agents.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

std::vector<Polytope> Scenario::buffered_obstacles() const {
  std::vector<Polytope> out;
  for (const auto& o : obstacles) out.push_back(obstacle_buffer > 0.0 ? o.inflated(obstacle_buffer) : o);
  return out;
}

stl::Formula Scenario::agent_formula(std::size_t agent, FormulaGroups groups) const {
  stl::SafetyParams sp;
  sp.d1 = d1;
  sp.d2 = d2;
  sp.horizon = horizon;
  sp.collision_mode = collision_mode;
  sp.obstacle_mode = obstacle_mode;
  sp.collisions = groups.collisions;
  std::vector<stl::Formula> parts;
  if (groups.goal) parts.push_back(stl::build_goal_formula(agents.at(agent).goal, horizon, agent, agents.size()));
  const auto obstacles_in = groups.obstacles ? buffered_obstacles() : std::vector<Polytope>{};
  if (!obstacles_in.empty() || (groups.collisions && agents.size() > 1)) {
    parts.push_back(stl::build_safety_formula(obstacles_in, agent, agents.size(), sp));
  }
  return stl::Formula::all_of(std::move(parts));
}

Eigen::Matrix4d double_integrator_A(double dt) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a(0, 2) = dt;
  a(1, 3) = dt;
  return a;
}

Eigen::Matrix<double, 4, 2> double_integrator_B(double dt) {
  Eigen::Matrix<double, 4, 2> b = Eigen::Matrix<double, 4, 2>::Zero();
  b(0, 0) = 0.5 * dt * dt;
  b(1, 1) = 0.5 * dt * dt;
  b(2, 0) = dt;
  b(3, 1) = dt;
  return b;
}

}  // namespace stlcomm::encoder
