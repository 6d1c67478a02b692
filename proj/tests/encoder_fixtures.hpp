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

// Small encoder models shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlcomm/encoder/encoder.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::encoder::fixtures {

using milp::Relation;
using milp::VarKind;


// Agents at rest at the given positions, a single 10 m cell around the
// origin, goals equal to small boxes around the start.
inline Scenario basic_scenario(std::vector<Vec2> starts, int horizon) {
  Scenario s;
  for (const auto& p : starts) {
    AgentSpec a;
    a.initial_state = {p[0], p[1], 0.0, 0.0};
    a.goal = Polytope::box(p[0] - 0.25, p[0] + 0.25, p[1] - 0.25, p[1] + 0.25);
    s.agents.push_back(a);
  }
  s.horizon = horizon;
  s.u_max = 1.0;
  s.v_max = 2.0;
  s.d1 = 0.1;
  s.d2 = 0.1;
  s.grid = Grid{1, 10.0, -5.0, -5.0};
  s.A_d = double_integrator_A(1.0);
  s.B_d = double_integrator_B(1.0);
  return s;
}

inline double value(const solver::SolveResult& r, VarId v) { return r.assignment->values[static_cast<std::size_t>(v.value)]; }

inline std::vector<const milp::Constraint*> rows_with_prefix(const MilpModel& m, const std::string& prefix) {
  std::vector<const milp::Constraint*> out;
  for (const auto& c : m.constraints()) {
    if (c.name.rfind(prefix, 0) == 0) out.push_back(&c);
  }
  return out;
}

// Velocity rows of agent 0 at step 0, as (coef vx, coef vy, rhs).
inline std::vector<std::array<double, 3>> velocity_rows(const MilpModel& m, const DecisionIndex& index) {
  std::vector<std::array<double, 3>> out;
  const VarId vx = index.state[0][0][2];
  const VarId vy = index.state[0][0][3];
  for (const auto* c : rows_with_prefix(m, "vel_0_0_")) {
    std::array<double, 3> row{0.0, 0.0, c->rhs};
    for (const auto& t : c->terms) {
      if (t.var == vx) row[0] = t.coef;
      else if (t.var == vy) row[1] = t.coef;
      else throw std::logic_error("unexpected term in " + c->name);
    }
    if (c->relation != Relation::kLessEqual) throw std::logic_error(c->name + " is not a <= row");
    out.push_back(row);
  }
  return out;
}

inline std::vector<std::array<double, 3>> polygon(int H, double v_max) {
  Scenario s = basic_scenario({{0.0, 0.0}}, 1);
  s.polygon_sides = H;
  s.v_max = v_max;
  MilpModel m("vel");
  auto index = create_decision_variables(m, s);
  encode_input_velocity_bounds(m, s, index);
  return velocity_rows(m, index);
}

inline bool inside(const std::vector<std::array<double, 3>>& rows, double vx, double vy) {
  for (const auto& r : rows) {
    if (r[0] * vx + r[1] * vy > r[2] + 1e-12) return false;
  }
  return true;
}

// A model with one scalar signal variable per step.
struct SignalModel {
  MilpModel m{"stl"};
  std::vector<std::vector<VarId>> signal;

  SignalModel(const std::vector<std::vector<double>>& lo, const std::vector<std::vector<double>>& hi) {
    for (std::size_t t = 0; t < lo.size(); ++t) {
      std::vector<VarId> row;
      for (std::size_t k = 0; k < lo[t].size(); ++k) {
        row.push_back(m.add_variable({"s_" + std::to_string(t) + "_" + std::to_string(k), VarKind::kContinuous,
                                      lo[t][k], hi[t][k]}));
      }
      signal.push_back(row);
    }
  }
  static SignalModel fixed(const std::vector<std::vector<double>>& x) { return SignalModel(x, x); }
};

// Two agents at rest at the centers of partitions cp and cq on an N x N grid
// of unit cells, positions fixed, occupancy of the pair encoded.
struct OccupancyFixture {
  Scenario s;
  MilpModel m{"occ"};
  DecisionIndex index;

  OccupancyFixture(int N, Vec2 pp, Vec2 pq, bool tight) {
    s = basic_scenario({pp, pq}, 1);
    s.grid = Grid{N, 1.0, 0.0, 0.0};
    for (auto& a : s.agents) a.goal = Polytope::box(0.0, N, 0.0, N);
    s.u_max = 0.01;
    s.occupancy_tightening = tight;
    index = create_decision_variables(m, s);
    for (std::size_t i = 0; i < 2; ++i) {
      for (const auto& x : index.state[i]) {
        for (int k = 0; k < 4; ++k) {
          const double v = s.agents[i].initial_state[static_cast<std::size_t>(k)];
          m.set_bounds(x[k], v, v);
        }
      }
    }
    encode_occupancy(m, s, {0, 1}, index);
  }

  // Every variable at the value implied by the positions, with O at step 0
  // taken from `o0` (indexed (i-1) n + (j-1)).
  std::vector<double> assignment(const std::vector<int>& o0, int rp, int rq) const {
    std::vector<double> v(m.num_variables(), 0.0);
    auto set = [&](VarId id, double x) { v[static_cast<std::size_t>(id.value)] = x; };
    const int N = s.grid.N;
    const int cells[2] = {rp, rq};
    for (std::size_t i = 0; i < 2; ++i) {
      for (int t = 0; t <= 1; ++t) {
        for (int k = 0; k < 4; ++k) set(index.state[i][static_cast<std::size_t>(t)][k], s.agents[i].initial_state[static_cast<std::size_t>(k)]);
        const auto& c = *index.cells[i][static_cast<std::size_t>(t)];
        set(c.a, (cells[i] - 1) / N + 1);
        set(c.b, (cells[i] - 1) % N + 1);
        set(c.r, cells[i]);
        for (std::size_t k = 0; k < c.indicator.size(); ++k) set(c.indicator[k], int(k) + 1 == cells[i] ? 1.0 : 0.0);
      }
    }
    const auto& pair = index.pairs[0];
    const int n = pair.cells;
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        set(pair.at(0, i, j), o0[static_cast<std::size_t>((i - 1) * n + (j - 1))]);
        set(pair.at(1, i, j), i == rp && j == rq ? 0.0 : 1.0);
      }
    }
    return v;
  }

  // Bounds and rows within 1e-9; lighter than a full feasibility report
  // for the exhaustive loops.
  bool feasible(const std::vector<double>& v) const {
    const auto& vars = m.variables();
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (v[j] < vars[j].lb - 1e-9 || v[j] > vars[j].ub + 1e-9) return false;
    }
    for (const auto& c : m.constraints()) {
      const double act = c.activity(v);
      if (c.relation != Relation::kGreaterEqual && act > c.rhs + 1e-9) return false;
      if (c.relation != Relation::kLessEqual && act < c.rhs - 1e-9) return false;
    }
    return true;
  }
};

inline Vec2 center_of(int N, int r) { return Grid{N, 1.0, 0.0, 0.0}.center(r); }

struct PlacementCheck {
  int feasible_patterns = 0;
  bool zero_elsewhere = false;  // some feasible pattern has a zero off (rp, rq)
};

// Feasible step-0 occupancy patterns for agents at the centers of rp and rq.
// Exhaustive mode tries all 2^(n^2) patterns; otherwise only the single-zero
// patterns and the all-ones pattern, the sum row ruling out the rest.
inline PlacementCheck check_placement(int N, int rp, int rq, bool tight, bool exhaustive) {
  const int n = N * N;
  const auto target = static_cast<std::size_t>((rp - 1) * n + (rq - 1));
  OccupancyFixture f(N, center_of(N, rp), center_of(N, rq), tight);
  PlacementCheck out;
  auto visit = [&](const std::vector<int>& o) {
    if (!f.feasible(f.assignment(o, rp, rq))) return;
    ++out.feasible_patterns;
    if (o[target] != 0 || std::count(o.begin(), o.end(), 0) != 1) out.zero_elsewhere = true;
  };
  if (exhaustive) {
    for (std::uint32_t mask = 0; mask < (1u << (n * n)); ++mask) {
      std::vector<int> o(static_cast<std::size_t>(n * n));
      for (int k = 0; k < n * n; ++k) o[static_cast<std::size_t>(k)] = (mask >> k) & 1u;
      visit(o);
    }
  } else {
    for (int k = 0; k < n * n; ++k) {
      std::vector<int> o(static_cast<std::size_t>(n * n), 1);
      o[static_cast<std::size_t>(k)] = 0;
      visit(o);
    }
    visit(std::vector<int>(static_cast<std::size_t>(n * n), 1));
  }
  return out;
}

}  // namespace stlcomm::encoder::fixtures
