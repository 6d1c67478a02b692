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

#include <algorithm>
#include <cmath>

#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {

LpProblem LpProblem::from_model(const milp::MilpModel& model) {
  LpProblem lp;
  lp.num_cols = static_cast<int>(model.num_variables());
  lp.num_rows = static_cast<int>(model.num_constraints());
  lp.maximize = model.objective().sense == milp::Sense::kMaximize;
  const double sign = lp.maximize ? -1.0 : 1.0;

  lp.cost.assign(static_cast<std::size_t>(lp.num_cols), 0.0);
  for (const auto& t : model.objective().expr.terms()) {
    lp.cost[static_cast<std::size_t>(t.var.value)] += sign * t.coef;
  }
  lp.objective_offset = sign * model.objective().expr.constant();

  for (const auto& v : model.variables()) {
    double lb = v.lb;
    double ub = v.ub;
    if (v.is_integer()) {
      if (std::isfinite(lb)) lb = std::ceil(lb - 1e-9);
      if (std::isfinite(ub)) ub = std::floor(ub + 1e-9);
    }
    lp.col_lb.push_back(lb);
    lp.col_ub.push_back(ub);
    lp.integer.push_back(v.is_integer());
    lp.priority.push_back(v.branch_priority);
  }

  std::vector<int> col_count(static_cast<std::size_t>(lp.num_cols), 0);
  lp.row_start.push_back(0);
  for (const auto& r : model.constraints()) {
    switch (r.relation) {
      case milp::Relation::kLessEqual:
        lp.row_lb.push_back(-milp::kInfinity);
        lp.row_ub.push_back(r.rhs);
        break;
      case milp::Relation::kGreaterEqual:
        lp.row_lb.push_back(r.rhs);
        lp.row_ub.push_back(milp::kInfinity);
        break;
      case milp::Relation::kEqual:
        lp.row_lb.push_back(r.rhs);
        lp.row_ub.push_back(r.rhs);
        break;
    }
    for (const auto& t : r.terms) {
      lp.row_col.push_back(t.var.value);
      lp.row_val.push_back(t.coef);
      ++col_count[static_cast<std::size_t>(t.var.value)];
    }
    lp.row_start.push_back(static_cast<int>(lp.row_col.size()));
  }

  lp.col_start.assign(static_cast<std::size_t>(lp.num_cols) + 1, 0);
  for (int j = 0; j < lp.num_cols; ++j) lp.col_start[j + 1] = lp.col_start[j] + col_count[j];
  lp.col_row.resize(lp.row_col.size());
  lp.col_val.resize(lp.row_col.size());
  std::vector<int> fill(lp.col_start.begin(), lp.col_start.end() - 1);
  for (int i = 0; i < lp.num_rows; ++i) {
    for (int k = lp.row_start[i]; k < lp.row_start[i + 1]; ++k) {
      const int j = lp.row_col[k];
      lp.col_row[fill[j]] = i;
      lp.col_val[fill[j]] = lp.row_val[k];
      ++fill[j];
    }
  }
  return lp;
}

}  // namespace stlcomm::solver
