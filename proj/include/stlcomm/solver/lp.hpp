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
#include <memory>
#include <vector>

#include "stlcomm/milp/model.hpp"

namespace stlcomm::solver {

// Column-and-row compressed copy of a model's LP relaxation, always in
// minimization form. Row i reads row_lb[i] <= a_i . x <= row_ub[i].
struct LpProblem {
  int num_cols = 0;
  int num_rows = 0;
  std::vector<double> cost;
  std::vector<double> col_lb;
  std::vector<double> col_ub;
  std::vector<double> row_lb;
  std::vector<double> row_ub;
  std::vector<bool> integer;
  std::vector<int> priority;

  // CSC
  std::vector<int> col_start;
  std::vector<int> col_row;
  std::vector<double> col_val;
  // CSR
  std::vector<int> row_start;
  std::vector<int> row_col;
  std::vector<double> row_val;

  double objective_offset = 0.0;  // constant term, minimization sense
  bool maximize = false;          // true if costs were negated

  static LpProblem from_model(const milp::MilpModel& model);

  // Objective in the original model's sense.
  double model_objective(double lp_objective) const {
    return maximize ? -lp_objective : lp_objective;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kTimeLimit };

struct LpOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Infinite bounds are replaced by this box; a solution resting on it is
  // reported unbounded.
  double artificial_bound = 1e7;
  int refactor_interval = 100;
  int stall_threshold = 200;  // degenerate steps before switching to Bland's rule
  std::int64_t iteration_limit = 5'000'000;
  double time_limit = 1e30;   // seconds
};

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFixed };

// Bounded dual simplex over the problem with logical variables s = A x
// bounded by the row bounds. Keeps its basis between solves so that changing
// column bounds and solving again warm-starts.
class DualSimplex {
 public:
  DualSimplex(const LpProblem& lp, const LpOptions& options = {});
  ~DualSimplex();
  DualSimplex(const DualSimplex&) = delete;
  DualSimplex& operator=(const DualSimplex&) = delete;

  // Structural bounds used by the next solve().
  void set_bounds(const std::vector<double>& lb, const std::vector<double>& ub);
  void reset_basis();

  LpStatus solve();

  // Values of the structural columns.
  std::vector<double> primal() const;
  // Row duals y and structural reduced costs d = c - A^T y.
  std::vector<double> duals() const;
  std::vector<double> reduced_costs() const;
  double objective() const;  // minimization sense, including the offset
  std::int64_t iterations() const;
  std::int64_t total_iterations() const;

  // Worst violation of the optimality conditions at the last solution:
  // primal bound/row violation and wrong-signed reduced cost.
  double max_primal_infeasibility() const;
  double max_dual_infeasibility() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  milp::Assignment assignment;
  double objective = 0.0;  // model sense
  std::int64_t iterations = 0;
};

// Solves the LP relaxation of `model` (integrality dropped). Throws
// NumericalError if the factorization breaks down irrecoverably.
LpResult solve_lp(const milp::MilpModel& model, const LpOptions& options = {});

}  // namespace stlcomm::solver
