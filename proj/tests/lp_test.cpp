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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {
namespace {

using milp::LinearExpr;
using milp::MilpModel;
using milp::Relation;
using milp::Sense;
using milp::VarKind;

TEST(Lp, LowerBoundRow) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, -milp::kInfinity, milp::kInfinity});
  m.add_constraint("c", LinearExpr().add(x, 1.0), Relation::kGreaterEqual, 2.0);
  m.set_objective(LinearExpr().add(x, 1.0), Sense::kMinimize);
  const LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.assignment[x], 2.0, 1e-9);
  EXPECT_NEAR(r.objective, 2.0, 1e-9);
}

TEST(Lp, BoundActiveOptimum) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 5.0});
  m.set_objective(LinearExpr().add(x, -1.0), Sense::kMinimize);
  const LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.assignment[x], 5.0, 1e-12);
  EXPECT_NEAR(r.objective, -5.0, 1e-12);
}

TEST(Lp, MaximizeReportsModelSense) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 4.0});
  const auto y = m.add_variable({"y", VarKind::kContinuous, 0.0, 4.0});
  m.add_constraint("c", LinearExpr().add(x, 1.0).add(y, 2.0), Relation::kLessEqual, 6.0);
  m.set_objective(LinearExpr(1.0).add(x, 3.0).add(y, 2.0), Sense::kMaximize);
  const LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  // x=4, y=1 gives 12+2+1.
  EXPECT_NEAR(r.objective, 15.0, 1e-9);
}

TEST(Lp, Infeasible) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 10.0});
  const auto y = m.add_variable({"y", VarKind::kContinuous, 0.0, 10.0});
  m.add_constraint("a", LinearExpr().add(x, 1.0).add(y, 1.0), Relation::kGreaterEqual, 5.0);
  m.add_constraint("b", LinearExpr().add(x, 1.0).add(y, 1.0), Relation::kLessEqual, 4.0);
  m.set_objective(LinearExpr().add(x, 1.0), Sense::kMinimize);
  EXPECT_EQ(solve_lp(m).status, LpStatus::kInfeasible);
}

TEST(Lp, RowFeasibleOnlyAtItsBoundWithFlip) {
  // The only feasible point puts z on its upper bound and the row at equality.
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 2.0, 2.0});
  const auto z = m.add_variable({"z", VarKind::kContinuous, 0.0, 1.0});
  m.add_constraint("r", LinearExpr().add(x, -1.0).add(z, -0.3001), Relation::kLessEqual, -2.3001);
  m.set_objective(LinearExpr(), Sense::kMinimize);
  const LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.assignment[z], 1.0, 1e-8);
}

TEST(Lp, InfeasibleByBoundsAlone) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 1.0});
  m.add_constraint("a", LinearExpr().add(x, 1.0), Relation::kGreaterEqual, 3.0);
  EXPECT_EQ(solve_lp(m).status, LpStatus::kInfeasible);
}

TEST(Lp, Unbounded) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, milp::kInfinity});
  const auto y = m.add_variable({"y", VarKind::kContinuous, 0.0, milp::kInfinity});
  m.add_constraint("a", LinearExpr().add(x, 1.0).add(y, -1.0), Relation::kLessEqual, 1.0);
  m.set_objective(LinearExpr().add(x, -1.0), Sense::kMinimize);
  EXPECT_EQ(solve_lp(m).status, LpStatus::kUnbounded);
}

TEST(Lp, FreeVariableOffObjectiveIsNotUnbounded) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 3.0});
  m.add_variable({"free", VarKind::kContinuous, -milp::kInfinity, milp::kInfinity});
  m.set_objective(LinearExpr().add(x, 1.0), Sense::kMinimize);
  EXPECT_EQ(solve_lp(m).status, LpStatus::kOptimal);
}

TEST(Lp, EqualityRowsAndNoRows) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, -milp::kInfinity, milp::kInfinity});
  const auto y = m.add_variable({"y", VarKind::kContinuous, 0.0, 2.0});
  m.add_constraint("e", LinearExpr().add(x, 2.0).add(y, 1.0), Relation::kEqual, 3.0);
  m.set_objective(LinearExpr().add(x, 1.0), Sense::kMinimize);
  const LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.assignment[x], 0.5, 1e-12);
  EXPECT_NEAR(r.assignment[y], 2.0, 1e-12);

  MilpModel empty;
  empty.add_variable({"z", VarKind::kContinuous, -1.0, 1.0});
  empty.set_objective(LinearExpr().add(milp::VarId{0}, 2.0), Sense::kMinimize);
  EXPECT_NEAR(solve_lp(empty).objective, -2.0, 1e-12);
}

// Rows a.x <= b plus the box, every constraint as a (coefficients, rhs) pair
// in <= form. Equalities are carried separately and always active.
struct DenseLp {
  int n = 0;
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<Eigen::VectorXd> eq_rows;
  std::vector<double> eq_rhs;
  Eigen::VectorXd cost;
  Eigen::VectorXd lo, hi;
};

// Minimum over basic feasible solutions: every choice of n active
// constraints with a nonsingular system.
double enumerate_vertices(const DenseLp& lp) {
  std::vector<Eigen::VectorXd> all = lp.rows;
  std::vector<double> b = lp.rhs;
  for (int j = 0; j < lp.n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(lp.n);
    e[j] = 1.0;
    all.push_back(e);
    b.push_back(lp.hi[j]);
    all.push_back(-e);
    b.push_back(-lp.lo[j]);
  }
  const int free_count = lp.n - static_cast<int>(lp.eq_rows.size());
  const int total = static_cast<int>(all.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(free_count));
  for (int i = 0; i < free_count; ++i) pick[i] = i;
  Eigen::MatrixXd a(lp.n, lp.n);
  Eigen::VectorXd r(lp.n);
  while (true) {
    int row = 0;
    for (std::size_t e = 0; e < lp.eq_rows.size(); ++e, ++row) {
      a.row(row) = lp.eq_rows[e].transpose();
      r[row] = lp.eq_rhs[e];
    }
    for (int i : pick) {
      a.row(row) = all[i].transpose();
      r[row] = b[i];
      ++row;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(r);
      bool ok = true;
      for (int i = 0; i < total && ok; ++i) ok = all[i].dot(x) <= b[i] + 1e-9;
      for (std::size_t e = 0; e < lp.eq_rows.size() && ok; ++e) {
        ok = std::abs(lp.eq_rows[e].dot(x) - lp.eq_rhs[e]) <= 1e-9;
      }
      if (ok) best = std::min(best, lp.cost.dot(x));
    }
    int k = free_count - 1;
    while (k >= 0 && pick[k] == total - free_count + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int i = k + 1; i < free_count; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

DenseLp random_dense_lp(std::mt19937& rng, int n, int m, int equalities) {
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseLp lp;
  lp.n = n;
  lp.cost = Eigen::VectorXd::NullaryExpr(n, [&] { return coef(rng); });
  lp.lo = Eigen::VectorXd::NullaryExpr(n, [&] { return -2.0 * unit(rng); });
  lp.hi = Eigen::VectorXd::NullaryExpr(n, [&] { return 1.0 + 2.0 * unit(rng); });
  // Interior point keeps every instance feasible.
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0[j] = lp.lo[j] + (lp.hi[j] - lp.lo[j]) * (0.25 + 0.5 * unit(rng));
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(n, [&] { return coef(rng); });
    lp.rows.push_back(a);
    lp.rhs.push_back(a.dot(x0) + unit(rng));
  }
  for (int e = 0; e < equalities; ++e) {
    Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(n, [&] { return coef(rng); });
    lp.eq_rows.push_back(a);
    lp.eq_rhs.push_back(a.dot(x0));
  }
  return lp;
}

MilpModel to_model(const DenseLp& lp, std::mt19937& rng) {
  MilpModel m;
  std::vector<milp::VarId> x;
  for (int j = 0; j < lp.n; ++j) {
    x.push_back(m.add_variable({"x" + std::to_string(j), VarKind::kContinuous, lp.lo[j], lp.hi[j]}));
  }
  std::bernoulli_distribution flip(0.5);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    LinearExpr e;
    // Half the rows are stated as >= with negated coefficients.
    const bool ge = flip(rng);
    for (int j = 0; j < lp.n; ++j) e.add(x[j], ge ? -lp.rows[i][j] : lp.rows[i][j]);
    m.add_constraint("r" + std::to_string(i), e, ge ? Relation::kGreaterEqual : Relation::kLessEqual,
                     ge ? -lp.rhs[i] : lp.rhs[i]);
  }
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
    LinearExpr e;
    for (int j = 0; j < lp.n; ++j) e.add(x[j], lp.eq_rows[i][j]);
    m.add_constraint("e" + std::to_string(i), e, Relation::kEqual, lp.eq_rhs[i]);
  }
  LinearExpr obj;
  for (int j = 0; j < lp.n; ++j) obj.add(x[j], lp.cost[j]);
  m.set_objective(obj, Sense::kMinimize);
  return m;
}

TEST(LpOracle, Dense8x8MatchesVertexEnumeration) {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 6; ++trial) {
    const DenseLp lp = random_dense_lp(rng, 8, 8, 0);
    const MilpModel m = to_model(lp, rng);
    const LpResult r = solve_lp(m);
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, enumerate_vertices(lp), 1e-7) << "trial " << trial;
    EXPECT_TRUE(milp::check_solution(m, r.assignment, 1e-7).feasible());
  }
}

TEST(LpOracle, SmallMixedShapesMatchVertexEnumeration) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> rows(0, 7);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = dim(rng);
    const int eq = std::uniform_int_distribution<int>(0, std::min(2, n - 1))(rng);
    const DenseLp lp = random_dense_lp(rng, n, rows(rng), eq);
    const MilpModel m = to_model(lp, rng);
    const LpResult r = solve_lp(m);
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, enumerate_vertices(lp), 1e-7) << "trial " << trial;
    EXPECT_TRUE(milp::check_solution(m, r.assignment, 1e-7).feasible()) << "trial " << trial;
  }
}

TEST(DualSimplexWarmStart, BoundChangesMatchColdSolves) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const DenseLp dense = random_dense_lp(rng, 6, 6, 1);
    const MilpModel m = to_model(dense, rng);
    const LpProblem lp = LpProblem::from_model(m);
    DualSimplex warm(lp);
    ASSERT_EQ(warm.solve(), LpStatus::kOptimal);
    std::vector<double> lb = lp.col_lb;
    std::vector<double> ub = lp.col_ub;
    std::uniform_int_distribution<int> col(0, lp.num_cols - 1);
    for (int step = 0; step < 6; ++step) {
      const int j = col(rng);
      const double mid = 0.5 * (lb[j] + ub[j]);
      if (step % 2 == 0) {
        ub[j] = mid;
      } else {
        lb[j] = mid;
      }
      warm.set_bounds(lb, ub);
      DualSimplex cold(lp);
      cold.set_bounds(lb, ub);
      const LpStatus ws = warm.solve();
      const LpStatus cs = cold.solve();
      ASSERT_EQ(ws, cs) << "trial " << trial << " step " << step;
      if (ws != LpStatus::kOptimal) break;
      EXPECT_NEAR(warm.objective(), cold.objective(), 1e-8);
      EXPECT_LE(warm.max_primal_infeasibility(), 1e-8);
      EXPECT_LE(warm.max_dual_infeasibility(), 1e-8);
    }
  }
}

TEST(DualSimplexCertificate, ReducedCostsMatchDuals) {
  std::mt19937 rng(3);
  const DenseLp dense = random_dense_lp(rng, 5, 7, 1);
  const MilpModel m = to_model(dense, rng);
  const LpProblem lp = LpProblem::from_model(m);
  DualSimplex s(lp);
  ASSERT_EQ(s.solve(), LpStatus::kOptimal);
  const auto y = s.duals();
  const auto d = s.reduced_costs();
  const auto x = s.primal();
  for (int j = 0; j < lp.num_cols; ++j) {
    double col = lp.cost[j];
    for (int e = lp.col_start[j]; e < lp.col_start[j + 1]; ++e) col -= lp.col_val[e] * y[lp.col_row[e]];
    if (x[j] > lp.col_lb[j] + 1e-9 && x[j] < lp.col_ub[j] - 1e-9) EXPECT_NEAR(col, 0.0, 1e-8);
    if (d[j] != 0.0) EXPECT_NEAR(col, d[j], 1e-8);
  }
}

}  // namespace
}  // namespace stlcomm::solver
