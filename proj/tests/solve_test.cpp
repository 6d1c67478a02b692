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

#include <filesystem>

#include "milp_oracle.hpp"
#include "stlcomm/error.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::solver {
namespace {

using milp::LinearExpr;
using milp::MilpModel;
using milp::Relation;
using milp::Sense;
using milp::VarKind;

std::string cbc_path() {
#ifdef STLCOMM_CBC_EXECUTABLE
  const std::string p = STLCOMM_CBC_EXECUTABLE;
  if (!p.empty() && std::filesystem::exists(p)) return p;
#endif
  return {};
}

SolveOptions cbc_options() {
  SolveOptions o;
  o.mode = SolveMode::kExternal;
  o.external_command = cbc_command(cbc_path());
  return o;
}

TEST(BranchAndBound, KnapsackToy) {
  MilpModel m;
  const auto z1 = m.add_variable({"z1", VarKind::kBinary});
  const auto z2 = m.add_variable({"z2", VarKind::kBinary});
  m.add_constraint("c", LinearExpr().add(z1, 1.0).add(z2, 1.0), Relation::kLessEqual, 1.0);
  m.set_objective(LinearExpr().add(z1, -1.0).add(z2, -1.0), Sense::kMinimize);
  const SolveResult r = solve_bb(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, -1.0);
  ASSERT_TRUE(r.assignment);
  EXPECT_DOUBLE_EQ((*r.assignment)[z1] + (*r.assignment)[z2], 1.0);
}

TEST(BranchAndBound, PureLpMatchesLpSolver) {
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    const auto rm = testing::random_milp(seed, 0, 8, 6);
    const LpResult lp = solve_lp(rm.model);
    const SolveResult bb = solve_bb(rm.model);
    ASSERT_EQ(lp.status, LpStatus::kOptimal);
    ASSERT_EQ(bb.status, SolveStatus::kOptimal);
    EXPECT_EQ(bb.nodes, 1);
    EXPECT_NEAR(bb.objective, lp.objective, 1e-9);
  }
}

TEST(BranchAndBound, InfeasibleIntegrality) {
  MilpModel m;
  const auto z1 = m.add_variable({"z1", VarKind::kBinary});
  const auto z2 = m.add_variable({"z2", VarKind::kBinary});
  m.add_constraint("half", LinearExpr().add(z1, 2.0).add(z2, 2.0), Relation::kEqual, 3.0);
  for (bool propagate : {true, false}) {
    SolveOptions o;
    o.propagate = propagate;
    const SolveResult r = solve_bb(m, o);
    EXPECT_EQ(r.status, SolveStatus::kInfeasible);
    EXPECT_FALSE(r.assignment);
  }
}

TEST(BranchAndBound, GeneralIntegerAndMaximize) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kInteger, 0.0, 10.0});
  const auto y = m.add_variable({"y", VarKind::kInteger, 0.0, 10.0});
  m.add_constraint("a", LinearExpr().add(x, 2.0).add(y, 2.0), Relation::kLessEqual, 7.0);
  m.add_constraint("b", LinearExpr().add(x, 1.0).add(y, -1.0), Relation::kLessEqual, 0.5);
  m.set_objective(LinearExpr().add(x, 3.0).add(y, 2.0), Sense::kMaximize);
  const SolveResult r = solve_bb(m);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  // x + y <= 3 with x <= y: best is x=1, y=2.
  EXPECT_DOUBLE_EQ(r.objective, 7.0);
  EXPECT_GE(r.bound, r.objective - 1e-9);
}

TEST(BranchAndBound, NodeLimitReturnsIncumbentWithLimitStatus) {
  const auto rm = testing::random_milp(77, 14, 10, 12);
  SolveOptions o;
  o.node_limit = 1;
  o.propagate = false;
  const SolveResult r = solve_bb(rm.model, o);
  EXPECT_TRUE(r.status == SolveStatus::kLimit || r.status == SolveStatus::kOptimal);
  if (r.assignment) EXPECT_TRUE(milp::check_solution(rm.model, *r.assignment).feasible());
}

TEST(BranchAndBound, RejectsBadOptions) {
  MilpModel m;
  SolveOptions o;
  o.relative_gap = 0.0;
  EXPECT_THROW(solve_bb(m, o), ValidationError);
  o = {};
  o.node_limit = 0;
  EXPECT_THROW(solve_bb(m, o), ValidationError);
}

struct OracleCase {
  std::uint32_t seed;
  int binaries;
  int continuous;
  int rows;
};

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> out;
  std::mt19937 rng(5150);
  for (std::uint32_t i = 0; i < 20; ++i) {
    const int b = i < 4 ? 15 : std::uniform_int_distribution<int>(2, 12)(rng);
    const int c = std::uniform_int_distribution<int>(0, 30)(rng);
    const int r = std::uniform_int_distribution<int>(3, 20)(rng);
    out.push_back({1000 + i, b, c, r});
  }
  return out;
}

TEST(BranchAndBoundOracle, MatchesBinaryEnumeration) {
  for (const auto& c : oracle_cases()) {
    const auto rm = testing::random_milp(c.seed, c.binaries, c.continuous, c.rows);
    const double expected = testing::enumerate_binaries(rm);
    for (auto [sel, branching] : {std::pair{NodeSelection::kBestBound, Branching::kPseudoCost},
                                  std::pair{NodeSelection::kBestBound, Branching::kMostFractional},
                                  std::pair{NodeSelection::kDepthFirst, Branching::kFirstFractional},
                                  std::pair{NodeSelection::kDepthFirst, Branching::kPseudoCost}}) {
      SolveOptions o;
      o.node_selection = sel;
      o.branching = branching;
      const SolveResult r = solve_bb(rm.model, o);
      ASSERT_EQ(r.status, SolveStatus::kOptimal) << "seed " << c.seed;
      EXPECT_NEAR(r.objective, expected, 1e-6) << "seed " << c.seed;
      ASSERT_TRUE(r.assignment);
      EXPECT_TRUE(milp::check_solution(rm.model, *r.assignment).feasible());
      EXPECT_LE(std::abs(r.objective - r.bound), 1e-6 * std::max(1.0, std::abs(r.objective)))
          << "seed " << c.seed;
    }
  }
}

TEST(BranchAndBoundProperties, BoundHistoryIsMonotone) {
  for (std::uint32_t seed = 200; seed < 215; ++seed) {
    const auto rm = testing::random_milp(seed, 12, 10, 14);
    for (auto sel : {NodeSelection::kBestBound, NodeSelection::kDepthFirst}) {
      SolveOptions o;
      o.node_selection = sel;
      const SolveResult r = solve_bb(rm.model, o);
      for (std::size_t k = 1; k < r.bound_history.size(); ++k) {
        ASSERT_GE(r.bound_history[k], r.bound_history[k - 1] - 1e-9) << "seed " << seed << " node " << k;
      }
    }
  }
}

TEST(BranchAndBoundProperties, DeterministicAcrossRuns) {
  for (std::uint32_t seed = 300; seed < 306; ++seed) {
    const auto rm = testing::random_milp(seed, 13, 12, 15);
    const SolveResult a = solve_bb(rm.model);
    const SolveResult b = solve_bb(rm.model);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.bound_history, b.bound_history);
  }
}

TEST(BranchAndBoundProperties, RelaxationNeverWorse) {
  for (std::uint32_t seed = 400; seed < 420; ++seed) {
    const auto rm = testing::random_milp(seed, 8, 6, 9);
    const SolveResult milp = solve_bb(rm.model);
    const LpResult relax = solve_lp(rm.model);
    if (milp.status != SolveStatus::kOptimal) continue;
    ASSERT_EQ(relax.status, LpStatus::kOptimal);
    if (rm.model.objective().sense == Sense::kMinimize) {
      EXPECT_LE(relax.objective, milp.objective + 1e-9);
    } else {
      EXPECT_GE(relax.objective, milp.objective - 1e-9);
    }
  }
}

TEST(SolutionText, NameValueLinesAndComments) {
  const auto s = parse_solution_text("# produced by hand\n# status optimal\nx 1.5\n\ny -2e-3\n");
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_EQ(s.values[1].first, "y");
  EXPECT_DOUBLE_EQ(s.values[1].second, -2e-3);
  EXPECT_EQ(parse_solution_text("# status infeasible\n").status, SolveStatus::kInfeasible);
  EXPECT_THROW(parse_solution_text("x one\n"), ExternalSolverError);
  EXPECT_THROW(parse_solution_text("# status maybe\n"), ExternalSolverError);
}

TEST(SolutionText, CbcFormat) {
  const auto s = parse_solution_text(
      "Optimal - objective value -1.00000000\n"
      "      0 z1                     1                      -1\n"
      "**    1 z2                     0                      -1\n");
  EXPECT_EQ(s.status, SolveStatus::kOptimal);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_EQ(s.values[0].first, "z1");
  EXPECT_EQ(parse_solution_text("Infeasible - objective value 0\n").status, SolveStatus::kInfeasible);
  EXPECT_EQ(parse_solution_text("Integer infeasible - objective value 0\n").status,
            SolveStatus::kInfeasible);
}

TEST(External, MissingCommandIsProcessFailure) {
  MilpModel m;
  m.add_variable({"x", VarKind::kContinuous, 0.0, 1.0});
  SolveOptions o;
  o.mode = SolveMode::kExternal;
  o.external_command = "stlcomm-no-such-solver {mps} {sol}";
  EXPECT_THROW(solve(m, o), ExternalSolverError);
  o.external_command = "false";
  EXPECT_THROW(solve(m, o), ExternalSolverError);
}

TEST(External, ScriptedSolverAndInconsistentSolution) {
  MilpModel m;
  const auto x = m.add_variable({"x", VarKind::kContinuous, 0.0, 4.0});
  m.set_objective(LinearExpr().add(x, -1.0), Sense::kMinimize);
  SolveOptions o;
  o.mode = SolveMode::kExternal;
  o.external_command = "printf '# status optimal\\nx 4\\n' > {sol}";
  const SolveResult r = solve(m, o);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, -4.0);
  o.external_command = "printf 'x 9\\n' > {sol}";
  EXPECT_THROW(solve(m, o), ExternalSolverError);
  o.external_command = "printf '# status infeasible\\n' > {sol}";
  const SolveResult inf = solve(m, o);
  EXPECT_EQ(inf.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(inf.assignment);
}

TEST(External, CbcAgreesWithBranchAndBound) {
  if (cbc_path().empty()) GTEST_SKIP() << "no CBC executable available";
  for (std::uint32_t seed = 600; seed < 606; ++seed) {
    const auto rm = testing::random_milp(seed, 10, 0, 8);  // 10-variable models
    const SolveResult ours = solve_bb(rm.model);
    const SolveResult theirs = solve(rm.model, cbc_options());
    ASSERT_EQ(theirs.status, ours.status) << "seed " << seed;
    EXPECT_NEAR(theirs.objective, ours.objective, 1e-6) << "seed " << seed;
  }
}

TEST(External, CbcReportsInfeasible) {
  if (cbc_path().empty()) GTEST_SKIP() << "no CBC executable available";
  MilpModel m;
  const auto z1 = m.add_variable({"z1", VarKind::kBinary});
  const auto z2 = m.add_variable({"z2", VarKind::kBinary});
  m.add_constraint("half", LinearExpr().add(z1, 2.0).add(z2, 2.0), Relation::kEqual, 3.0);
  const SolveResult r = solve(m, cbc_options());
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(r.assignment);
}

}  // namespace
}  // namespace stlcomm::solver
