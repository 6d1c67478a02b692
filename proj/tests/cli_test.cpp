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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "artifacts.hpp"
#include "cli.hpp"
#include "stlcomm/planner/planner.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSmallScenario = R"({
  "schema_version": 1,
  "T_f": 4,
  "agents": [
    {"initial_state": [1.0, 1.0, 0.0, 0.0], "goal": {"box": [1.5, 3.0, 1.5, 3.0]}},
    {"initial_state": [9.0, 8.0, 0.0, 0.0], "goal": {"box": [7.0, 8.5, 6.5, 8.0]}}
  ],
  "obstacles": [{"box": [4.0, 6.0, 4.0, 6.0]}],
  "obstacle_buffer": 0.2,
  "u_max": 0.5,
  "v_max": 1.0,
  "d1": 0.5,
  "d2": 0.5,
  "q": [0.1, 0.1, 0.1, 0.1],
  "r": [1.0, 1.0],
  "alpha": 0.1,
  "grid": {"N": 2, "d": 5.0}
})";

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("stlcomm_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    write_text(dir_ / name, text);
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

json read_json(const std::string& path) { return json::parse(read_text(path)); }

TEST_F(CliTest, PlanWritesTheArtifactSet) {
  const auto scenario = write("s.json", kSmallScenario);
  const auto r = invoke({"plan", scenario, "-o", path("out")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"agent1.csv", "agent2.csv", "agent1.stl", "agent2.stl", "costs.json", "verify.json",
                        "plan.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  const json costs = read_json(path("out/costs.json"));
  EXPECT_NEAR(costs["total"].get<double>(),
              0.1 * costs["J1"].get<double>() + 0.9 * costs["J2"].get<double>(), 1e-9);
  EXPECT_EQ(costs["solver"]["status"], "optimal");
  const json verify = read_json(path("out/verify.json"));
  EXPECT_TRUE(verify["stl"][0]["satisfied"].get<bool>());
  EXPECT_TRUE(verify["stl"][1]["satisfied"].get<bool>());
  EXPECT_LE(verify["dynamics_residual"].get<double>(), 1e-6);

  std::istringstream csv(read_text(path("out/agent1.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,px,py,vx,vy,ux,uy");
  std::string last;
  int rows = 0;
  while (std::getline(csv, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 5);
  EXPECT_EQ(last.substr(0, 2), "4,");
  EXPECT_EQ(last.substr(last.size() - 2), ",,");
}

TEST_F(CliTest, PlanOutputIsByteIdenticalAcrossRuns) {
  const auto scenario = write("s.json", kSmallScenario);
  ASSERT_EQ(invoke({"plan", scenario, "-o", path("a")}).code, kExitOk);
  ASSERT_EQ(invoke({"plan", scenario, "-o", path("b")}).code, kExitOk);
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(read_text(entry.path()), read_text(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, PlannedTrajectoriesSatisfyTheirFormulas) {
  const auto scenario = write("s.json", kSmallScenario);
  ASSERT_EQ(invoke({"plan", scenario, "-o", path("out")}).code, kExitOk);
  for (const char* formula : {"out/agent1.stl", "out/agent2.stl"}) {
    const auto r = invoke({"monitor", path(formula), path("out/agent1.csv"), path("out/agent2.csv")});
    EXPECT_EQ(r.code, kExitOk) << formula << r.err;
    EXPECT_EQ(r.out, "satisfied\n");
  }
}

TEST_F(CliTest, MonitorReportsViolationAndBadInput) {
  const auto csv = write("traj.csv", "t,px,py,vx,vy,ux,uy\n0,1,2,0,0,0,0\n1,1,2,0,0,,\n");
  auto r = invoke({"monitor", write("ok.stl", "G[0,1](x0 >= 1 & x1 < 3)"), csv});
  EXPECT_EQ(r.code, kExitOk);
  r = invoke({"monitor", write("bad.stl", "F[0,1](x0 > 1)"), csv});
  EXPECT_EQ(r.code, kExitViolated);
  EXPECT_EQ(r.out, "violated\n");
  r = invoke({"monitor", write("syntax.stl", "G[0,1](x0 >"), csv});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(json::parse(r.err)["error"], "validation");
  r = invoke({"monitor", write("long.stl", "G[0,5](x0 >= 1)"), csv});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"monitor", write("dim.stl", "x4 > 0"), csv});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"monitor", path("ok.stl"), write("header.csv", "a,b\n1,2\n")});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"monitor", path("ok.stl"), path("missing.csv")});
  EXPECT_EQ(r.code, kExitIo);
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  json doc = json::parse(kSmallScenario);
  doc["alpha"] = 1.5;
  auto r = invoke({"plan", write("bad.json", doc.dump()), "-o", path("out")});
  EXPECT_EQ(r.code, kExitValidation);
  const json err = json::parse(r.err);
  EXPECT_EQ(err["error"], "validation");
  EXPECT_EQ(err["path"], "alpha");
  EXPECT_EQ(err["exit_code"], kExitValidation);

  doc = json::parse(kSmallScenario);
  doc["agents"][1]["goal"]["box"] = json::array({1.0, 2.0, 8.0, 9.0});
  r = invoke({"plan", write("infeasible.json", doc.dump()), "-o", path("out")});
  EXPECT_EQ(r.code, kExitInfeasible);
  EXPECT_NE(json::parse(r.err)["message"].get<std::string>().find("agent 2"), std::string::npos);

  r = invoke({"plan", path("absent.json"), "-o", path("out")});
  EXPECT_EQ(r.code, kExitIo);
  r = invoke({"plan", write("s.json", kSmallScenario), "-o", path("out"), "--node-limit", "1"});
  EXPECT_EQ(r.code, kExitSolverLimit);
  r = invoke({"plan", path("s.json"), "-o", path("out"), "--gap", "-1"});
  EXPECT_EQ(r.code, kExitValidation);
  r = invoke({"plan", path("s.json"), "-o", path("out"), "--solver", "external", "--solver-cmd",
              "/nonexistent/solver {mps} {sol}"});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_EQ(json::parse(r.err)["error"], "external_solver");

  EXPECT_EQ(invoke({}).code, kExitValidation);
  EXPECT_EQ(invoke({"draw", path("s.json")}).code, kExitValidation);
  EXPECT_EQ(invoke({"plan", path("s.json")}).code, kExitValidation);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, GainWritesASymmetricMatrix) {
  const auto r = invoke({"gain", write("s.json", kSmallScenario), "-o", path("g")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(read_text(path("g/gain.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "partition,1,2,3,4");
  std::vector<std::vector<double>> g;
  while (std::getline(csv, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    g.emplace_back();
    while (std::getline(cells, cell, ',')) g.back().push_back(std::stod(cell));
  }
  ASSERT_EQ(g.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    ASSERT_EQ(g[i].size(), 4u);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(g[i][j], g[j][i], 1e-10);
  }
  EXPECT_NE(read_text(path("g/gain.svg")).find("<svg"), std::string::npos);
}

TEST_F(CliTest, CompareWritesBothPlansAndTheDelta) {
  const auto r = invoke({"compare", write("s.json", kSmallScenario), "-o", path("c")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "c" / "joint" / "plan.svg"));
  EXPECT_TRUE(fs::exists(dir_ / "c" / "motion_only" / "agent2.csv"));
  const json report = read_json(path("c/comparison.json"));
  EXPECT_LE(report["J2_joint"].get<double>(), report["J2_motion_only"].get<double>() + 1e-6);
}

#ifdef STLCOMM_CBC_EXECUTABLE
// Solves the exported model outside the planner and checks the trajectories
// read back from the solution file against each agent's formula.
TEST_F(CliTest, ExportedModelSolvesToASatisfyingPlan) {
  const auto scenario = write("s.json", kSmallScenario);
  const auto r = invoke({"export", scenario, "-o", path("model.mps")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string cmd = solver::cbc_command(STLCOMM_CBC_EXECUTABLE);
  std::string shell = cmd;
  shell.replace(shell.find("{mps}"), 5, "'" + path("model.mps") + "'");
  shell.replace(shell.find("{sol}"), 5, "'" + path("model.sol") + "'");
  ASSERT_EQ(std::system((shell + " > /dev/null 2>&1").c_str()), 0);
  const auto solution = solver::parse_solution_text(read_text(path("model.sol")));
  ASSERT_EQ(solution.status, solver::SolveStatus::kOptimal);
  std::map<std::string, double> values(solution.values.begin(), solution.values.end());

  const auto s = planner::load_scenario(kSmallScenario);
  std::vector<std::string> csvs;
  for (std::size_t a = 0; a < s.agent_count(); ++a) {
    planner::AgentPlan plan;
    for (int t = 0; t <= s.horizon; ++t) {
      planner::State x{};
      for (int k = 0; k < 4; ++k) {
        x[static_cast<std::size_t>(k)] =
            values["x_" + std::to_string(a) + "_" + std::to_string(t) + "_" + std::to_string(k)];
      }
      plan.states.push_back(x);
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, plan, s.dt);
    csvs.push_back(write("agent" + std::to_string(a + 1) + ".csv", csv.str()));
  }
  for (std::size_t a = 0; a < s.agent_count(); ++a) {
    const auto formula = write("phi" + std::to_string(a + 1) + ".stl", stl::to_string(s.agent_formula(a)));
    const auto m = invoke({"monitor", formula, csvs[0], csvs[1]});
    EXPECT_EQ(m.code, kExitOk) << m.out << m.err;
  }
}
#endif

}  // namespace
}  // namespace stlcomm::cli
