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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stlcomm/channel/gp.hpp"
#include "stlcomm/planner/planner.hpp"
#include "stlcomm/stl/monitor.hpp"

namespace stlcomm::cli {

// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

// Columns t,px,py,vx,vy,ux,uy; the inputs are blank on the last row.
void write_trajectory_csv(std::ostream& out, const planner::AgentPlan& agent, double dt);
// Reads the state columns of a trajectory CSV, one row per step.
std::vector<std::array<double, 4>> read_trajectory_csv(std::istream& in, const std::string& source);
// Concatenates per-agent trajectories into the stacked signal.
stl::Signal stack_trajectories(const std::vector<std::vector<std::array<double, 4>>>& agents, double dt);

nlohmann::json costs_json(const planner::PlanResult& plan);
nlohmann::json verification_json(const planner::PlanResult& plan);

// Overhead view: workspace, partitions, obstacles with their buffer, goals
// and trajectories.
std::string plan_svg(const planner::Scenario& s, const planner::PlanResult& plan);
// Heatmap of the gain matrix, partitions on both axes.
std::string gain_svg(const channel::GainMatrix& gain);
void write_gain_csv(std::ostream& out, const channel::GainMatrix& gain);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Writes agentK.csv, agentK.stl, costs.json, verify.json and plan.svg.
void write_plan_artifacts(const std::filesystem::path& dir, const planner::Scenario& s,
                          const planner::PlanResult& plan);

}  // namespace stlcomm::cli
