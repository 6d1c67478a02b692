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

#include <chrono>
#include <cmath>
#include <ostream>
#include <limits>
#include <map>
#include <set>

#include "propagation.hpp"
#include "stlcomm/error.hpp"
#include "stlcomm/solver/solve.hpp"

namespace stlcomm::solver {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoundChange {
  int col;
  double lb;
  double ub;
};

struct Node {
  double bound;
  std::vector<BoundChange> changes;  // branching decisions from the root
  // Last branching, for pseudo-cost updates.
  int branch_col = -1;
  bool branch_up = false;
  double branch_dist = 0.0;  // distance the branching moved the column
};

// Running mean of objective change per unit of column movement.
struct PseudoCost {
  double sum = 0.0;
  int count = 0;
  double mean(double fallback) const { return count > 0 ? sum / count : fallback; }
};

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class BranchAndBound {
 public:
  BranchAndBound(const milp::MilpModel& model, const SolveOptions& options)
      : model_(model),
        opt_(options),
        lp_(LpProblem::from_model(model)),
        propagator_(lp_),
        engine_(lp_, lp_options(options)) {}

  SolveResult run();

 private:
  static LpOptions lp_options(const SolveOptions& o) {
    LpOptions lp = o.lp;
    lp.time_limit = std::min(lp.time_limit, o.time_limit);
    return lp;
  }

  double cutoff() const {
    if (!incumbent_) return kInf;
    return incumbent_value_ - opt_.relative_gap * std::max(1.0, std::abs(incumbent_value_));
  }

  double min_sense(double model_value) const { return lp_.maximize ? -model_value : model_value; }

  int select_branch(const std::vector<double>& x) const;
  void try_incumbent(const std::vector<double>& x, const std::vector<double>& lb,
                     const std::vector<double>& ub);
  bool accept(std::vector<double> values);
  double global_bound() const {
    double b = std::min(pruned_min_, incumbent_ ? incumbent_value_ : kInf);
    if (!open_order_.empty()) b = std::min(b, open_order_.begin()->first);
    return b;
  }

  const milp::MilpModel& model_;
  SolveOptions opt_;
  LpProblem lp_;
  Propagator propagator_;
  DualSimplex engine_;

  std::map<std::int64_t, Node> open_;
  std::set<std::pair<double, std::int64_t>> open_order_;
  std::optional<std::vector<double>> incumbent_;
  double incumbent_value_ = kInf;  // minimization sense
  double pruned_min_ = kInf;

  std::vector<PseudoCost> pc_down_;
  std::vector<PseudoCost> pc_up_;
  PseudoCost pc_down_all_;
  PseudoCost pc_up_all_;
  void record_pseudo_cost(const Node& node, double objective);
};

void BranchAndBound::record_pseudo_cost(const Node& node, double objective) {
  if (node.branch_col < 0 || node.branch_dist <= 0.0 || !std::isfinite(node.bound)) return;
  const double gain = std::max(0.0, objective - node.bound) / node.branch_dist;
  auto& pc = node.branch_up ? pc_up_[static_cast<std::size_t>(node.branch_col)]
                            : pc_down_[static_cast<std::size_t>(node.branch_col)];
  auto& all = node.branch_up ? pc_up_all_ : pc_down_all_;
  pc.sum += gain;
  ++pc.count;
  all.sum += gain;
  ++all.count;
}

int BranchAndBound::select_branch(const std::vector<double>& x) const {
  int best = -1;
  int best_priority = std::numeric_limits<int>::min();
  double best_score = -1.0;
  const double down_all = pc_down_all_.mean(1.0);
  const double up_all = pc_up_all_.mean(1.0);
  for (int j = 0; j < lp_.num_cols; ++j) {
    if (!lp_.integer[j]) continue;
    const double f = x[j] - std::floor(x[j]);
    const double dist = std::min(f, 1.0 - f);
    if (dist <= opt_.feasibility_tol) continue;
    const int pr = lp_.priority[j];
    if (pr < best_priority) continue;
    double score = dist;
    if (opt_.branching == Branching::kPseudoCost) {
      const auto js = static_cast<std::size_t>(j);
      const double down = f * pc_down_[js].mean(down_all);
      const double up = (1.0 - f) * pc_up_[js].mean(up_all);
      score = std::max(down, 1e-6) * std::max(up, 1e-6);
    }
    if (pr > best_priority) {
      best_priority = pr;
      best = j;
      best_score = score;
      continue;
    }
    if (opt_.branching != Branching::kFirstFractional && score > best_score) {
      best = j;
      best_score = score;
    }
  }
  return best;
}

bool BranchAndBound::accept(std::vector<double> values) {
  milp::Assignment a{std::move(values)};
  const milp::FeasibilityReport rep = milp::check_solution(model_, a, opt_.feasibility_tol);
  if (!rep.feasible()) return false;
  const double v = min_sense(rep.objective);
  if (v < incumbent_value_) {
    incumbent_value_ = v;
    incumbent_ = std::move(a.values);
  }
  return true;
}

// Integral LP point: fix the integers at their rounded values and re-solve
// for the continuous part so the stored incumbent is exactly integral.
void BranchAndBound::try_incumbent(const std::vector<double>& x, const std::vector<double>& lb,
                                   const std::vector<double>& ub) {
  std::vector<double> flb = lb;
  std::vector<double> fub = ub;
  std::vector<double> rounded = x;
  for (int j = 0; j < lp_.num_cols; ++j) {
    if (!lp_.integer[j]) continue;
    const double v = std::clamp(std::round(x[j]), lb[j], ub[j]);
    flb[j] = fub[j] = rounded[j] = v;
  }
  engine_.set_bounds(flb, fub);
  if (engine_.solve() == LpStatus::kOptimal) {
    std::vector<double> y = engine_.primal();
    for (int j = 0; j < lp_.num_cols; ++j) {
      if (lp_.integer[j]) y[j] = rounded[j];
    }
    if (accept(std::move(y))) return;
  }
  accept(std::move(rounded));
}

SolveResult BranchAndBound::run() {
  const auto start = Clock::now();
  SolveResult res;
  auto finish = [&](SolveStatus status) {
    res.status = status;
    res.wall_time = elapsed(start);
    res.lp_iterations = engine_.total_iterations();
    if (incumbent_) {
      res.assignment = milp::Assignment{*incumbent_};
      res.objective = model_.objective_value(*incumbent_);
    }
    const double b = global_bound();
    res.bound = lp_.maximize ? -b : b;
    return res;
  };

  pc_down_.assign(static_cast<std::size_t>(lp_.num_cols), {});
  pc_up_.assign(static_cast<std::size_t>(lp_.num_cols), {});
  std::vector<double> root_lb = lp_.col_lb;
  std::vector<double> root_ub = lp_.col_ub;
  for (int j = 0; j < lp_.num_cols; ++j) {
    if (root_lb[j] > root_ub[j]) return finish(SolveStatus::kInfeasible);
  }
  const bool has_integers = std::find(lp_.integer.begin(), lp_.integer.end(), true) != lp_.integer.end();
  if (opt_.propagate && has_integers && !propagator_.run(root_lb, root_ub, {})) {
    return finish(SolveStatus::kInfeasible);
  }

  std::int64_t next_id = 0;
  auto push = [&](Node node) {
    const std::int64_t id = next_id++;
    open_order_.insert({node.bound, id});
    open_.emplace(id, std::move(node));
  };
  push({-kInf, {}});

  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<int> seeds;
  std::optional<std::int64_t> plunge;
  double next_log = opt_.log_interval;
  while (!open_.empty()) {
    const double now = elapsed(start);
    if (res.nodes >= opt_.node_limit || now > opt_.time_limit) return finish(SolveStatus::kLimit);
    if (opt_.log && now >= next_log) {
      next_log = now + opt_.log_interval;
      const double b = global_bound();
      *opt_.log << "nodes " << res.nodes << " open " << open_.size() << " incumbent "
                << (incumbent_ ? model_.objective_value(*incumbent_) : kInf) << " bound "
                << (lp_.maximize ? -b : b) << " time " << now << "\n";
      opt_.log->flush();
    }

    std::int64_t id;
    if (plunge && open_.count(*plunge)) {
      id = *plunge;
    } else if (opt_.node_selection == NodeSelection::kBestBound && incumbent_) {
      id = open_order_.begin()->second;
    } else {
      id = open_.rbegin()->first;
    }
    plunge.reset();
    Node node = std::move(open_.at(id));
    open_.erase(id);
    open_order_.erase({node.bound, id});

    auto record = [&] { res.bound_history.push_back(global_bound()); };
    if (node.bound >= cutoff()) {
      pruned_min_ = std::min(pruned_min_, node.bound);
      record();
      continue;
    }

    lb = root_lb;
    ub = root_ub;
    seeds.clear();
    for (const auto& c : node.changes) {
      lb[c.col] = std::max(lb[c.col], c.lb);
      ub[c.col] = std::min(ub[c.col], c.ub);
      seeds.push_back(c.col);
    }
    ++res.nodes;
    if (opt_.propagate && !seeds.empty() && !propagator_.run(lb, ub, seeds)) {
      record();
      continue;
    }

    engine_.set_bounds(lb, ub);
    const LpStatus st = engine_.solve();
    if (st == LpStatus::kInfeasible) {
      record();
      continue;
    }
    if (st == LpStatus::kUnbounded) return finish(SolveStatus::kUnbounded);
    if (st != LpStatus::kOptimal) return finish(SolveStatus::kLimit);
    record_pseudo_cost(node, engine_.objective());

    const double node_bound = std::max(engine_.objective(), node.bound);
    if (node_bound >= cutoff()) {
      pruned_min_ = std::min(pruned_min_, node_bound);
      record();
      continue;
    }
    const std::vector<double> x = engine_.primal();
    const int j = select_branch(x);
    if (j < 0) {
      try_incumbent(x, lb, ub);
      if (!incumbent_ || incumbent_value_ > node_bound) {
        // Rounding failed the tolerance check; nothing more to learn here.
        pruned_min_ = std::min(pruned_min_, node_bound);
      }
      record();
      continue;
    }

    const double down = std::floor(x[j]);
    const bool prefer_up = x[j] - down >= 0.5;
    Node down_node{node_bound, node.changes, j, false, x[j] - down};
    down_node.changes.push_back({j, lb[j], down});
    Node up_node{node_bound, std::move(node.changes), j, true, down + 1.0 - x[j]};
    up_node.changes.push_back({j, down + 1.0, ub[j]});
    // The child created last is explored first under depth-first selection.
    if (prefer_up) {
      push(std::move(down_node));
      push(std::move(up_node));
    } else {
      push(std::move(up_node));
      push(std::move(down_node));
    }
    // Until an incumbent exists the search is depth-first; afterwards it
    // keeps diving while the dive stays in the better half of the gap.
    if (opt_.node_selection == NodeSelection::kBestBound && incumbent_) {
      const double best_open = open_order_.begin()->first;
      if (node_bound <= best_open + 0.5 * (incumbent_value_ - best_open)) {
        plunge = next_id - 1;
      }
    }
    record();
  }
  return finish(incumbent_ ? SolveStatus::kOptimal : SolveStatus::kInfeasible);
}

}  // namespace

void SolveOptions::validate() const {
  if (!(relative_gap > 0.0)) throw ValidationError("solver/gap", "must be positive");
  if (!(feasibility_tol > 0.0)) throw ValidationError("solver/feasibility_tol", "must be positive");
  if (node_limit <= 0) throw ValidationError("solver/node_limit", "must be positive");
  if (!(time_limit > 0.0)) throw ValidationError("solver/time_limit", "must be positive");
  if (mode == SolveMode::kExternal && external_command.empty()) {
    throw ValidationError("solver/command", "external mode needs a command template");
  }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasibleGap: return "feasible-gap";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
  }
  return "unknown";
}

SolveResult solve_bb(const milp::MilpModel& model, const SolveOptions& options) {
  options.validate();
  return BranchAndBound(model, options).run();
}

SolveResult solve(const milp::MilpModel& model, const SolveOptions& options) {
  return options.mode == SolveMode::kExternal ? solve_external(model, options)
                                              : solve_bb(model, options);
}

}  // namespace stlcomm::solver
