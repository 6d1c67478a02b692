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

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace stlcomm::milp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct VarId {
  int value = -1;
  bool operator==(const VarId&) const = default;
  auto operator<=>(const VarId&) const = default;
};

struct RowId {
  int value = -1;
  bool operator==(const RowId&) const = default;
};

enum class VarKind { kContinuous, kBinary, kInteger };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Sense { kMinimize, kMaximize };

struct Term {
  VarId var;
  double coef = 0.0;
};

// Sparse affine expression. Terms may repeat until normalized.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}

  LinearExpr& add(VarId v, double coef) {
    terms_.push_back({v, coef});
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
  LinearExpr& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }

  // Merges duplicate variables, drops zeros, sorts by variable id.
  LinearExpr normalized() const;

  double evaluate(const std::vector<double>& values) const;

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

struct VariableSpec {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lb = 0.0;
  double ub = kInfinity;
  // Higher priority variables are branched on first.
  int branch_priority = 0;
};

struct Variable {
  std::string name;
  VarKind kind;
  double lb;
  double ub;
  int branch_priority;

  bool is_integer() const { return kind != VarKind::kContinuous; }
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // ascending variable id, no duplicates
  Relation relation;
  double rhs;

  double activity(const std::vector<double>& values) const;
};

struct Objective {
  LinearExpr expr;  // normalized
  Sense sense = Sense::kMinimize;
};

// Variable values indexed by VarId::value.
struct Assignment {
  std::vector<double> values;

  double operator[](VarId v) const { return values[static_cast<std::size_t>(v.value)]; }
};

// Solver-agnostic MILP. Built by a single writer, then read concurrently.
class MilpModel {
 public:
  explicit MilpModel(std::string name = "model") : name_(std::move(name)) {}

  // Binary variables get bounds [0,1] regardless of the bounds requested. Throws
  // ValidationError on duplicate names or inverted bounds.
  VarId add_variable(VariableSpec spec);
  // The expression constant moves to the right-hand side.
  RowId add_constraint(std::string name, const LinearExpr& expr, Relation rel, double rhs);
  void set_objective(const LinearExpr& expr, Sense sense);

  void set_bounds(VarId v, double lb, double ub);

  const std::string& name() const { return name_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t num_constraints() const { return rows_.size(); }
  std::size_t num_integer_variables() const;
  const Variable& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(v.value)); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Constraint& constraint(RowId r) const { return rows_.at(static_cast<std::size_t>(r.value)); }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Objective& objective() const { return objective_; }

  std::optional<VarId> find_variable(const std::string& name) const;

  // Objective value in the model's own sense.
  double objective_value(const std::vector<double>& values) const {
    return objective_.expr.evaluate(values);
  }

 private:
  void check_var(VarId v) const;

  std::string name_;
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Objective objective_;
  std::unordered_map<std::string, int> var_names_;
  std::unordered_map<std::string, int> row_names_;
};

struct Violation {
  enum class Kind { kConstraint, kBound, kIntegrality };
  Kind kind;
  int index;  // row or variable id
  std::string name;
  double amount;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double objective = 0.0;
  double max_violation = 0.0;

  bool feasible() const { return violations.empty(); }
};

inline constexpr double kDefaultFeasibilityTol = 1e-6;

// Throws ValidationError if the assignment does not cover every variable.
FeasibilityReport check_solution(const MilpModel& model, const Assignment& a,
                                 double tol = kDefaultFeasibilityTol);

// Free-format MPS. Integer and binary columns are wrapped in INTORG/INTEND
// markers; a maximization objective is written negated. Output is a pure
// function of the model.
void write_mps(const MilpModel& model, std::ostream& out);

// Shortest decimal text that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace stlcomm::milp
