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
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace stlcomm::stl {

enum class Strictness { kStrict, kNonStrict };

// mu(x) = coefficients . x + offset. Holds iff mu > 0 (strict) or mu >= 0.
struct AffinePredicate {
  std::vector<double> coefficients;
  double offset = 0.0;
  Strictness strictness = Strictness::kStrict;

  AffinePredicate() = default;
  AffinePredicate(std::vector<double> coefficients, double offset,
                  Strictness strictness);

  double evaluate(std::span<const double> state) const;
  bool holds(std::span<const double> state) const;
  // The predicate equivalent to the negation of this one.
  AffinePredicate negated() const;

  std::size_t dimension() const { return coefficients.size(); }

  bool operator==(const AffinePredicate&) const = default;
};

struct Interval {
  int lo = 0;
  int hi = 0;
  bool operator==(const Interval&) const = default;
};

enum class NodeKind {
  kTrue,
  kPredicate,
  kNegPredicate,
  kAnd,
  kOr,
  kAlways,
  kEventually,
  kUntil,
};

class Formula;

struct FormulaNode {
  NodeKind kind = NodeKind::kTrue;
  AffinePredicate predicate;  // kPredicate / kNegPredicate
  std::vector<Formula> children;
  Interval interval;          // temporal kinds only
};

// Immutable, cheaply copyable handle to a formula tree in negation normal form.
class Formula {
 public:
  static Formula truth();
  static Formula predicate(AffinePredicate p);
  static Formula negated(AffinePredicate p);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula always(Interval interval, Formula child);
  static Formula eventually(Interval interval, Formula child);
  static Formula until(Interval interval, Formula lhs, Formula rhs);

  // Like conjunction/disjunction but accept any arity: zero children gives
  // True (resp. an error for Or), one child is returned as is.
  static Formula all_of(std::vector<Formula> children);
  static Formula any_of(std::vector<Formula> children);

  NodeKind kind() const { return node_->kind; }
  const AffinePredicate& atom() const { return node_->predicate; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Interval& interval() const { return node_->interval; }
  const FormulaNode* node() const { return node_.get(); }

  // The predicate that must hold for a (possibly negated) atom to be true.
  AffinePredicate effective_predicate() const;

  // Structural equality.
  bool operator==(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node)
      : node_(std::move(node)) {}

  std::shared_ptr<const FormulaNode> node_;
};

// Number of future steps the truth value at t depends on.
int formula_horizon(const Formula& f);

// Largest predicate dimension in the tree, 0 if there are no predicates.
std::size_t formula_dimension(const Formula& f);

std::size_t node_count(const Formula& f);

// Concrete syntax accepted by parse_formula.
std::string to_string(const Formula& f);
std::string to_string(const AffinePredicate& p);

}  // namespace stlcomm::stl
