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

#include <memory>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {

// Factorization of a simplex basis over [A | -I]. Columns n..n+m-1 are the
// logicals. Rows covered by a basic logical are eliminated up front, so only
// the structural block on the remaining rows goes through sparse LU. Later
// column replacements are kept as product-form etas.
class BasisFactor {
 public:
  explicit BasisFactor(const LpProblem& lp) : lp_(lp) {}

  // head[pos] is the column in basis position pos. Returns false if the
  // structural block is singular.
  bool factorize(const std::vector<int>& head);

  // B z = b. b is indexed by row, z by basis position. Works in place.
  void ftran(std::vector<double>& v) const;
  // B^T y = c. c is indexed by basis position, y by row. Works in place.
  void btran(std::vector<double>& v) const;

  // Position `pos` now holds the column whose ftran result is `column`.
  void update(int pos, const std::vector<double>& column);

  std::size_t eta_count() const { return etas_.size(); }

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // off-pivot
  };

  const LpProblem& lp_;
  int m_ = 0;
  std::vector<int> struct_pos_;        // basis position of each structural in the block
  std::vector<int> struct_col_;        // its column
  std::vector<int> free_rows_;         // rows not covered by a basic logical
  std::vector<int> logical_pos_;       // row -> position of its basic logical, or -1
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  std::vector<Eta> etas_;
};

}  // namespace stlcomm::solver
