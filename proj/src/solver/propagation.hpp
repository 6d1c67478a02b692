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

#include <vector>

#include "stlcomm/solver/lp.hpp"

namespace stlcomm::solver {

// Activity-based bound tightening restricted to integer columns. Continuous
// bounds are read but never changed.
class Propagator {
 public:
  explicit Propagator(const LpProblem& lp) : lp_(lp) {}

  // Rows touching `seeds` are examined first; an empty seed list examines
  // every row. Returns false when some row cannot be satisfied.
  bool run(std::vector<double>& lb, std::vector<double>& ub, const std::vector<int>& seeds) const;

 private:
  const LpProblem& lp_;
};

}  // namespace stlcomm::solver
