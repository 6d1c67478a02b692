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
#include <span>
#include <vector>

#include "stlcomm/stl/formula.hpp"

namespace stlcomm::stl {

// A finite discrete-time signal of stacked state vectors. The sample period is
// carried along for reporting; semantics are index based.
class Signal {
 public:
  Signal(std::size_t dimension, std::vector<double> samples, double sample_period = 1.0);
  explicit Signal(const std::vector<std::vector<double>>& samples, double sample_period = 1.0);

  std::size_t dimension() const { return dim_; }
  std::size_t step_count() const { return data_.size() / dim_; }
  double sample_period() const { return dt_; }
  std::span<const double> at(std::size_t k) const {
    return {data_.data() + k * dim_, dim_};
  }

 private:
  std::size_t dim_;
  std::vector<double> data_;
  double dt_;
};

// Boolean satisfaction of f by x at step t. Requires t + horizon(f) to be a
// valid sample index; throws ValidationError otherwise.
bool eval_monitor(const Formula& f, const Signal& x, std::size_t t = 0);

// Truth values of f at every step t with t + horizon(f) < step_count.
std::vector<bool> satisfaction_trace(const Formula& f, const Signal& x);

}  // namespace stlcomm::stl
