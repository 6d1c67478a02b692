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

#include "stlcomm/stl/monitor.hpp"

#include <algorithm>
#include <string>

#include "stlcomm/error.hpp"

namespace stlcomm::stl {

Signal::Signal(std::size_t dimension, std::vector<double> samples, double sample_period)
    : dim_(dimension), data_(std::move(samples)), dt_(sample_period) {
  if (dim_ == 0) throw ValidationError("signal dimension must be positive");
  if (data_.empty() || data_.size() % dim_ != 0) {
    throw ValidationError("signal needs at least one complete sample");
  }
}

Signal::Signal(const std::vector<std::vector<double>>& samples, double sample_period)
    : dim_(samples.empty() ? 0 : samples.front().size()), dt_(sample_period) {
  if (samples.empty()) throw ValidationError("signal needs at least one sample");
  if (dim_ == 0) throw ValidationError("signal dimension must be positive");
  data_.reserve(samples.size() * dim_);
  for (const auto& s : samples) {
    if (s.size() != dim_) throw ValidationError("signal samples differ in dimension");
    data_.insert(data_.end(), s.begin(), s.end());
  }
}

namespace {

// Bottom-up evaluation: each node yields its truth values on the steps where
// they are defined, i.e. t in [0, steps - horizon(node)).
std::vector<char> trace(const Formula& f, const Signal& x) {
  const int steps = static_cast<int>(x.step_count());
  const int len = steps - formula_horizon(f);
  std::vector<char> out(static_cast<std::size_t>(std::max(len, 0)), 0);
  switch (f.kind()) {
    case NodeKind::kTrue:
      std::fill(out.begin(), out.end(), 1);
      break;
    case NodeKind::kPredicate:
    case NodeKind::kNegPredicate: {
      const bool negate = f.kind() == NodeKind::kNegPredicate;
      for (int t = 0; t < len; ++t) {
        out[t] = f.atom().holds(x.at(static_cast<std::size_t>(t))) != negate;
      }
      break;
    }
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      const bool is_and = f.kind() == NodeKind::kAnd;
      std::fill(out.begin(), out.end(), is_and ? 1 : 0);
      for (const auto& c : f.children()) {
        const auto sub = trace(c, x);
        for (int t = 0; t < len; ++t) {
          out[t] = is_and ? (out[t] && sub[t]) : (out[t] || sub[t]);
        }
      }
      break;
    }
    case NodeKind::kAlways:
    case NodeKind::kEventually: {
      const bool is_always = f.kind() == NodeKind::kAlways;
      const auto sub = trace(f.children()[0], x);
      const auto [a, b] = f.interval();
      // Sliding count of true samples over the window [t+a, t+b].
      int count = 0;
      for (int k = a; k <= b && k < static_cast<int>(sub.size()); ++k) count += sub[k];
      const int width = b - a + 1;
      for (int t = 0; t < len; ++t) {
        out[t] = is_always ? (count == width) : (count > 0);
        count -= sub[t + a];
        if (t + b + 1 < static_cast<int>(sub.size())) count += sub[t + b + 1];
      }
      break;
    }
    case NodeKind::kUntil: {
      const auto lhs = trace(f.children()[0], x);
      const auto rhs = trace(f.children()[1], x);
      const auto [a, b] = f.interval();
      for (int t = 0; t < len; ++t) {
        bool holds = false;
        // lhs must hold on [t, t'] inclusive.
        bool prefix = true;
        for (int tp = t; tp <= t + b && prefix; ++tp) {
          prefix = lhs[tp];
          if (prefix && tp >= t + a && rhs[tp]) {
            holds = true;
            break;
          }
        }
        out[t] = holds;
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<bool> satisfaction_trace(const Formula& f, const Signal& x) {
  const std::size_t need = formula_dimension(f);
  if (need > x.dimension()) {
    throw ValidationError("signal dimension " + std::to_string(x.dimension()) +
                          " smaller than formula dimension " + std::to_string(need));
  }
  const auto raw = trace(f, x);
  return {raw.begin(), raw.end()};
}

bool eval_monitor(const Formula& f, const Signal& x, std::size_t t) {
  const std::size_t h = static_cast<std::size_t>(formula_horizon(f));
  if (t + h >= x.step_count()) {
    throw ValidationError("signal of " + std::to_string(x.step_count()) +
                          " steps too short for horizon " + std::to_string(h) +
                          " at t=" + std::to_string(t));
  }
  return satisfaction_trace(f, x)[t];
}

}  // namespace stlcomm::stl
