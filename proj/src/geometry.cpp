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

#include "stlcomm/geometry.hpp"

#include <cmath>

namespace stlcomm {

bool Polytope::contains(const Vec2& p, double tol) const {
  for (const auto& f : faces) {
    if (f.a[0] * p[0] + f.a[1] * p[1] + f.b > tol) return false;
  }
  return true;
}

Polytope Polytope::inflated(double margin) const {
  Polytope out = *this;
  for (auto& f : out.faces) f.b -= margin * std::hypot(f.a[0], f.a[1]);
  return out;
}

Polytope Polytope::box(double x0, double x1, double y0, double y1) {
  return Polytope{{{{-1.0, 0.0}, x0}, {{1.0, 0.0}, -x1}, {{0.0, -1.0}, y0}, {{0.0, 1.0}, -y1}}};
}

std::vector<Vec2> clip_to_box(const Polytope& poly, double x0, double x1, double y0,
                              double y1) {
  // Sutherland-Hodgman against each half-plane.
  std::vector<Vec2> pts{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (const auto& f : poly.faces) {
    std::vector<Vec2> next;
    const auto value = [&](const Vec2& p) { return f.a[0] * p[0] + f.a[1] * p[1] + f.b; };
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2& cur = pts[i];
      const Vec2& nxt = pts[(i + 1) % pts.size()];
      const double vc = value(cur);
      const double vn = value(nxt);
      if (vc <= 0.0) next.push_back(cur);
      if ((vc < 0.0 && vn > 0.0) || (vc > 0.0 && vn < 0.0)) {
        const double s = vc / (vc - vn);
        next.push_back({cur[0] + s * (nxt[0] - cur[0]), cur[1] + s * (nxt[1] - cur[1])});
      }
    }
    pts = std::move(next);
    if (pts.size() < 3) return {};
  }
  return pts;
}

}  // namespace stlcomm

#include <algorithm>

#include "stlcomm/error.hpp"

namespace stlcomm {

int Grid::axis_cell(double v, double lo) const {
  const int k = static_cast<int>(std::floor((v - lo) / d)) + 1;
  return std::clamp(k, 1, N);
}

int Grid::cell_of(const Vec2& p, int hint, double tol) const {
  if (hint >= 1 && hint <= cell_count()) {
    const int a = (hint - 1) / N + 1;
    const int b = (hint - 1) % N + 1;
    const double x0 = x_min + (a - 1) * d;
    const double y0 = y_min + (b - 1) * d;
    if (p[0] >= x0 - tol && p[0] <= x0 + d + tol && p[1] >= y0 - tol && p[1] <= y0 + d + tol) {
      return hint;
    }
  }
  return index(axis_cell(p[0], x_min), axis_cell(p[1], y_min));
}

void Grid::validate() const {
  if (N < 1) throw ValidationError("grid/N", "must be at least 1");
  if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("grid/d", "must be positive");
  if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
    throw ValidationError("grid", "non-finite origin");
  }
}

}  // namespace stlcomm
