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

#include <array>
#include <optional>
#include <vector>

namespace stlcomm {

using Vec2 = std::array<double, 2>;

// Half-plane a.p + b <= 0.
struct Face {
  Vec2 a{};
  double b = 0.0;
};

// Intersection of half-planes {p : a_j.p + b_j <= 0}.
struct Polytope {
  std::vector<Face> faces;

  bool contains(const Vec2& p, double tol = 0.0) const;

  // Moves every face outward by `margin` (in the face normal's direction).
  Polytope inflated(double margin) const;

  // Axis-aligned rectangle [x0,x1] x [y0,y1].
  static Polytope box(double x0, double x1, double y0, double y1);
};

// Vertices of polytope clipped to the rectangle, counter-clockwise. Empty if
// the intersection is empty or degenerate.
std::vector<Vec2> clip_to_box(const Polytope& poly, double x0, double x1, double y0,
                              double y1);

}  // namespace stlcomm

namespace stlcomm {

// Uniform N x N partition of [x_min, x_min + N d] x [y_min, y_min + N d].
// Cells are numbered 1..N^2 with r = (a - 1) N + b, where a is the column
// along x and b the row along y, both 1-based.
struct Grid {
  int N = 1;
  double d = 1.0;
  double x_min = 0.0;
  double y_min = 0.0;

  int cell_count() const { return N * N; }
  double x_max() const { return x_min + N * d; }
  double y_max() const { return y_min + N * d; }
  int index(int a, int b) const { return (a - 1) * N + b; }
  Vec2 center(int r) const {
    const int a = (r - 1) / N + 1;
    const int b = (r - 1) % N + 1;
    return {x_min + (a - 0.5) * d, y_min + (b - 0.5) * d};
  }
  bool contains(const Vec2& p, double tol = 0.0) const {
    return p[0] >= x_min - tol && p[0] <= x_max() + tol && p[1] >= y_min - tol &&
           p[1] <= y_max() + tol;
  }
  // 1-based column/row holding coordinate v along an axis starting at lo.
  int axis_cell(double v, double lo) const;
  // Cell containing p. Points on a shared edge belong to several cells; the
  // hint is returned whenever it is one of them.
  int cell_of(const Vec2& p, int hint = 0, double tol = 1e-6) const;

  void validate() const;
};

}  // namespace stlcomm
