// Copyright 2026 the fduav authors
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

#include <cmath>
#include <cstddef>
#include <vector>

namespace fduav {

/// Planar position/displacement in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr Vec2 operator/(double k) const { return {x / k, y / k}; }
  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  constexpr double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

constexpr Vec2 operator*(double k, const Vec2& v) { return v * k; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Waypoint sequence q[0..N]; slot n in 1..N flies q[n-1] -> q[n].
using Trajectory = std::vector<Vec2>;

/// Uniform straight line with n_slots segments from a to b.
inline Trajectory straight_line_trajectory(const Vec2& a, const Vec2& b, int n_slots) {
  Trajectory q(static_cast<std::size_t>(n_slots) + 1);
  for (int n = 0; n <= n_slots; ++n) {
    const double t = static_cast<double>(n) / static_cast<double>(n_slots);
    q[static_cast<std::size_t>(n)] = a + (b - a) * t;
  }
  q.back() = b;
  return q;
}

/// Largest per-slot displacement along q.
inline double max_slot_displacement(const Trajectory& q) {
  double best = 0.0;
  for (std::size_t n = 1; n < q.size(); ++n) best = std::max(best, distance(q[n], q[n - 1]));
  return best;
}

}  // namespace fduav
