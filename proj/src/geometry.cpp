// Copyright 2026 The Omniforce Authors
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

#include "omniforce/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omniforce {
namespace {

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  const Vec2 e = (b - a).normalized();
  return Vec2(e.y(), -e.x());  // vertices are counter-clockwise
}

Vec2 closest_on_segment(const Vec2& point, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((point - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return a + t * ab;
}

}  // namespace

std::array<Vec2, 3> triangle_vertices(const Vec3& pose, const RobotParams& p) {
  const double circumradius = p.side_length / std::sqrt(3.0);
  std::array<Vec2, 3> v;
  for (int i = 0; i < 3; ++i) {
    const double a = pose.z() + p.placement[i];
    v[i] = pose.head<2>() + circumradius * Vec2(std::cos(a), std::sin(a));
  }
  return v;
}

Vec2 wheel_center(const Vec3& pose, int wheel, const RobotParams& p) {
  const double a = pose.z() + p.placement[wheel];
  return pose.head<2>() + p.wheel_distance * Vec2(std::cos(a), std::sin(a));
}

std::optional<Interval> clip_line_triangle(const Vec2& origin, const Vec2& dir,
                                           const std::array<Vec2, 3>& tri) {
  double enter = -std::numeric_limits<double>::infinity();
  double exit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec2& a = tri[i];
    const Vec2 n = outward_normal(a, tri[(i + 1) % 3]);
    const double offset = n.dot(origin - a);
    const double rate = n.dot(dir);
    if (rate == 0.0) {
      if (offset > 0.0) return std::nullopt;
      continue;
    }
    const double t = -offset / rate;
    if (rate < 0.0) {
      enter = std::max(enter, t);
    } else {
      exit = std::min(exit, t);
    }
  }
  const double tol = 1e-12 * (1.0 + std::abs(enter));
  if (enter > exit + tol) return std::nullopt;
  return Interval{enter, std::max(enter, exit)};
}

std::optional<Interval> clip_line_disc(const Vec2& origin, const Vec2& dir,
                                       const Vec2& center, double radius) {
  const Vec2 d = origin - center;
  const double a = dir.squaredNorm();
  const double b = d.dot(dir);
  const double c = d.squaredNorm() - radius * radius;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  return Interval{(-b - root) / a, (-b + root) / a};
}

double triangle_signed_distance(const Vec2& point,
                                const std::array<Vec2, 3>& tri) {
  double best = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (int i = 0; i < 3; ++i) {
    const Vec2& a = tri[i];
    const Vec2& b = tri[(i + 1) % 3];
    if (outward_normal(a, b).dot(point - a) > 0.0) inside = false;
    best = std::min(best, (point - closest_on_segment(point, a, b)).norm());
  }
  return inside ? -best : best;
}

Vec2 closest_on_triangle(const Vec2& point, const std::array<Vec2, 3>& tri) {
  Vec2 best = tri[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Vec2 c = closest_on_segment(point, tri[i], tri[(i + 1) % 3]);
    const double d = (point - c).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

bool inside_body(const Vec2& point, const Vec3& pose, const RobotParams& p) {
  if (triangle_signed_distance(point, triangle_vertices(pose, p)) <= 0.0) {
    return true;
  }
  for (int i = 0; i < 3; ++i) {
    if ((point - wheel_center(pose, i, p)).norm() <= p.wheel_radius) return true;
  }
  return false;
}

std::optional<BoundaryHit> first_entry(const Vec2& origin, const Vec2& dir,
                                       const Vec3& pose, const RobotParams& p) {
  std::optional<BoundaryHit> best;
  if (auto in = clip_line_triangle(origin, dir, triangle_vertices(pose, p))) {
    best = BoundaryHit{origin + in->enter * dir, in->enter, -1};
  }
  for (int i = 0; i < 3; ++i) {
    auto in = clip_line_disc(origin, dir, wheel_center(pose, i, p),
                             p.wheel_radius);
    if (in && (!best || in->enter < best->param)) {
      best = BoundaryHit{origin + in->enter * dir, in->enter, i};
    }
  }
  return best;
}

}  // namespace omniforce
