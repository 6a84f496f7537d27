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

#pragma once

#include <array>
#include <optional>

#include "omniforce/types.hpp"

namespace omniforce {

/// Body outline: an equilateral triangle whose vertices point along the
/// wheel directions, plus one disc per wheel (radius r_w, centered at R).

std::array<Vec2, 3> triangle_vertices(const Vec3& pose, const RobotParams& p);

Vec2 wheel_center(const Vec3& pose, int wheel, const RobotParams& p);

/// Parameter interval [enter, exit] along origin + t * dir.
struct Interval {
  double enter = 0.0;
  double exit = 0.0;
};

std::optional<Interval> clip_line_triangle(const Vec2& origin, const Vec2& dir,
                                           const std::array<Vec2, 3>& tri);

std::optional<Interval> clip_line_disc(const Vec2& origin, const Vec2& dir,
                                       const Vec2& center, double radius);

/// Signed distance to the triangle boundary, negative inside.
double triangle_signed_distance(const Vec2& point,
                                const std::array<Vec2, 3>& tri);

Vec2 closest_on_triangle(const Vec2& point, const std::array<Vec2, 3>& tri);

bool inside_body(const Vec2& point, const Vec3& pose, const RobotParams& p);

struct BoundaryHit {
  Vec2 point = Vec2::Zero();
  double param = 0.0;
  int wheel = -1;  // -1 when the triangle is entered first
};

/// First point where origin + t * dir enters the body outline.
std::optional<BoundaryHit> first_entry(const Vec2& origin, const Vec2& dir,
                                       const Vec3& pose, const RobotParams& p);

}  // namespace omniforce
