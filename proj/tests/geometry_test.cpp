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


#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "omniforce/geometry.hpp"
#include "oracles.hpp"

namespace omniforce {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Outline, VerticesMatchSideLength) {
  const RobotParams p;
  const Vec3 pose(0.4, -1.0, 0.9);
  const auto v = triangle_vertices(pose, p);
  const auto ref = oracle::outline(pose, p);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR((v[i] - v[(i + 1) % 3]).norm(), p.side_length, 1e-12);
    EXPECT_LT((v[i] - ref[i]).norm(), 1e-12);
  }
}

TEST(ClosestPoint, AgreesWithBoundarySampling) {
  const RobotParams p;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Vec3 pose(u(rng), u(rng), kPi * u(rng));
    const Vec2 q = pose.head<2>() + Vec2(0.6 * u(rng), 0.6 * u(rng));
    const auto tri = triangle_vertices(pose, p);
    const Vec2 got = closest_on_triangle(q, tri);
    const Vec2 ref = oracle::brute_force_closest(q, pose, p);
    // Sampling spacing is side / 20000.
    EXPECT_LE((q - got).norm(), (q - ref).norm() + 1e-12);
    EXPECT_LT((got - ref).norm(), 2.0 * p.side_length / 20000.0);
    EXPECT_NEAR(std::abs(triangle_signed_distance(q, tri)), (q - got).norm(), 1e-12);
  }
}

TEST(SignedDistance, NegativeInsidePositiveOutside) {
  const RobotParams p;
  const auto tri = triangle_vertices(Vec3::Zero(), p);
  EXPECT_LT(triangle_signed_distance(Vec2::Zero(), tri), 0.0);
  EXPECT_NEAR(triangle_signed_distance(Vec2::Zero(), tri),
              -p.side_length / (2.0 * std::sqrt(3.0)), 1e-12);
  EXPECT_GT(triangle_signed_distance(Vec2(1.0, 0.0), tri), 0.0);
}

TEST(FirstEntry, AgreesWithRayMarching) {
  const RobotParams p;
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int hits = 0, wheel_hits = 0;
  for (int k = 0; k < 300; ++k) {
    const Vec3 pose(u(rng), u(rng), kPi * u(rng));
    const double a = kPi * u(rng);
    const Vec2 origin = pose.head<2>() + 0.8 * Vec2(std::cos(a), std::sin(a));
    const double b = a + kPi + 0.7 * u(rng);
    const Vec2 dir(std::cos(b), std::sin(b));
    const auto got = first_entry(origin, dir, pose, p);
    const auto ref = oracle::march_ray(origin, dir, pose, p, 2.0);
    ASSERT_EQ(got.has_value(), ref.has_value());
    if (!got) continue;
    ++hits;
    EXPECT_LT((got->point - ref->point).norm(), 1e-9);
    EXPECT_EQ(got->wheel, ref->wheel);
    if (got->wheel >= 0) ++wheel_hits;
  }
  EXPECT_GT(hits, 100);
  EXPECT_GT(wheel_hits, 10);
}

TEST(ClipLine, DiscChordAndTriangleMiss) {
  const auto in = clip_line_disc(Vec2(-2.0, 0.0), Vec2(1.0, 0.0), Vec2::Zero(), 0.5);
  ASSERT_TRUE(in);
  EXPECT_NEAR(in->enter, 1.5, 1e-12);
  EXPECT_NEAR(in->exit, 2.5, 1e-12);
  EXPECT_FALSE(clip_line_disc(Vec2(-2.0, 1.0), Vec2(1.0, 0.0), Vec2::Zero(), 0.5));
  const RobotParams p;
  const auto tri = triangle_vertices(Vec3::Zero(), p);
  EXPECT_FALSE(clip_line_triangle(Vec2(-2.0, 1.0), Vec2(1.0, 0.0), tri));
}

TEST(InsideBody, CoversWheelDiscsBeyondTheOutline) {
  const RobotParams p;
  const Vec3 pose(0.0, 0.0, 0.0);
  // Wheel 0 disc reaches past the triangle vertex on the x axis.
  const double tip = p.wheel_distance + 0.99 * p.wheel_radius;
  EXPECT_GT(tip, p.side_length / std::sqrt(3.0));
  EXPECT_TRUE(inside_body(Vec2(tip, 0.0), pose, p));
  EXPECT_FALSE(inside_body(Vec2(p.wheel_distance + 1.01 * p.wheel_radius, 0.0), pose, p));
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(inside_body(wheel_center(pose, i, p), pose, p));
  }
}

}  // namespace
}  // namespace omniforce
