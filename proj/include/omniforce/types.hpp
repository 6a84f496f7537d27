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
#include <numbers>

#include <Eigen/Core>

namespace omniforce {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Geometry, inertia and roller friction of the three-omniwheel base.
///
/// Wheels sit at distance `wheel_distance` from the body center along the
/// directions theta + placement[i]. The planar body outline is an
/// equilateral triangle whose vertices point along the wheel directions.
struct RobotParams {
  double wheel_distance = 0.3;   // m, body center to wheel center
  double wheel_radius = 0.1;     // m
  double roller_radius = 0.02;   // m, passive side roller
  std::array<double, 3> placement{0.0, 2.0 * std::numbers::pi / 3.0,
                                  4.0 * std::numbers::pi / 3.0};  // rad
  double body_mass = 60.0;       // kg
  double body_inertia = 2.7;     // kg m^2, about the vertical axis
  double wheel_inertia = 0.02;   // kg m^2
  double roller_inertia = 1e-4;  // kg m^2
  double roller_friction = 0.2;  // N m, Coulomb magnitude of the roller model
  double friction_scale = 0.4;   // s/rad, tanh argument scale
  double side_length = 0.61;     // m, edge of the triangular outline

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Cartesian pose (x, y, theta) and its derivatives in the world frame.
/// theta is kept unwrapped; use normalize_angle() at API boundaries.
struct BaseState {
  Vec3 pose = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
};

struct WheelState {
  Vec3 wheel_angle = Vec3::Zero();
  Vec3 roller_angle = Vec3::Zero();
  Vec3 wheel_rate = Vec3::Zero();
  Vec3 roller_rate = Vec3::Zero();
  Vec3 wheel_accel = Vec3::Zero();
  Vec3 roller_accel = Vec3::Zero();
};

/// q = (x, y, theta, q_w, q_r) with derivatives.
struct GeneralizedState {
  BaseState base;
  WheelState wheels;
};

/// Planar wrench applied to the body: world-frame force and a free torque.
struct Wrench {
  Vec2 force = Vec2::Zero();
  double torque = 0.0;
};

/// Wraps an angle to (-pi, pi].
double normalize_angle(double angle);

}  // namespace omniforce
