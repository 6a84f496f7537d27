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

#include "omniforce/kinematics.hpp"

#include <cmath>
#include <string>

#include "omniforce/errors.hpp"

namespace omniforce {

double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  if (wrapped > std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

void RobotParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(name, "must be > 0");
  };
  positive(wheel_distance, "robot.wheel_distance");
  positive(wheel_radius, "robot.wheel_radius");
  positive(roller_radius, "robot.roller_radius");
  positive(body_mass, "robot.body_mass");
  positive(body_inertia, "robot.body_inertia");
  positive(wheel_inertia, "robot.wheel_inertia");
  positive(roller_inertia, "robot.roller_inertia");
  positive(side_length, "robot.side_length");
  if (roller_friction < 0.0) {
    throw ConfigError("robot.roller_friction", "must be >= 0");
  }
  if (friction_scale < 0.0) {
    throw ConfigError("robot.friction_scale", "must be >= 0");
  }
  const RobotParams reference;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(placement[i] - reference.placement[i]) > 1e-12) {
      throw ConfigError("robot.placement", "wheels must sit at 0, 120, 240 deg");
    }
  }
}

Mat3 wheel_jacobian(double theta, const RobotParams& p) {
  Mat3 j;
  for (int i = 0; i < 3; ++i) {
    const double a = theta + p.placement[i];
    j(i, 0) = -std::sin(a);
    j(i, 1) = std::cos(a);
    j(i, 2) = p.wheel_distance;
  }
  return j / p.wheel_radius;
}

Mat3 roller_jacobian(double theta, const RobotParams& p) {
  Mat3 j;
  for (int i = 0; i < 3; ++i) {
    const double a = theta + p.placement[i];
    j(i, 0) = std::cos(a);
    j(i, 1) = std::sin(a);
    j(i, 2) = 0.0;
  }
  return j / p.roller_radius;
}

Mat3 invert3(const Mat3& m) {
  Mat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double det =
      m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  if (det == 0.0 || !std::isfinite(det)) {
    throw SingularMatrixError("3x3 matrix is singular");
  }
  const Mat3 inv = adj / det;
  const double cond = m.norm() * inv.norm();
  if (!(cond <= 1e12)) {
    throw SingularMatrixError("3x3 matrix condition estimate " +
                              std::to_string(cond) + " exceeds 1e12");
  }
  return inv;
}

Mat3 wheel_jacobian_inverse(double theta, const RobotParams& p) {
  return invert3(wheel_jacobian(theta, p));
}

JacobianRates jacobian_time_derivative(double theta, double theta_rate,
                                       const RobotParams& p) {
  JacobianRates d;
  for (int i = 0; i < 3; ++i) {
    const double a = theta + p.placement[i];
    const double c = std::cos(a) * theta_rate;
    const double s = std::sin(a) * theta_rate;
    d.wheel(i, 0) = -c / p.wheel_radius;
    d.wheel(i, 1) = -s / p.wheel_radius;
    d.wheel(i, 2) = 0.0;
    d.roller(i, 0) = -s / p.roller_radius;
    d.roller(i, 1) = c / p.roller_radius;
    d.roller(i, 2) = 0.0;
  }
  return d;
}

Vec3 body_accel_from_wheels(const Vec3& wheel_rate, const Vec3& wheel_accel,
                            double theta, double theta_rate,
                            const RobotParams& p) {
  const Mat3 inv = wheel_jacobian_inverse(theta, p);
  const Mat3 jdot = jacobian_time_derivative(theta, theta_rate, p).wheel;
  const Mat3 inv_rate = -inv * jdot * inv;
  return inv * wheel_accel + inv_rate * wheel_rate;
}

WheelState constrained_wheel_state(const BaseState& base,
                                   const WheelState& base_angles,
                                   const RobotParams& p) {
  const double theta = base.pose.z();
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  const JacobianRates d = jacobian_time_derivative(theta, base.velocity.z(), p);
  WheelState w = base_angles;
  w.wheel_rate = jw * base.velocity;
  w.roller_rate = jr * base.velocity;
  w.wheel_accel = jw * base.acceleration + d.wheel * base.velocity;
  w.roller_accel = jr * base.acceleration + d.roller * base.velocity;
  return w;
}

}  // namespace omniforce
