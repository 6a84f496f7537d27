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

#include <Eigen/LU>

#include "omniforce/errors.hpp"
#include "omniforce/kinematics.hpp"
#include "oracles.hpp"

namespace omniforce {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(NormalizeAngle, StaysInHalfOpenInterval) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double a = u(rng);
    const double w = normalize_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2.0 * kPi), 0.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
}

TEST(WheelJacobian, MatchesRollingDirectionConstruction) {
  const RobotParams p;
  for (double theta : {-2.5, -0.3, 0.0, 0.7, 3.0}) {
    EXPECT_LT((wheel_jacobian(theta, p) - oracle::wheel_map(theta, p)).norm(), 1e-12);
    EXPECT_LT((roller_jacobian(theta, p) - oracle::roller_map(theta, p)).norm(), 1e-12);
  }
}

TEST(WheelJacobian, PureRotationSpinsAllWheelsEqually) {
  const RobotParams p;
  const Vec3 rates = wheel_jacobian(0.4, p) * Vec3(0.0, 0.0, 1.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(rates[i], p.wheel_distance / p.wheel_radius, 1e-12);
  }
  // Rollers carry no load in pure rotation.
  EXPECT_LT((roller_jacobian(0.4, p) * Vec3(0.0, 0.0, 1.0)).norm(), 1e-12);
}

TEST(Invert3, AgreesWithLuAndRejectsSingular) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i) = u(rng);
    m += 2.0 * Mat3::Identity();
    EXPECT_LT((invert3(m) - m.fullPivLu().inverse()).norm(), 1e-10);
  }
  Mat3 singular = Mat3::Ones();
  EXPECT_THROW(invert3(singular), SingularMatrixError);
  Mat3 nearly = Mat3::Identity();
  nearly(2, 2) = 1e-14;
  EXPECT_THROW(invert3(nearly), SingularMatrixError);
}

TEST(JacobianRates, MatchFiniteDifferences) {
  const RobotParams p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double theta = kPi * u(rng);
    const double w = 3.0 * u(rng);
    const JacobianRates d = jacobian_time_derivative(theta, w, p);
    const Mat3 fd_w = w * oracle::heading_derivative(&wheel_jacobian, theta, p);
    const Mat3 fd_r = w * oracle::heading_derivative(&roller_jacobian, theta, p);
    EXPECT_LT((d.wheel - fd_w).norm(), 1e-7 * (1.0 + fd_w.norm()));
    EXPECT_LT((d.roller - fd_r).norm(), 1e-7 * (1.0 + fd_r.norm()));
  }
}

TEST(BodyAccel, InvertsConstrainedWheelState) {
  const RobotParams p;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    BaseState b;
    b.pose = Vec3(u(rng), u(rng), kPi * u(rng));
    b.velocity = Vec3(u(rng), u(rng), 2.0 * u(rng));
    b.acceleration = Vec3(u(rng), u(rng), 2.0 * u(rng));
    const WheelState w = constrained_wheel_state(b, {}, p);
    const Vec3 a = body_accel_from_wheels(w.wheel_rate, w.wheel_accel,
                                          b.pose.z(), b.velocity.z(), p);
    EXPECT_LT((a - b.acceleration).norm(), 1e-10);
    EXPECT_LT((wheel_jacobian_inverse(b.pose.z(), p) * w.wheel_rate - b.velocity).norm(),
              1e-12);
  }
}

TEST(RobotParams, ValidateNamesTheField) {
  RobotParams p;
  p.wheel_radius = 0.0;
  try {
    p.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "robot.wheel_radius");
  }
  RobotParams q;
  q.placement[1] = 2.0;
  EXPECT_THROW(q.validate(), ConfigError);
  EXPECT_NO_THROW(RobotParams{}.validate());
}

}  // namespace
}  // namespace omniforce
