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
#include <vector>

#include <gtest/gtest.h>

#include "omniforce/actuator.hpp"
#include "omniforce/errors.hpp"

namespace omniforce {
namespace {

TEST(Stiction, HoldsBelowBreakawayAndSlipsAbove) {
  const StictionResult held = coulomb_stiction(0.0, 1.0, 1.5, 1e-3);
  EXPECT_TRUE(held.stuck);
  EXPECT_DOUBLE_EQ(held.torque, -1.0);
  const StictionResult slip = coulomb_stiction(0.0, 2.0, 1.5, 1e-3);
  EXPECT_FALSE(slip.stuck);
  EXPECT_DOUBLE_EQ(slip.torque, -1.5);
  const StictionResult moving = coulomb_stiction(-0.5, 3.0, 1.5, 1e-3);
  EXPECT_FALSE(moving.stuck);
  EXPECT_DOUBLE_EQ(moving.torque, 1.5);
}

TEST(PdServo, ClampsToTorqueLimit) {
  const PDGains g{200.0, 4.0};
  EXPECT_DOUBLE_EQ(pd_servo(0.1, 0.0, 0.0, 0.0, g, 40.0), 20.0);
  EXPECT_DOUBLE_EQ(pd_servo(1.0, 0.0, 0.0, 0.0, g, 40.0), 40.0);
  EXPECT_DOUBLE_EQ(pd_servo(-1.0, 0.0, 0.0, 0.0, g, 40.0), -40.0);
  EXPECT_DOUBLE_EQ(pd_servo(0.0, 1.0, 0.0, 0.5, g, 40.0), 2.0);
}

TEST(SingleActuator, RigidLinkSharesInertia) {
  ActuatorParams p;
  p.sensor_mode = SensorMode::Rigid;
  p.motor_damping = 0.0;
  const double load = 0.02;
  SingleActuator a(p, load);
  a.set_stiction_enabled(false);
  const double tau = 2.0;
  for (int k = 0; k < 100; ++k) a.step(1e-4, tau, 0.0);
  const double accel = tau / (p.rotor_inertia + load);
  EXPECT_NEAR(a.load_accel(), accel, 1e-12);
  EXPECT_NEAR(a.load_rate(), accel * 100 * 1e-4, 1e-12);
  // The sensor sees what accelerates the load.
  EXPECT_NEAR(a.sensed_torque(), load * accel, 1e-12);
}

TEST(SingleActuator, StictionHoldsRotorAgainstSmallCommand) {
  ActuatorParams p;
  SingleActuator a(p, 0.02);
  for (int k = 0; k < 1000; ++k) a.step(1e-4, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(a.motor_rate(), 0.0);
  EXPECT_DOUBLE_EQ(a.motor_angle(), 0.0);
  SingleActuator b(p, 0.02);
  for (int k = 0; k < 1000; ++k) b.step(1e-4, 3.0, 0.0);
  EXPECT_GT(b.motor_rate(), 0.0);
}

TEST(SingleActuator, SpringSettlesToEnvironmentTorque) {
  // Locked rotor (large stiction), constant torque on the load side.
  ActuatorParams p;
  p.stiction_torque = 100.0;
  p.load_damping = 0.5;
  SingleActuator a(p, 0.02);
  for (int k = 0; k < 200000; ++k) a.step(1e-5, 0.0, 3.0);
  EXPECT_NEAR(a.sensed_torque(), -3.0, 1e-6);
  EXPECT_NEAR(a.load_angle() - a.motor_angle(), 3.0 / p.sensor_stiffness, 1e-9);
}

TEST(ExternalTorque, RecoversEnvironmentTorqueOnRigidLink) {
  ActuatorParams p;
  p.sensor_mode = SensorMode::Rigid;
  p.load_damping = 0.1;
  const double load = 0.02;
  SingleActuator a(p, load);
  a.set_stiction_enabled(false);
  for (int k = 0; k < 2000; ++k) {
    // Damping acts on the rate at the start of the explicit step.
    const double rate = a.load_rate();
    a.step(1e-4, 1.0, -0.7);
    const double est = external_torque_estimate_1dof(
        a.sensed_torque(), a.load_accel(), rate, 0.0, load, p);
    ASSERT_NEAR(est, -0.7, 1e-9);
  }
}

TEST(SensorNoise, SeededAndCentered) {
  SensorNoise a(0.02, 7), b(0.02, 7);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double x = a.sample();
    EXPECT_EQ(x, b.sample());
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 5e-4);
  EXPECT_NEAR(std::sqrt(sq / n), 0.02, 5e-4);
  SensorNoise silent(0.0, 7);
  EXPECT_EQ(silent.sample(), 0.0);
}

TEST(ActuatorParams, ValidateNamesTheField) {
  ActuatorParams p;
  p.sensor_stiffness = -1.0;
  try {
    p.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "actuator.sensor_stiffness");
  }
  PDGains g;
  g.kp = -1.0;
  EXPECT_THROW(g.validate(), ConfigError);
}

}  // namespace
}  // namespace omniforce
