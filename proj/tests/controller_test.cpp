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

#include <gtest/gtest.h>

#include "omniforce/controller.hpp"
#include "omniforce/errors.hpp"
#include "omniforce/estimator.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {
namespace {

TEST(Escape, ApproachesForceOverDamping) {
  AdmittanceParams a{2.0, 1.6, 0.5};
  Wrench f;
  f.force = Vec2(3.0, -4.0);
  const Vec3 x0(1.0, 2.0, 0.3);
  const Vec3 far = escape_trajectory(200.0, f, a, x0);
  EXPECT_NEAR((far.head<2>() - x0.head<2>()).norm(), 5.0 / 1.6, 1e-12);
  EXPECT_DOUBLE_EQ(far.z(), x0.z());
  // One time constant: 1 - 1/e of the final displacement.
  const Vec3 tc = escape_trajectory(a.mass / a.damping, f, a, x0);
  EXPECT_NEAR((tc.head<2>() - x0.head<2>()).norm(), 5.0 / 1.6 * (1.0 - std::exp(-1.0)),
              1e-12);
  EXPECT_LT((escape_trajectory(0.0, f, a, x0) - x0).norm(), 1e-15);
  EXPECT_LT((escape_velocity(0.0, f, a).head<2>() - f.force / a.mass).norm(), 1e-15);
}

TEST(Escape, ThresholdPushStopsAtStandoff) {
  const double b = design_damping(0.8, 0.5);
  EXPECT_DOUBLE_EQ(b, 1.6);
  AdmittanceParams a{2.0, b, 0.5};
  Wrench f;
  f.force = Vec2(0.0, 0.8);
  EXPECT_NEAR(escape_trajectory(1e3, f, a, Vec3::Zero()).norm(), 0.5, 1e-12);
  EXPECT_THROW(design_damping(0.8, 0.0), ConfigError);
}

TEST(Integrator, TrapezoidExactForLinearRates) {
  JointTrajectoryIntegrator in;
  in.reset(Vec3(1.0, 0.0, -1.0), Vec3::Zero());
  const double dt = 1e-3;
  for (int k = 1; k <= 1000; ++k) in.step(Vec3::Constant(2.0 * k * dt), dt);
  // Integral of 2t over one second.
  EXPECT_NEAR(in.angles()[0], 2.0, 1e-12);
  EXPECT_NEAR(in.angles()[2], 0.0, 1e-12);
}

TEST(JointSpace, BodyVelocityMapsThroughWheelJacobian) {
  const RobotParams p;
  JointTrajectoryIntegrator in;
  in.reset(Vec3::Zero(), Vec3::Zero());
  const Vec3 v(0.1, -0.2, 0.3);
  const JointTarget t = to_joint_space(v, 0.7, p, in, 1e-3);
  EXPECT_LT((t.rate - wheel_jacobian(0.7, p) * v).norm(), 1e-12);
}

TEST(NominalTrajectory, ArcKeepsSpeedAndTurnRate) {
  NominalTrajectory arc;
  arc.kind = TrajectoryKind::Arc;
  arc.speed = 0.16;
  arc.radius = 0.75;
  const double h = 1e-5;
  for (double t : {0.0, 3.0, 12.0}) {
    const Vec3 v = arc.velocity(t);
    EXPECT_NEAR(v.head<2>().norm(), 0.16, 1e-12);
    const Vec3 dv = (arc.velocity(t + h) - arc.velocity(t - h)) / (2.0 * h);
    // Centripetal acceleration v^2 / r.
    EXPECT_NEAR(dv.head<2>().norm(), 0.16 * 0.16 / 0.75, 1e-8);
  }
  arc.clockwise = true;
  const Vec3 a = arc.velocity(1.0);
  EXPECT_LT(std::atan2(a.y(), a.x()), 0.0);
  NominalTrajectory hold;
  EXPECT_EQ(hold.velocity(5.0), Vec3::Zero());
}

class SupervisorTest : public ::testing::Test {
 protected:
  AdmittanceParams admittance{2.0, 1.6, 0.5};
  SupervisorParams params;
  CollisionDetector detector{DetectorParams{0.8, 0.005}, 1e-3};
};

TEST_F(SupervisorTest, EscapesThenResumesAfterQuietPeriod) {
  Supervisor sup(admittance, params);
  const double dt = 1e-3;
  const Vec3 wrench(2.0, 0.0, 0.0);
  double t = 0.0;
  bool entered = false, resumed = false;
  for (int k = 0; k < 20; ++k, t += dt) {
    detector.update(2.0, t);
    entered |= sup.update(t, Vec3::Zero(), wrench, detector).entered;
  }
  ASSERT_TRUE(entered);
  EXPECT_EQ(sup.mode(), Mode::Escaping);
  EXPECT_DOUBLE_EQ(sup.trigger_force().force.x(), 2.0);
  const double switched = sup.switch_time();
  for (int k = 0; k < 8000 && !resumed; ++k, t += dt) {
    detector.update(0.0, t);
    resumed = sup.update(t, Vec3::Zero(), Vec3::Zero(), detector).resumed;
  }
  ASSERT_TRUE(resumed);
  EXPECT_EQ(sup.mode(), Mode::Tracking);
  EXPECT_GE(t - switched, sup.escape_duration());
  EXPECT_DOUBLE_EQ(sup.escape_duration(), 5.0 * 2.0 / 1.6);
}

TEST_F(SupervisorTest, RepushAfterHoldoffRestartsEscape) {
  Supervisor sup(admittance, params);
  const double dt = 1e-3;
  double t = 0.0;
  for (int k = 0; k < 10; ++k, t += dt) {
    detector.update(2.0, t);
    sup.update(t, Vec3::Zero(), Vec3(2.0, 0.0, 0.0), detector);
  }
  ASSERT_EQ(sup.mode(), Mode::Escaping);
  // Quiet past the holdoff (M/B) so the detector re-arms.
  for (int k = 0; k < 1500; ++k, t += dt) {
    detector.update(0.0, t);
    sup.update(t, Vec3(0.1, 0.0, 0.0), Vec3::Zero(), detector);
  }
  bool restarted = false;
  for (int k = 0; k < 20 && !restarted; ++k, t += dt) {
    detector.update(3.0, t);
    restarted = sup.update(t, Vec3(0.2, 0.0, 0.0), Vec3(0.0, 3.0, 0.0), detector).restarted;
  }
  ASSERT_TRUE(restarted);
  EXPECT_DOUBLE_EQ(sup.start_pose().x(), 0.2);
  EXPECT_DOUBLE_EQ(sup.trigger_force().force.y(), 3.0);
}

TEST_F(SupervisorTest, NoRestartInsideHoldoff) {
  Supervisor sup(admittance, params);
  const double dt = 1e-3;
  double t = 0.0;
  bool restarted = false;
  for (int k = 0; k < 1000; ++k, t += dt) {
    detector.update(2.0, t);
    restarted |= sup.update(t, Vec3::Zero(), Vec3(2.0, 0.0, 0.0), detector).restarted;
  }
  EXPECT_FALSE(restarted);
  EXPECT_EQ(sup.mode(), Mode::Escaping);
}

}  // namespace
}  // namespace omniforce
