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

#include <gtest/gtest.h>

#include "omniforce/errors.hpp"
#include "omniforce/geometry.hpp"
#include "omniforce/simulator.hpp"

namespace omniforce {
namespace {

TEST(Bumper, PushOnlyForce) {
  const BumperModel pu = BumperModel::preset(BumperKind::PU);
  EXPECT_EQ(bumper_force(-0.01, 1.0, pu), 0.0);
  EXPECT_EQ(bumper_force(0.001, -100.0, pu), 0.0);
  EXPECT_DOUBLE_EQ(bumper_force(0.001, 0.0, pu), pu.stiffness * 0.001);
}

TEST(Bumper, SpringHitsHardStopAtTravel) {
  const BumperModel s = BumperModel::preset(BumperKind::Spring);
  const double at_stop = bumper_force(s.travel_max, 0.0, s);
  EXPECT_DOUBLE_EQ(at_stop, s.stiffness * s.travel_max);
  EXPECT_DOUBLE_EQ(bumper_force(s.travel_max + 0.001, 0.0, s),
                   at_stop + s.rigid_stiffness * 0.001);
  EXPECT_DOUBLE_EQ(bumper_compression(2.0 * s.travel_max, s), s.travel_max);
  EXPECT_DOUBLE_EQ(bumper_compression(-1.0, s), 0.0);
}

TEST(Bumper, MagnetReleasesAtLatchForceAndReengages) {
  BumperModel m = BumperModel::preset(BumperKind::Magnet);
  ASSERT_TRUE(m.latch_engaged);
  const double d = 0.0001;
  EXPECT_DOUBLE_EQ(bumper_force(d, 0.0, m), m.rigid_stiffness * d);
  update_latch(m, d, m.latch_force - 1.0);
  EXPECT_TRUE(m.latch_engaged);
  update_latch(m, d, m.latch_force);
  EXPECT_FALSE(m.latch_engaged);
  EXPECT_DOUBLE_EQ(bumper_force(d, 0.0, m), m.stiffness * d);
  update_latch(m, 0.0, 0.0);
  EXPECT_TRUE(m.latch_engaged);
}

TEST(PushProfile, SmoothRampHoldRelease) {
  PushProfile p;
  p.start = 1.0;
  p.ramp = 0.2;
  p.hold = 0.5;
  p.magnitude = 10.0;
  EXPECT_EQ(p.force_at(0.99), 0.0);
  EXPECT_NEAR(p.force_at(1.1), 5.0, 1e-12);
  EXPECT_EQ(p.force_at(1.3), 10.0);
  EXPECT_NEAR(p.force_at(1.8), 5.0, 1e-12);
  EXPECT_EQ(p.force_at(2.0), 0.0);
  double last = 0.0;
  for (double t = 1.0; t < 1.2; t += 0.001) {
    EXPECT_GE(p.force_at(t), last);
    last = p.force_at(t);
  }
}

TEST(ResolveContact, TipInsideEdgeAndDisc) {
  const RobotParams p;
  BaseState base;
  BumperModel b = BumperModel::preset(BumperKind::PU);
  // Edge 2 (vertex 2 to vertex 0) faces +x when the heading is 60 deg.
  base.pose = Vec3(0.0, 0.0, M_PI / 3.0);
  const double apothem = p.side_length / (2.0 * std::sqrt(3.0));
  int feature = -1;
  const ContactResult c =
      resolve_contact(base, Vec2(apothem - 0.002, 0.0), Vec2(-0.5, 0.0), feature, b, p);
  ASSERT_TRUE(c.active);
  EXPECT_EQ(feature, 2);
  EXPECT_NEAR(c.depth, 0.002, 1e-12);
  EXPECT_NEAR(c.depth_rate, 0.5, 1e-12);
  EXPECT_LT((c.inward - Vec2(-1.0, 0.0)).norm(), 1e-12);
  EXPECT_NEAR(c.force, b.stiffness * 0.002 + b.damping * 0.5, 1e-9);

  int none = -1;
  const ContactResult free =
      resolve_contact(base, Vec2(1.0, 0.0), Vec2::Zero(), none, b, p);
  EXPECT_FALSE(free.active);
  EXPECT_EQ(free.force, 0.0);

  // Beyond the vertex along wheel 0 only the disc is touched.
  BaseState zero;
  int disc = -1;
  const double r = p.wheel_distance + p.wheel_radius - 0.001;
  const ContactResult w =
      resolve_contact(zero, Vec2(r, 0.0), Vec2::Zero(), disc, b, p);
  ASSERT_TRUE(w.active);
  EXPECT_EQ(disc, 3);
  EXPECT_NEAR(w.depth, 0.001, 1e-12);
}

WorldConfig quiet_world() {
  WorldConfig w;
  w.sim.duration = 0.5;
  w.drive.noise_enabled = false;
  return w;
}

TEST(Simulation, RestingRobotStaysPutAndQuiet) {
  Simulation sim(quiet_world());
  const SimTrace& t = sim.run();
  ASSERT_EQ(t.rows.size(), 501u);  // both ends included
  for (const TraceRow& r : t.rows) {
    EXPECT_LT(r.pose.head<2>().norm(), 1e-9);
    EXPECT_EQ(r.mode, 0);
  }
  EXPECT_FALSE(sim.estimator().detector().triggered());
  EXPECT_TRUE(std::isnan(sim.contact_onset()));
}

TEST(Simulation, LineTrackingFromMovingStartDoesNotTrigger) {
  WorldConfig w = quiet_world();
  w.sim.duration = 2.0;
  w.controller.trajectory.kind = TrajectoryKind::Line;
  w.controller.trajectory.speed = 0.22;
  w.initial_velocity = Vec3(0.22, 0.0, 0.0);
  Simulation sim(w);
  const SimTrace& t = sim.run();
  EXPECT_FALSE(sim.estimator().detector().triggered());
  EXPECT_NEAR(t.rows.back().pose.x(), 0.22 * t.rows.back().t, 0.01);
  EXPECT_NEAR(t.rows.back().velocity.x(), 0.22, 0.005);
}

TEST(Simulation, PushTriggersEscapeAwayFromForce) {
  WorldConfig w = quiet_world();
  w.sim.duration = 3.0;
  PushProfile push;
  push.point = Vec2(0.088, 0.1525);
  push.direction = Vec2(-0.5, -0.866);
  push.start = 0.1;
  push.ramp = 0.3;
  push.end_on_escape = true;
  w.pushes.push_back(push);
  Simulation sim(w);
  const SimTrace& t = sim.run();
  ASSERT_TRUE(sim.estimator().detector().triggered() ||
              sim.supervisor().mode() == Mode::Escaping);
  EXPECT_NEAR(sim.contact_onset(), 0.101, 0.0011);
  const Vec2 moved = t.rows.back().pose.head<2>();
  EXPECT_GT(moved.dot(Vec2(-0.5, -0.866)), 0.3);
}

TEST(Simulation, DummyImpactReachesTheBody) {
  WorldConfig w = quiet_world();
  w.sim.duration = 0.3;
  w.initial_pose = Vec3(0.0, 0.0, M_PI / 3.0);
  w.dummy.enabled = true;
  Simulation sim(w);
  const SimTrace& t = sim.run();
  double peak = 0.0;
  for (const TraceRow& r : t.rows) peak = std::max(peak, r.force_true.norm());
  EXPECT_GT(peak, 50.0);
  EXPECT_TRUE(sim.estimator().detector().triggered());
}

TEST(Simulation, RigidSensorModeRuns) {
  WorldConfig w = quiet_world();
  w.drive.actuator.sensor_mode = SensorMode::Rigid;
  PushProfile push;
  push.point = Vec2(0.088, 0.1525);
  push.direction = Vec2(-0.5, -0.866);
  w.pushes.push_back(push);
  Simulation sim(w);
  EXPECT_NO_THROW(sim.run());
  EXPECT_TRUE(sim.estimator().detector().triggered());
}

TEST(Simulation, RunawayIsReportedAsInstability) {
  WorldConfig w = quiet_world();
  w.initial_velocity = Vec3(200.0, 0.0, 0.0);
  w.drive.motors_enabled = false;
  EXPECT_THROW(Simulation(w).run(), InstabilityError);
}

TEST(WorldConfig, ValidateRejectsBadStep) {
  WorldConfig w;
  w.sim.dt = 0.0;
  EXPECT_THROW(w.validate(), ConfigError);
  WorldConfig v;
  v.sim.dt = 3e-4;  // does not divide the control period
  EXPECT_THROW(v.validate(), ConfigError);
}

}  // namespace
}  // namespace omniforce
