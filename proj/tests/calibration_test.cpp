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
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "omniforce/calibration.hpp"
#include "omniforce/errors.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {

void PrintTo(CalibrationTrajectory v, std::ostream* os) {
  *os << (v == CalibrationTrajectory::ArcW0 ? "ArcW0" : "PivotW2");
}

namespace {

TEST(CalibrationTrajectory, DrivenWheelsOnly) {
  const WheelSample arc = calibration_sample(CalibrationTrajectory::ArcW0, 0.2, 1.3);
  EXPECT_NE(arc.angle[0], 0.0);
  EXPECT_EQ(arc.angle[1], 0.0);
  EXPECT_EQ(arc.angle[2], 0.0);
  const WheelSample pivot = calibration_sample(CalibrationTrajectory::PivotW2, 0.2, 1.3);
  EXPECT_EQ(pivot.angle[0], pivot.angle[1]);
  EXPECT_EQ(pivot.angle[2], 0.0);
  // Starts at rest, peaks at twice the 1.5 rad amplitude after half a period.
  const WheelSample start = calibration_sample(CalibrationTrajectory::ArcW0, 0.2, 0.0);
  EXPECT_EQ(start.angle[0], 0.0);
  EXPECT_EQ(start.rate[0], 0.0);
  EXPECT_NEAR(calibration_sample(CalibrationTrajectory::ArcW0, 0.2, 2.5).angle[0], 3.0,
              1e-12);
}

TEST(CalibrationTrajectory, SampleCount) {
  const auto traj =
      generate_calibration_trajectory(CalibrationTrajectory::ArcW0, 0.2, 10.0, 1e-3);
  EXPECT_EQ(traj.size(), 10001u);
  EXPECT_DOUBLE_EQ(traj.back().t, 10.0);
}

TEST(StateFromWheels, ConsistentWithJacobian) {
  const RobotParams p;
  const WheelSample s = calibration_sample(CalibrationTrajectory::PivotW2, 0.2, 1.7);
  const GeneralizedState st = state_from_wheels(s, 0.0, p);
  EXPECT_LT((wheel_jacobian(st.base.pose.z(), p) * st.base.velocity - s.rate).norm(), 1e-12);
  EXPECT_LT((roller_jacobian(st.base.pose.z(), p) * st.base.velocity -
             st.wheels.roller_rate).norm(), 1e-12);
}

class FitRecovery : public ::testing::TestWithParam<CalibrationTrajectory> {};

TEST_P(FitRecovery, ExactOnModelTorques) {
  RobotParams truth;
  truth.roller_friction = 0.2;
  truth.friction_scale = 0.4;
  const auto traj = generate_calibration_trajectory(GetParam(), 0.2, 10.0, 1e-3);
  const std::vector<Vec3> measured = predict_torques(traj, truth);
  FitOptions opt;
  const FitResult fit = fit_roller_friction(measured, traj, truth, 0.2, opt);
  EXPECT_NEAR(fit.roller_friction, 0.2, 1e-6);
  EXPECT_NEAR(fit.friction_scale, 0.4, 1e-4);
  EXPECT_LT(fit.rms, 1e-8);
  EXPECT_LE(fit.rms, fit.grid_rms);
  EXPECT_NEAR(calibration_rms(measured, traj, truth, 0.2, 0.2, 0.4), 0.0, 1e-10);
}

TEST_P(FitRecovery, NoisyTorquesWithinTwoHundredths) {
  RobotParams truth;
  truth.roller_friction = 0.2;
  truth.friction_scale = 0.4;
  const auto traj = generate_calibration_trajectory(GetParam(), 0.2, 10.0, 1e-3);
  std::vector<Vec3> measured = predict_torques(traj, truth);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.02);
  for (Vec3& m : measured) m += Vec3(noise(rng), noise(rng), noise(rng));
  const FitResult fit = fit_roller_friction(measured, traj, truth, 0.2);
  EXPECT_NEAR(fit.roller_friction, 0.2, 0.02);
  EXPECT_NEAR(fit.rms, 0.02, 0.002);
}

INSTANTIATE_TEST_SUITE_P(Trajectories, FitRecovery,
                         ::testing::Values(CalibrationTrajectory::ArcW0,
                                           CalibrationTrajectory::PivotW2),
                         [](const auto& info) {
                           return std::string(info.param == CalibrationTrajectory::ArcW0
                                                  ? "ArcW0"
                                                  : "PivotW2");
                         });

TEST(Fit, RejectsMismatchedLengths) {
  const RobotParams p;
  const auto traj =
      generate_calibration_trajectory(CalibrationTrajectory::ArcW0, 0.2, 10.0, 1e-3);
  std::vector<Vec3> measured(traj.size() - 1, Vec3::Zero());
  EXPECT_THROW(fit_roller_friction(measured, traj, p, 0.2), Error);
}

TEST(Fit, FlatObjectiveIsDegenerate) {
  // A robot that never moves carries no friction information.
  const RobotParams p;
  std::vector<WheelSample> traj(2000);
  for (std::size_t k = 0; k < traj.size(); ++k) traj[k].t = 1e-3 * k;
  const std::vector<Vec3> measured(traj.size(), Vec3::Zero());
  EXPECT_THROW(fit_roller_friction(measured, traj, p, 1.0), FitDegenerateError);
}

TEST(SimulatedCalibration, RecoversFrictionFromFullSimulator) {
  WorldConfig w;
  w.robot.roller_friction = 0.2;
  w.robot.friction_scale = 0.4;
  w.drive.stiction_enabled = false;
  w.drive.noise_enabled = false;
  const auto measured =
      simulate_calibration(w, CalibrationTrajectory::ArcW0, 0.2, 10.0, true);
  auto traj = generate_calibration_trajectory(CalibrationTrajectory::ArcW0, 0.2, 10.0,
                                              1.0 / w.sim.control_rate);
  ASSERT_GE(measured.size(), traj.size() - 1);
  std::vector<Vec3> m = measured;
  const std::size_t n = std::min(m.size(), traj.size());
  m.resize(n);
  traj.resize(n);
  const FitResult fit = fit_roller_friction(m, traj, w.robot, 0.2);
  EXPECT_NEAR(fit.roller_friction, 0.2, 0.01);
  EXPECT_NEAR(fit.friction_scale, 0.4, 0.11);
}

}  // namespace
}  // namespace omniforce
