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

#include <vector>

#include "omniforce/simulator.hpp"
#include "omniforce/types.hpp"

namespace omniforce {

/// ARC_W0 drives wheel 0 alone; PIVOT_W2 drives wheels 0 and 1 with the
/// same sinusoid while wheel 2 holds its angle.
enum class CalibrationTrajectory { ArcW0, PivotW2 };

const char* trajectory_name(CalibrationTrajectory id);

struct WheelSample {
  double t = 0.0;
  Vec3 angle = Vec3::Zero();
  Vec3 rate = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
};

/// q(t) = a - a cos(2 pi omega t) on the driven wheels, a = 1.5 rad.
WheelSample calibration_sample(CalibrationTrajectory id, double omega,
                               double t);

/// Samples at t = k dt for k = 0 .. floor(duration / dt).
std::vector<WheelSample> generate_calibration_trajectory(
    CalibrationTrajectory id, double omega, double duration, double dt);

/// Body state implied by a wheel sample, starting from heading theta0.
GeneralizedState state_from_wheels(const WheelSample& s, double theta0,
                                   const RobotParams& p);

/// Nominal (full model) torques along a wheel trajectory.
std::vector<Vec3> predict_torques(const std::vector<WheelSample>& traj,
                                  const RobotParams& p);

struct FitOptions {
  double br_min = 0.0;
  double br_max = 1.0;
  double br_step = 0.01;
  double alpha_min = 0.05;
  double alpha_max = 5.0;
  int alpha_points = 50;
  int rounds = 3;
  double noise_floor = 1e-9;  // N m, flatness limit of the rms surface
};

struct FitResult {
  double roller_friction = 0.0;
  double friction_scale = 0.0;
  double rms = 0.0;
  double grid_rms = 0.0;
};

/// Grid search, then golden section on the scale with the friction magnitude
/// solved in closed form. Samples before half a period are ignored. Throws FitDegenerateError on a flat objective.
FitResult fit_roller_friction(const std::vector<Vec3>& measured,
                              const std::vector<WheelSample>& traj,
                              const RobotParams& p, double omega,
                              const FitOptions& options = {});

/// RMS over all channels for one parameter pair, same sample window.
double calibration_rms(const std::vector<Vec3>& measured,
                       const std::vector<WheelSample>& traj,
                       const RobotParams& p, double omega,
                       double roller_friction, double friction_scale);

struct CalibrationRun {
  CalibrationTrajectory trajectory = CalibrationTrajectory::ArcW0;
  double omega = 0.2;
  double duration = 10.0;
  std::vector<WheelSample> reference;
  std::vector<Vec3> measured;
  FitResult fitted;
};

/// Drives the simulated robot along the calibration trajectory (PD plus
/// model feedforward) and returns the sensor torques per control tick.
std::vector<Vec3> simulate_calibration(const WorldConfig& world,
                                       CalibrationTrajectory id, double omega,
                                       double duration, bool feedforward);

}  // namespace omniforce
