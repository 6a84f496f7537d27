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

#include "omniforce/estimator.hpp"
#include "omniforce/types.hpp"

namespace omniforce {

/// Virtual mass-damper realized after a collision.
struct AdmittanceParams {
  double mass = 2.0;      // kg
  double damping = 1.6;   // N s/m
  double standoff = 0.5;  // m, displacement targeted at threshold force

  void validate() const;
};

/// x(t) = x0 + F/B (1 - exp(-B t / M)) on x and y; heading held at x0.
Vec3 escape_trajectory(double t, const Wrench& force, const AdmittanceParams& a,
                       const Vec3& x0);

/// Time derivative of escape_trajectory.
Vec3 escape_velocity(double t, const Wrench& force, const AdmittanceParams& a);

/// Damping that stops a threshold-level push after `standoff` metres.
double design_damping(double threshold, double standoff);

struct JointTarget {
  Vec3 angle = Vec3::Zero();
  Vec3 rate = Vec3::Zero();
};

/// Trapezoidal integration of desired wheel rates into wheel angles.
class JointTrajectoryIntegrator {
 public:
  void reset(const Vec3& angles, const Vec3& rate = Vec3::Zero());
  JointTarget step(const Vec3& rate, double dt);
  const Vec3& angles() const { return target_.angle; }

 private:
  JointTarget target_;
};

/// Wheel targets for a desired body velocity at the measured heading.
JointTarget to_joint_space(const Vec3& body_velocity, double theta,
                           const RobotParams& p,
                           JointTrajectoryIntegrator& integrator, double dt);

enum class TrajectoryKind { Hold, Arc, Line };

/// Nominal motion followed while no collision is being handled.
struct NominalTrajectory {
  TrajectoryKind kind = TrajectoryKind::Hold;
  double speed = 0.0;    // m/s
  double radius = 0.75;  // m, ARC only
  double heading = 0.0;  // rad, initial direction of travel
  bool clockwise = false;

  Vec3 velocity(double t) const;
  void validate() const;
};

enum class Mode { Tracking, Escaping };

const char* mode_name(Mode m);

struct SupervisorParams {
  double escape_duration = 0.0;  // s, 0 selects 5 M/B
  double quiet_time = 0.2;       // s
  double holdoff = 0.0;          // s before a re-push may restart, 0 -> M/B

  void validate() const;
};

/// Switches between nominal tracking and the admittance escape.
class Supervisor {
 public:
  Supervisor(const AdmittanceParams& admittance, const SupervisorParams& params);

  struct Transition {
    bool entered = false;
    bool restarted = false;
    bool resumed = false;
  };

  /// Call once per control tick after the detector has seen the sample.
  Transition update(double t, const Vec3& pose, const Vec3& filtered_wrench,
                    CollisionDetector& detector);

  Mode mode() const { return mode_; }
  double switch_time() const { return t_switch_; }
  const Vec3& start_pose() const { return x0_; }
  const Wrench& trigger_force() const { return force_; }
  double escape_duration() const { return escape_duration_; }

  /// Desired pose and velocity of the escape at time t.
  Vec3 desired_pose(double t) const;
  Vec3 desired_velocity(double t) const;

 private:
  AdmittanceParams admittance_;
  SupervisorParams params_;
  double escape_duration_;
  double holdoff_;
  Mode mode_ = Mode::Tracking;
  double t_switch_ = 0.0;
  double quiet_since_ = 0.0;
  bool quiet_ = false;
  bool armed_ = false;
  Vec3 x0_ = Vec3::Zero();
  Wrench force_;
};

}  // namespace omniforce
