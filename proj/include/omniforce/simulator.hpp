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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "omniforce/actuator.hpp"
#include "omniforce/controller.hpp"
#include "omniforce/dynamics.hpp"
#include "omniforce/estimator.hpp"
#include "omniforce/trace.hpp"
#include "omniforce/types.hpp"

namespace omniforce {

enum class BumperKind { PU, Spring, Magnet };

const char* bumper_name(BumperKind k);

/// Dummy-mounted bumper. PU is a stiff Kelvin-Voigt pad. SPRING is a soft
/// spring with a hard stop at travel_max. MAGNET is the spring held rigid by
/// a magnet until the contact force reaches latch_force.
struct BumperModel {
  BumperKind kind = BumperKind::PU;
  double stiffness = 5.0e4;        // N/m
  double damping = 200.0;          // N s/m
  double travel_max = 0.05;        // m
  double latch_force = 30.0;       // N, MAGNET only
  double rigid_stiffness = 5.0e4;  // N/m, latched magnet and hard stop
  double rigid_damping = 200.0;    // N s/m
  bool latch_engaged = true;

  static BumperModel preset(BumperKind kind);
  void validate() const;
};

/// Pushing-only contact force for a penetration depth and its rate.
double bumper_force(double deflection, double rate, const BumperModel& b);

/// Magnet latch bookkeeping after a force evaluation: releases once the
/// force reaches latch_force, re-engages when the deflection returns to 0.
void update_latch(BumperModel& b, double deflection, double force);

/// Compression of the bumper element itself, in [0, travel_max].
double bumper_compression(double deflection, const BumperModel& b);

struct DummyConfig {
  bool enabled = false;
  double mass = 9.08;          // kg, sliding mass
  double pull_force = 44.54;   // N, constant along the axis
  double release_gap = 0.02548;  // m, tip to body at release
  Vec2 axis = Vec2(-1.0, 0.0);   // unit direction of travel
  Vec2 aim = Vec2::Zero();       // world point on the line of travel
  double stroke = 0.05;        // m past the initial body boundary
  double initial_speed = 0.0;  // m/s along the axis
  double contact_height = 0.2; // m
  BumperModel bumper;

  void validate() const;
};

struct DummyState {
  Vec2 origin = Vec2::Zero();
  Vec2 axis = Vec2(-1.0, 0.0);
  double s = 0.0;
  double sdot = 0.0;
  double s_max = 0.0;

  Vec2 tip() const { return origin + s * axis; }
};

/// Scripted force at a body-fixed point, smooth ramps in and out.
struct PushProfile {
  Vec2 point = Vec2::Zero();      // body frame
  Vec2 direction = Vec2(-1, 0);   // body frame, unit
  double magnitude = 10.0;        // N
  double start = 0.1;             // s
  double ramp = 0.3;              // s
  double hold = 1.0;              // s
  bool end_on_escape = false;
  double contact_height = 0.2;    // m

  double force_at(double t) const;
  void validate() const;
};

/// Contact state between the dummy tip and one body feature. Features 0-2
/// are triangle edges (edge i joins vertex i and i+1), 3-5 wheel discs.
struct ContactResult {
  bool active = false;
  int feature = -1;
  Vec2 point = Vec2::Zero();
  Vec2 inward = Vec2::Zero();
  double depth = 0.0;
  double depth_rate = 0.0;
  double force = 0.0;
};

/// Penetration of the tip into the body along the sticky feature (selected
/// on first penetration, released on separation) and the resulting
/// frictionless bumper force. Updates `feature` and the magnet latch.
ContactResult resolve_contact(const BaseState& base, const Vec2& tip,
                              const Vec2& tip_velocity, int& feature,
                              BumperModel& bumper, const RobotParams& p);

struct SimSettings {
  double dt = 1e-4;           // s, physics step
  double control_rate = 1000; // Hz
  double duration = 1.0;      // s
  std::uint64_t seed = 1;

  void validate() const;
};

struct DriveConfig {
  ActuatorParams actuator;
  PDGains gains;
  bool motors_enabled = true;
  bool stiction_enabled = true;
  bool noise_enabled = true;

  void validate() const;
};

struct ControllerConfig {
  AdmittanceParams admittance;
  SupervisorParams supervisor;
  NominalTrajectory trajectory;
  bool escape_enabled = true;

  void validate() const;
};

struct WorldConfig {
  RobotParams robot;
  ModelVariant variant = ModelVariant::Full;
  DriveConfig drive;
  EstimatorParams estimator;
  ControllerConfig controller;
  DummyConfig dummy;
  std::vector<PushProfile> pushes;
  SimSettings sim;
  Vec3 initial_pose = Vec3::Zero();
  Vec3 initial_velocity = Vec3::Zero();  // world frame

  void validate() const;
};

/// Reference wheel motion overriding the supervisor (calibration runs).
struct WheelReference {
  std::function<JointTarget(double)> target;
  std::function<Vec3(double)> feedforward;  // optional motor torque
};

/// Deterministic world: base with full dynamics, drivetrains, dummy,
/// scripted pushes, estimator and controller.
class Simulation {
 public:
  explicit Simulation(const WorldConfig& config);

  void set_wheel_reference(WheelReference ref) { reference_ = std::move(ref); }

  /// Advances one control period and appends a trace row.
  void step_control();

  /// Runs until the configured duration and returns the trace.
  const SimTrace& run();

  double time() const;
  const SimTrace& trace() const { return trace_; }
  const BaseState& base() const { return base_; }
  const Vec3& wheel_angles() const { return wheel_angle_; }
  const Vec3& wheel_rates() const { return wheel_rate_; }
  const Vec3& motor_angles() const { return motor_angle_; }
  const Vec3& sensed_torque() const { return sensed_; }
  const DummyState& dummy() const { return dummy_; }
  const ForceEstimator& estimator() const { return estimator_; }
  const Supervisor& supervisor() const { return supervisor_; }
  const ContactResult& last_contact() const { return contact_; }
  const WorldConfig& config() const { return config_; }
  /// First control tick with a nonzero applied force, NaN before.
  double contact_onset() const { return contact_onset_; }

 private:
  void physics_step();
  Vec3 control_command(double t);
  Vec3 spring_torque() const;
  void check_stability() const;

  WorldConfig config_;
  RobotParams robot_;
  int substeps_;
  double control_dt_;
  std::int64_t tick_ = 0;
  double physics_time_ = 0.0;

  BaseState base_;
  Vec3 wheel_angle_ = Vec3::Zero();
  Vec3 wheel_rate_ = Vec3::Zero();
  Vec3 roller_angle_ = Vec3::Zero();
  Vec3 motor_angle_ = Vec3::Zero();
  Vec3 motor_rate_ = Vec3::Zero();
  Vec3 command_ = Vec3::Zero();
  Vec3 sensed_ = Vec3::Zero();      // last measured sensor torques
  Vec3 transmitted_ = Vec3::Zero(); // rigid-mode sensor torque, last step

  DummyState dummy_;
  BumperModel bumper_;
  int feature_ = -1;
  ContactResult contact_;
  Vec2 applied_force_ = Vec2::Zero();
  std::vector<bool> push_ended_;
  bool reset_pending_ = false;

  SensorNoise noise_;
  ForceEstimator estimator_;
  Supervisor supervisor_;
  JointTrajectoryIntegrator integrator_;
  double nominal_clock_ = 0.0;
  std::optional<WheelReference> reference_;
  double contact_onset_;
  SimTrace trace_;
};

}  // namespace omniforce
