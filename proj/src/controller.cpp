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

#include "omniforce/controller.hpp"

#include <cmath>

#include "omniforce/errors.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {

void AdmittanceParams::validate() const {
  if (!(mass > 0.0)) throw ConfigError("controller.desired_mass", "must be > 0");
  if (!(damping > 0.0)) {
    throw ConfigError("controller.desired_damping", "must be > 0");
  }
  if (!(standoff > 0.0)) {
    throw ConfigError("controller.standoff", "must be > 0");
  }
}

Vec3 escape_trajectory(double t, const Wrench& force, const AdmittanceParams& a,
                       const Vec3& x0) {
  const double gain = -std::expm1(-a.damping / a.mass * t) / a.damping;
  Vec3 x = x0;
  x.x() += force.force.x() * gain;
  x.y() += force.force.y() * gain;
  return x;
}

Vec3 escape_velocity(double t, const Wrench& force, const AdmittanceParams& a) {
  const double gain = std::exp(-a.damping / a.mass * t) / a.mass;
  return Vec3(force.force.x() * gain, force.force.y() * gain, 0.0);
}

double design_damping(double threshold, double standoff) {
  if (!(standoff > 0.0)) {
    throw ConfigError("controller.standoff", "must be > 0");
  }
  return threshold / standoff;
}

void JointTrajectoryIntegrator::reset(const Vec3& angles, const Vec3& rate) {
  target_.angle = angles;
  target_.rate = rate;
}

JointTarget JointTrajectoryIntegrator::step(const Vec3& rate, double dt) {
  target_.angle += 0.5 * dt * (target_.rate + rate);
  target_.rate = rate;
  return target_;
}

JointTarget to_joint_space(const Vec3& body_velocity, double theta,
                           const RobotParams& p,
                           JointTrajectoryIntegrator& integrator, double dt) {
  return integrator.step(wheel_jacobian(theta, p) * body_velocity, dt);
}

Vec3 NominalTrajectory::velocity(double t) const {
  switch (kind) {
    case TrajectoryKind::Hold:
      return Vec3::Zero();
    case TrajectoryKind::Line:
      return Vec3(speed * std::cos(heading), speed * std::sin(heading), 0.0);
    case TrajectoryKind::Arc: {
      const double turn = (clockwise ? -1.0 : 1.0) * speed / radius;
      const double a = heading + turn * t;
      return Vec3(speed * std::cos(a), speed * std::sin(a), 0.0);
    }
  }
  return Vec3::Zero();
}

void NominalTrajectory::validate() const {
  if (speed < 0.0) throw ConfigError("controller.trajectory.speed", ">= 0");
  if (kind == TrajectoryKind::Arc && !(radius > 0.0)) {
    throw ConfigError("controller.trajectory.radius", "must be > 0");
  }
}

const char* mode_name(Mode m) {
  return m == Mode::Tracking ? "TRACKING" : "ESCAPING";
}

void SupervisorParams::validate() const {
  if (escape_duration < 0.0) {
    throw ConfigError("controller.escape_duration", "must be >= 0");
  }
  if (quiet_time < 0.0) throw ConfigError("controller.quiet_time", ">= 0");
  if (holdoff < 0.0) throw ConfigError("controller.holdoff", "must be >= 0");
}

Supervisor::Supervisor(const AdmittanceParams& admittance,
                       const SupervisorParams& params)
    : admittance_(admittance), params_(params) {
  const double time_constant = admittance.mass / admittance.damping;
  escape_duration_ =
      params.escape_duration > 0.0 ? params.escape_duration : 5.0 * time_constant;
  holdoff_ = params.holdoff > 0.0 ? params.holdoff : time_constant;
}

Supervisor::Transition Supervisor::update(double t, const Vec3& pose,
                                          const Vec3& filtered_wrench,
                                          CollisionDetector& detector) {
  Transition out;
  auto capture = [&] {
    t_switch_ = t;
    x0_ = pose;
    force_.force = filtered_wrench.head<2>();
    force_.torque = 0.0;
    armed_ = false;
  };

  if (mode_ == Mode::Tracking) {
    if (detector.triggered()) {
      mode_ = Mode::Escaping;
      capture();
      quiet_ = false;
      out.entered = true;
    }
    return out;
  }

  if (armed_ && detector.triggered()) {
    capture();
    quiet_ = false;
    out.restarted = true;
    return out;
  }
  const bool below = detector.average() <= detector.threshold();
  if (!armed_ && t - t_switch_ >= holdoff_ && below) {
    detector.rearm();
    armed_ = true;
  }
  if (below) {
    if (!quiet_) {
      quiet_ = true;
      quiet_since_ = t;
    }
  } else {
    quiet_ = false;
  }
  if (t - t_switch_ >= escape_duration_ && quiet_ &&
      t - quiet_since_ >= params_.quiet_time) {
    mode_ = Mode::Tracking;
    if (detector.triggered()) detector.rearm();
    out.resumed = true;
  }
  return out;
}

Vec3 Supervisor::desired_pose(double t) const {
  return escape_trajectory(t - t_switch_, force_, admittance_, x0_);
}

Vec3 Supervisor::desired_velocity(double t) const {
  return escape_velocity(t - t_switch_, force_, admittance_);
}

}  // namespace omniforce
