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

#include "omniforce/actuator.hpp"

#include <algorithm>
#include <cmath>

#include "omniforce/errors.hpp"

namespace omniforce {

void ActuatorParams::validate() const {
  if (!(sensor_stiffness > 0.0)) {
    throw ConfigError("actuator.sensor_stiffness", "must be > 0");
  }
  if (!(rotor_inertia > 0.0)) {
    throw ConfigError("actuator.rotor_inertia", "must be > 0");
  }
  if (motor_damping < 0.0 || load_damping < 0.0) {
    throw ConfigError("actuator.motor_damping", "damping must be >= 0");
  }
  if (stiction_torque < 0.0 || load_stiction_torque < 0.0) {
    throw ConfigError("actuator.stiction_torque", "must be >= 0");
  }
  if (!(stiction_deadband > 0.0)) {
    throw ConfigError("actuator.stiction_deadband", "must be > 0");
  }
  if (torque_noise_sd < 0.0) {
    throw ConfigError("actuator.torque_noise_sd", "must be >= 0");
  }
  if (!(sample_rate >= 100.0)) {
    throw ConfigError("actuator.sample_rate", "must be >= 100 Hz");
  }
  if (!(torque_limit > 0.0)) {
    throw ConfigError("actuator.torque_limit", "must be > 0");
  }
}

void PDGains::validate() const {
  if (kp < 0.0) throw ConfigError("actuator.kp", "must be >= 0");
  if (kd < 0.0) throw ConfigError("actuator.kd", "must be >= 0");
}

double sensor_torque(double deflection, const ActuatorParams& p) {
  return p.sensor_stiffness * deflection;
}

double pd_servo(double q_des, double qdot_des, double q, double qdot,
                const PDGains& g, double torque_limit) {
  const double tau = g.kp * (q_des - q) + g.kd * (qdot_des - qdot);
  return std::clamp(tau, -torque_limit, torque_limit);
}

double external_torque_estimate_1dof(double sensed_torque, double load_accel,
                                     double load_rate, double traction_torque,
                                     double load_inertia,
                                     const ActuatorParams& p) {
  return -traction_torque + p.load_damping * load_rate +
         load_inertia * load_accel - sensed_torque;
}

StictionResult coulomb_stiction(double rate, double driving_torque,
                                double breakaway, double deadband) {
  if (std::abs(rate) < deadband) {
    if (std::abs(driving_torque) <= breakaway) {
      return {-driving_torque, true};
    }
    return {-std::copysign(breakaway, driving_torque), false};
  }
  return {-std::copysign(breakaway, rate), false};
}

void SingleActuator::step(double dt, double motor_torque, double env_torque) {
  const ActuatorParams& p = params_;
  const double breakaway = stiction_ ? p.stiction_torque : 0.0;
  if (p.sensor_mode == SensorMode::Spring) {
    const double spring = sensor_torque(motor_angle_ - load_angle_, p);
    const double drive = motor_torque - p.motor_damping * motor_rate_ - spring;
    const StictionResult f =
        coulomb_stiction(motor_rate_, drive, breakaway, p.stiction_deadband);
    double motor_accel = (drive + f.torque) / p.rotor_inertia;
    load_accel_ = (spring - p.load_damping * load_rate_ + env_torque) /
                  load_inertia_;
    motor_rate_ += motor_accel * dt;
    if (f.stuck) motor_rate_ = 0.0;
    load_rate_ += load_accel_ * dt;
    motor_angle_ += motor_rate_ * dt;
    load_angle_ += load_rate_ * dt;
    sensed_ = sensor_torque(motor_angle_ - load_angle_, p);
    return;
  }
  // Rigid link: rotor and load share one coordinate.
  const double inertia = p.rotor_inertia + load_inertia_;
  const double rate = load_rate_;
  const double drive = motor_torque + env_torque -
                       (p.motor_damping + p.load_damping) * rate;
  const StictionResult f =
      coulomb_stiction(load_rate_, drive, breakaway, p.stiction_deadband);
  load_accel_ = (drive + f.torque) / inertia;
  load_rate_ += load_accel_ * dt;
  if (f.stuck) load_rate_ = 0.0;
  load_angle_ += load_rate_ * dt;
  motor_rate_ = load_rate_;
  motor_angle_ = load_angle_;
  // Transmitted torque: what the rotor side delivers past its own inertia.
  sensed_ = motor_torque + f.torque - p.motor_damping * rate -
            p.rotor_inertia * load_accel_;
}

}  // namespace omniforce
