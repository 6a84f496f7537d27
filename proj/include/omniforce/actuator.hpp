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
#include <random>

namespace omniforce {

/// RIGID treats the torque sensor as an algebraic link (reading = torque
/// transmitted to the wheel). SPRING models it as a stiff torsional spring
/// between the reflected rotor and the wheel.
enum class SensorMode { Rigid, Spring };

/// Drivetrain of one wheel: reflected rotor, torque sensor, wheel output.
struct ActuatorParams {
  double sensor_stiffness = 1.0e4;     // N m/rad
  double rotor_inertia = 0.05;         // kg m^2, reflected through the gearing
  double motor_damping = 0.05;         // N m s/rad, rotor side
  double load_damping = 0.0;           // N m s/rad, wheel side
  double stiction_torque = 1.5;        // N m, rotor-side breakaway
  double load_stiction_torque = 0.0;   // N m, wheel-side breakaway
  double stiction_deadband = 1e-3;     // rad/s
  double torque_noise_sd = 0.02;       // N m
  double sample_rate = 1000.0;         // Hz
  double torque_limit = 40.0;          // N m, motor command clamp
  SensorMode sensor_mode = SensorMode::Spring;

  void validate() const;
};

struct PDGains {
  double kp = 200.0;  // N m/rad
  double kd = 4.0;    // N m s/rad

  void validate() const;
};

/// Noiseless reading of the torsional sensor: k * deflection.
double sensor_torque(double deflection, const ActuatorParams& p);

/// Zero-mean Gaussian sensor noise with a private, seeded generator.
class SensorNoise {
 public:
  SensorNoise(double sd, std::uint64_t seed) : dist_(0.0, sd), rng_(seed) {}

  double sample() { return dist_.stddev() > 0.0 ? dist_(rng_) : 0.0; }

 private:
  std::normal_distribution<double> dist_;
  std::mt19937_64 rng_;
};

/// tau = kp (q_des - q) + kd (qdot_des - qdot), clamped to +-torque_limit.
double pd_servo(double q_des, double qdot_des, double q, double qdot,
                const PDGains& g, double torque_limit);

/// Single-drive residual: tau_ext = -tau_trac + B2 qdot + M qddot - tau_s.
double external_torque_estimate_1dof(double sensed_torque, double load_accel,
                                     double load_rate, double traction_torque,
                                     double load_inertia,
                                     const ActuatorParams& p);

struct StictionResult {
  double torque = 0.0;  // friction torque acting on the coordinate
  bool stuck = false;
};

/// Velocity-deadband Coulomb friction. Inside the deadband the element holds
/// any driving torque up to `breakaway` (returns -driving, stuck); otherwise
/// it returns the kinetic torque opposing the motion, or the tendency to
/// move when the rate is still inside the deadband.
StictionResult coulomb_stiction(double rate, double driving_torque,
                                double breakaway, double deadband);

/// Two-mass drive: rotor (m, B1, stiction) -- spring k -- load (M, B2).
/// Stepped with semi-implicit Euler.
class SingleActuator {
 public:
  SingleActuator(const ActuatorParams& params, double load_inertia)
      : params_(params), load_inertia_(load_inertia) {}

  /// Advances by dt with motor command and environment torque on the load.
  void step(double dt, double motor_torque, double env_torque);

  double sensed_torque() const { return sensed_; }
  double motor_angle() const { return motor_angle_; }
  double motor_rate() const { return motor_rate_; }
  double load_angle() const { return load_angle_; }
  double load_rate() const { return load_rate_; }
  double load_accel() const { return load_accel_; }

  void set_stiction_enabled(bool on) { stiction_ = on; }

 private:
  ActuatorParams params_;
  double load_inertia_;
  bool stiction_ = true;
  double motor_angle_ = 0.0;
  double motor_rate_ = 0.0;
  double load_angle_ = 0.0;
  double load_rate_ = 0.0;
  double load_accel_ = 0.0;
  double sensed_ = 0.0;
};

}  // namespace omniforce
