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

#include "omniforce/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "omniforce/dynamics.hpp"
#include "omniforce/errors.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {
namespace {

constexpr double kAmplitude = 1.5;  // rad

/// Per-sample decomposition: torque = inertial + B_r * coupling * tanh(a qr).
struct FitData {
  std::vector<Vec3> error;  // inertial prediction minus measurement
  std::vector<Mat3> coupling;
  std::vector<Vec3> roller_rate;
};

FitData prepare(const std::vector<Vec3>& measured,
                const std::vector<WheelSample>& traj, const RobotParams& p,
                double omega) {
  if (measured.size() != traj.size()) {
    throw Error("calibration: measured and reference lengths differ");
  }
  if (!(omega > 0.0)) throw ConfigError("calibration.omega", "must be > 0");
  RobotParams frictionless = p;
  frictionless.roller_friction = 0.0;
  const double skip = 0.5 / omega;
  const double theta0 = 0.0;
  FitData d;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj[k].t < skip - 1e-12) continue;
    const GeneralizedState st = state_from_wheels(traj[k], theta0, p);
    const double theta = st.base.pose.z();
    d.error.push_back(nominal_torque(st, frictionless, ModelVariant::Full) -
                      measured[k]);
    d.coupling.push_back(invert3(wheel_jacobian(theta, p).transpose()) *
                         roller_jacobian(theta, p).transpose());
    d.roller_rate.push_back(st.wheels.roller_rate);
  }
  if (d.error.empty()) {
    throw Error("calibration: no samples after the first half period");
  }
  return d;
}

struct Sums {
  double cross = 0.0;
  double gain = 0.0;
};

Sums sums(const FitData& d, double alpha) {
  Sums s;
  for (std::size_t k = 0; k < d.error.size(); ++k) {
    const Vec3& qr = d.roller_rate[k];
    const Vec3 g = d.coupling[k] * Vec3(std::tanh(alpha * qr[0]),
                                        std::tanh(alpha * qr[1]),
                                        std::tanh(alpha * qr[2]));
    s.cross += d.error[k].dot(g);
    s.gain += g.squaredNorm();
  }
  return s;
}

double rms_of(double base, const Sums& s, double br, std::size_t n) {
  const double ms =
      (base + 2.0 * br * s.cross + br * br * s.gain) / (3.0 * static_cast<double>(n));
  return std::sqrt(std::max(0.0, ms));
}

bool better(double rms, double br, double alpha, double best_rms,
            double best_br, double best_alpha) {
  if (rms != best_rms) return rms < best_rms;
  if (br != best_br) return br < best_br;
  return alpha < best_alpha;
}

}  // namespace

const char* trajectory_name(CalibrationTrajectory id) {
  return id == CalibrationTrajectory::ArcW0 ? "ARC_W0" : "PIVOT_W2";
}

WheelSample calibration_sample(CalibrationTrajectory id, double omega,
                               double t) {
  const double w = 2.0 * std::numbers::pi * omega;
  WheelSample s;
  s.t = t;
  const double q = kAmplitude - kAmplitude * std::cos(w * t);
  const double qd = kAmplitude * w * std::sin(w * t);
  const double qdd = kAmplitude * w * w * std::cos(w * t);
  const int driven = id == CalibrationTrajectory::ArcW0 ? 1 : 2;
  for (int i = 0; i < driven; ++i) {
    s.angle[i] = q;
    s.rate[i] = qd;
    s.accel[i] = qdd;
  }
  return s;
}

std::vector<WheelSample> generate_calibration_trajectory(
    CalibrationTrajectory id, double omega, double duration, double dt) {
  if (!(omega > 0.0)) throw ConfigError("calibration.omega", "must be > 0");
  if (!(dt > 0.0)) throw ConfigError("calibration.dt", "must be > 0");
  const auto n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
  std::vector<WheelSample> out;
  out.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    out.push_back(calibration_sample(id, omega, static_cast<double>(k) * dt));
  }
  return out;
}

GeneralizedState state_from_wheels(const WheelSample& s, double theta0,
                                   const RobotParams& p) {
  GeneralizedState st;
  const double theta =
      theta0 + p.wheel_radius / (3.0 * p.wheel_distance) * s.angle.sum();
  st.base.pose.z() = theta;
  st.base.velocity = wheel_jacobian_inverse(theta, p) * s.rate;
  st.base.acceleration =
      body_accel_from_wheels(s.rate, s.accel, theta, st.base.velocity.z(), p);
  st.wheels = constrained_wheel_state(st.base, WheelState{}, p);
  st.wheels.wheel_angle = s.angle;
  return st;
}

std::vector<Vec3> predict_torques(const std::vector<WheelSample>& traj,
                                  const RobotParams& p) {
  std::vector<Vec3> out;
  out.reserve(traj.size());
  for (const WheelSample& s : traj) {
    out.push_back(nominal_torque(state_from_wheels(s, 0.0, p), p,
                                 ModelVariant::Full));
  }
  return out;
}

double calibration_rms(const std::vector<Vec3>& measured,
                       const std::vector<WheelSample>& traj,
                       const RobotParams& p, double omega,
                       double roller_friction, double friction_scale) {
  const FitData d = prepare(measured, traj, p, omega);
  double base = 0.0;
  for (const Vec3& e : d.error) base += e.squaredNorm();
  return rms_of(base, sums(d, friction_scale), roller_friction, d.error.size());
}

FitResult fit_roller_friction(const std::vector<Vec3>& measured,
                              const std::vector<WheelSample>& traj,
                              const RobotParams& p, double omega,
                              const FitOptions& o) {
  if (!(o.br_step > 0.0) || o.br_max < o.br_min) {
    throw ConfigError("calibration.fit.br_step", "invalid friction grid");
  }
  if (o.alpha_points < 2 || !(o.alpha_min > 0.0) || o.alpha_max <= o.alpha_min) {
    throw ConfigError("calibration.fit.alpha_points", "invalid scale grid");
  }
  const FitData d = prepare(measured, traj, p, omega);
  const std::size_t n = d.error.size();
  double base = 0.0;
  for (const Vec3& e : d.error) base += e.squaredNorm();

  const int br_count =
      static_cast<int>(std::lround((o.br_max - o.br_min) / o.br_step));
  const double log_ratio = std::log(o.alpha_max / o.alpha_min);
  const double log_step = log_ratio / (o.alpha_points - 1);

  double best_rms = std::numeric_limits<double>::infinity();
  double best_br = 0.0;
  double best_alpha = 0.0;
  double worst_rms = 0.0;
  for (int j = 0; j < o.alpha_points; ++j) {
    const double alpha = o.alpha_min * std::exp(log_step * j);
    const Sums s = sums(d, alpha);
    for (int i = 0; i <= br_count; ++i) {
      const double br = o.br_min + o.br_step * i;
      const double rms = rms_of(base, s, br, n);
      worst_rms = std::max(worst_rms, rms);
      if (better(rms, br, alpha, best_rms, best_br, best_alpha)) {
        best_rms = rms;
        best_br = br;
        best_alpha = alpha;
      }
    }
  }
  if (worst_rms - best_rms < o.noise_floor) {
    throw FitDegenerateError("calibration objective is flat over the grid");
  }

  FitResult r;
  r.grid_rms = best_rms;
  double br = best_br;
  double alpha = best_alpha;
  double rms = best_rms;
  // The friction magnitude enters quadratically, so for each scale its best
  // value is closed form. Golden section on that profile over log(alpha).
  auto profile = [&](double log_alpha, double& br_out) {
    const Sums s = sums(d, std::exp(log_alpha));
    br_out = s.gain > 0.0 ? std::clamp(-s.cross / s.gain, o.br_min, o.br_max)
                          : best_br;
    return rms_of(base, s, br_out, n);
  };
  const double lo_log = std::log(o.alpha_min);
  const double hi_log = std::log(o.alpha_max);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int round = 0; round < o.rounds; ++round) {
    double a = std::max(lo_log, std::log(alpha) - log_step);
    double b = std::min(hi_log, std::log(alpha) + log_step);
    double br1 = 0.0, br2 = 0.0;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = profile(x1, br1);
    double f2 = profile(x2, br2);
    for (int it = 0; it < 60; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        br2 = br1;
        x1 = b - phi * (b - a);
        f1 = profile(x1, br1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        br1 = br2;
        x2 = a + phi * (b - a);
        f2 = profile(x2, br2);
      }
    }
    const bool first = f1 <= f2;
    const double fa = first ? f1 : f2;
    if (fa > rms) break;
    alpha = std::exp(first ? x1 : x2);
    br = first ? br1 : br2;
    rms = fa;
  }
  r.roller_friction = br;
  r.friction_scale = alpha;
  r.rms = rms;
  return r;
}

std::vector<Vec3> simulate_calibration(const WorldConfig& world,
                                       CalibrationTrajectory id, double omega,
                                       double duration, bool feedforward) {
  WorldConfig w = world;
  w.sim.duration = duration;
  w.dummy.enabled = false;
  w.pushes.clear();
  w.initial_velocity = Vec3::Zero();
  Simulation sim(w);
  const RobotParams p = w.robot;
  const ActuatorParams act = w.drive.actuator;
  const ModelVariant variant = w.variant;
  const double theta0 = w.initial_pose.z();

  WheelReference ref;
  ref.target = [id, omega](double t) {
    const WheelSample s = calibration_sample(id, omega, t);
    return JointTarget{s.angle, s.rate};
  };
  if (feedforward) {
    ref.feedforward = [=](double t) {
      const WheelSample s = calibration_sample(id, omega, t);
      const Vec3 wheel =
          nominal_torque(state_from_wheels(s, theta0, p), p, variant);
      return Vec3(wheel + (act.motor_damping + act.load_damping) * s.rate +
                  act.rotor_inertia * s.accel);
    };
  }
  sim.set_wheel_reference(ref);
  const SimTrace& trace = sim.run();
  std::vector<Vec3> out;
  out.reserve(trace.rows.size());
  for (const TraceRow& r : trace.rows) out.push_back(r.sensed_torque);
  return out;
}

}  // namespace omniforce
