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

#include "omniforce/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "omniforce/errors.hpp"
#include "omniforce/geometry.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {
namespace {

constexpr double kStopStiffness = 1.0e6;  // N/m, slider end stop
constexpr double kMaxSpeed = 100.0;       // m/s, instability guard

Vec2 rotate(double theta, const Vec2& v) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

Vec2 body_point_velocity(const BaseState& base, const Vec2& point) {
  const Vec2 r = point - base.pose.head<2>();
  return base.velocity.head<2>() + base.velocity.z() * Vec2(-r.y(), r.x());
}

const WorldConfig& validated(const WorldConfig& c) {
  c.validate();
  return c;
}

double smoothstep(double s) {
  return 0.5 - 0.5 * std::cos(std::numbers::pi * s);
}

struct FeatureGeometry {
  double depth;
  Vec2 point;
  Vec2 inward;
};

FeatureGeometry feature_geometry(int feature, const Vec2& tip, const Vec3& pose,
                                 const RobotParams& p) {
  if (feature < 3) {
    const auto tri = triangle_vertices(pose, p);
    const Vec2& a = tri[feature];
    const Vec2 e = (tri[(feature + 1) % 3] - a).normalized();
    const Vec2 out(e.y(), -e.x());
    const double depth = -out.dot(tip - a);
    return {depth, tip + depth * out, -out};
  }
  const Vec2 c = wheel_center(pose, feature - 3, p);
  Vec2 d = tip - c;
  double dist = d.norm();
  Vec2 u = dist > 0.0 ? Vec2(d / dist) : Vec2((c - pose.head<2>()).normalized());
  return {p.wheel_radius - dist, c + p.wheel_radius * u, -u};
}

}  // namespace

const char* bumper_name(BumperKind k) {
  switch (k) {
    case BumperKind::PU:
      return "PU";
    case BumperKind::Spring:
      return "SPRING";
    case BumperKind::Magnet:
      return "MAGNET";
  }
  return "PU";
}

BumperModel BumperModel::preset(BumperKind kind) {
  BumperModel b;
  b.kind = kind;
  if (kind == BumperKind::PU) return b;
  b.stiffness = 3.0e3;
  b.damping = 30.0;
  b.travel_max = 0.05;
  return b;
}

void BumperModel::validate() const {
  if (!(stiffness > 0.0)) throw ConfigError("dummy.bumper.stiffness", "> 0");
  if (damping < 0.0) throw ConfigError("dummy.bumper.damping", "must be >= 0");
  if (!(travel_max > 0.0)) {
    throw ConfigError("dummy.bumper.travel_max", "must be > 0");
  }
  if (latch_force < 0.0) {
    throw ConfigError("dummy.bumper.latch_force", "must be >= 0");
  }
  if (!(rigid_stiffness > 0.0)) {
    throw ConfigError("dummy.bumper.rigid_stiffness", "must be > 0");
  }
  if (rigid_damping < 0.0) {
    throw ConfigError("dummy.bumper.rigid_damping", "must be >= 0");
  }
}

double bumper_force(double deflection, double rate, const BumperModel& b) {
  if (deflection <= 0.0) return 0.0;
  double f = 0.0;
  if (b.kind == BumperKind::PU) {
    f = b.stiffness * deflection + b.damping * rate;
  } else if (b.kind == BumperKind::Magnet && b.latch_engaged) {
    f = b.rigid_stiffness * deflection + b.rigid_damping * rate;
  } else {
    f = b.stiffness * std::min(deflection, b.travel_max) + b.damping * rate;
    if (deflection > b.travel_max) {
      f += b.rigid_stiffness * (deflection - b.travel_max) +
           b.rigid_damping * rate;
    }
  }
  return std::max(f, 0.0);
}

void update_latch(BumperModel& b, double deflection, double force) {
  if (b.kind != BumperKind::Magnet) return;
  if (b.latch_engaged && force >= b.latch_force) {
    b.latch_engaged = false;
  } else if (!b.latch_engaged && deflection <= 0.0) {
    b.latch_engaged = true;
  }
}

double bumper_compression(double deflection, const BumperModel& b) {
  return std::clamp(deflection, 0.0, b.travel_max);
}

void DummyConfig::validate() const {
  if (!(mass > 0.0)) throw ConfigError("dummy.mass", "must be > 0");
  if (pull_force < 0.0) throw ConfigError("dummy.pull_force", "must be >= 0");
  if (release_gap < 0.0) {
    throw ConfigError("dummy.release_gap", "must be >= 0");
  }
  if (!(axis.norm() > 0.0)) throw ConfigError("dummy.axis", "must be nonzero");
  if (!(stroke > 0.0)) throw ConfigError("dummy.stroke", "must be > 0");
  if (contact_height < 0.0) {
    throw ConfigError("dummy.contact_height", "must be >= 0");
  }
  bumper.validate();
}

double PushProfile::force_at(double t) const {
  double s = t - start;
  if (s < 0.0) return 0.0;
  if (s < ramp) return magnitude * smoothstep(s / ramp);
  s -= ramp;
  if (s < hold) return magnitude;
  s -= hold;
  if (s < ramp) return magnitude * (1.0 - smoothstep(s / ramp));
  return 0.0;
}

void PushProfile::validate() const {
  if (magnitude < 0.0) throw ConfigError("push.magnitude", "must be >= 0");
  if (ramp < 0.0) throw ConfigError("push.ramp", "must be >= 0");
  if (hold < 0.0) throw ConfigError("push.hold", "must be >= 0");
  if (!(direction.norm() > 0.0)) {
    throw ConfigError("push.direction", "must be nonzero");
  }
  if (contact_height < 0.0) {
    throw ConfigError("push.contact_height", "must be >= 0");
  }
}

ContactResult resolve_contact(const BaseState& base, const Vec2& tip,
                              const Vec2& tip_velocity, int& feature,
                              BumperModel& bumper, const RobotParams& p) {
  ContactResult out;
  const Vec3& pose = base.pose;
  if (feature < 0) {
    if (!inside_body(tip, pose, p)) {
      update_latch(bumper, 0.0, 0.0);
      return out;
    }
    double best = std::numeric_limits<double>::infinity();
    const bool in_triangle =
        triangle_signed_distance(tip, triangle_vertices(pose, p)) <= 0.0;
    for (int f = 0; f < 6; ++f) {
      if (f < 3 && !in_triangle) continue;
      const double depth = feature_geometry(f, tip, pose, p).depth;
      if (depth >= 0.0 && depth < best) {
        best = depth;
        feature = f;
      }
    }
  }
  const FeatureGeometry g = feature_geometry(feature, tip, pose, p);
  if (g.depth <= 0.0) {
    feature = -1;
    update_latch(bumper, 0.0, 0.0);
    return out;
  }
  out.active = true;
  out.feature = feature;
  out.point = g.point;
  out.inward = g.inward;
  out.depth = g.depth;
  out.depth_rate =
      g.inward.dot(tip_velocity - body_point_velocity(base, g.point));
  out.force = bumper_force(out.depth, out.depth_rate, bumper);
  update_latch(bumper, out.depth, out.force);
  return out;
}

void SimSettings::validate() const {
  if (!(dt >= 1e-5 && dt <= 1e-3)) {
    throw ConfigError("sim.dt", "must lie in [1e-5, 1e-3] s");
  }
  if (!(control_rate >= 100.0)) {
    throw ConfigError("sim.control_rate", "must be >= 100 Hz");
  }
  const double ratio = 1.0 / (control_rate * dt);
  if (ratio < 1.0 - 1e-9 || std::abs(ratio - std::round(ratio)) > 1e-6) {
    throw ConfigError("sim.dt", "control period must be a multiple of dt");
  }
  if (!(duration > 0.0)) throw ConfigError("sim.duration", "must be > 0");
}

void DriveConfig::validate() const {
  actuator.validate();
  gains.validate();
}

void ControllerConfig::validate() const {
  admittance.validate();
  supervisor.validate();
  trajectory.validate();
}

void WorldConfig::validate() const {
  robot.validate();
  drive.validate();
  estimator.validate();
  controller.validate();
  if (dummy.enabled) dummy.validate();
  for (const PushProfile& push : pushes) push.validate();
  sim.validate();
  if (std::abs(estimator.rate - sim.control_rate) > 1e-9) {
    throw ConfigError("estimator.rate", "must equal sim.control_rate");
  }
  if (std::abs(drive.actuator.sample_rate - sim.control_rate) > 1e-9) {
    throw ConfigError("actuator.sample_rate", "must equal sim.control_rate");
  }
}

Simulation::Simulation(const WorldConfig& config)
    : config_(validated(config)),
      robot_(config.robot),
      substeps_(0),
      control_dt_(1.0 / config.sim.control_rate),
      noise_(config.drive.noise_enabled ? config.drive.actuator.torque_noise_sd
                                        : 0.0,
             config.sim.seed),
      estimator_(config.robot, config.estimator, config.initial_pose,
                 Vec3::Zero(),
                 wheel_jacobian(config.initial_pose.z(), config.robot) *
                     config.initial_velocity),
      supervisor_(config.controller.admittance, config.controller.supervisor),
      contact_onset_(std::numeric_limits<double>::quiet_NaN()) {
  substeps_ = static_cast<int>(
      std::lround(1.0 / (config.sim.control_rate * config.sim.dt)));
  base_.pose = config.initial_pose;
  base_.velocity = config.initial_velocity;
  wheel_rate_ = wheel_jacobian(base_.pose.z(), robot_) * base_.velocity;
  motor_rate_ = wheel_rate_;
  integrator_.reset(motor_angle_, wheel_rate_);
  push_ended_.assign(config.pushes.size(), false);

  // A moving start begins in steady state: the drivetrain already carries
  // the nominal torque and the servo targets lead by the matching PD error.
  const DriveConfig& drive = config.drive;
  if (drive.motors_enabled && !base_.velocity.isZero(0.0)) {
    const ActuatorParams& act = drive.actuator;
    GeneralizedState gs;
    gs.base = base_;
    gs.base.acceleration = Vec3::Zero();
    gs.wheels = constrained_wheel_state(gs.base, WheelState{}, robot_);
    Vec3 load = nominal_torque(gs, robot_, config.variant) +
                act.load_damping * wheel_rate_;
    Vec3 motor = act.motor_damping * wheel_rate_;
    for (int i = 0; i < 3; ++i) {
      if (!drive.stiction_enabled ||
          std::abs(wheel_rate_[i]) < act.stiction_deadband) {
        continue;
      }
      load[i] += std::copysign(act.load_stiction_torque, wheel_rate_[i]);
      motor[i] += std::copysign(act.stiction_torque, wheel_rate_[i]);
    }
    if (act.sensor_mode == SensorMode::Spring) {
      motor_angle_ = load / act.sensor_stiffness;
    } else {
      transmitted_ = load;
    }
    // The first integrator step advances the target by one period.
    integrator_.reset(motor_angle_ + (load + motor) / drive.gains.kp -
                          wheel_rate_ * control_dt_,
                      wheel_rate_);
  }

  if (config.dummy.enabled) {
    const DummyConfig& d = config.dummy;
    dummy_.axis = d.axis.normalized();
    const auto hit = first_entry(d.aim - 10.0 * dummy_.axis, dummy_.axis,
                                 base_.pose, robot_);
    if (!hit) throw ConfigError("dummy.aim", "line of travel misses the robot");
    dummy_.origin = hit->point - d.release_gap * dummy_.axis;
    dummy_.s = 0.0;
    dummy_.sdot = d.initial_speed;
    dummy_.s_max = d.release_gap + d.stroke;
    bumper_ = d.bumper;
  }
}

double Simulation::time() const {
  return static_cast<double>(tick_) * control_dt_;
}

Vec3 Simulation::spring_torque() const {
  return config_.drive.actuator.sensor_stiffness * (motor_angle_ - wheel_angle_);
}

Vec3 Simulation::control_command(double t) {
  const DriveConfig& drive = config_.drive;
  if (!drive.motors_enabled) return Vec3::Zero();
  const double theta = estimator_.output().base.pose.z();

  JointTarget target;
  Vec3 feedforward = Vec3::Zero();
  if (reference_) {
    target = reference_->target(t);
    if (reference_->feedforward) feedforward = reference_->feedforward(t);
  } else {
    const bool escaping = config_.controller.escape_enabled &&
                          supervisor_.mode() == Mode::Escaping;
    Vec3 body_velocity;
    if (escaping) {
      body_velocity = supervisor_.desired_velocity(t);
    } else {
      body_velocity = config_.controller.trajectory.velocity(nominal_clock_);
      nominal_clock_ += control_dt_;
    }
    if (reset_pending_) {
      integrator_.reset(motor_angle_,
                        wheel_jacobian(theta, robot_) * body_velocity);
      reset_pending_ = false;
      target.angle = integrator_.angles();
      target.rate = wheel_jacobian(theta, robot_) * body_velocity;
    } else {
      target = to_joint_space(body_velocity, theta, robot_, integrator_,
                              control_dt_);
    }
  }
  Vec3 u;
  for (int i = 0; i < 3; ++i) {
    u[i] = pd_servo(target.angle[i], target.rate[i], motor_angle_[i],
                    motor_rate_[i], drive.gains, drive.actuator.torque_limit) +
           feedforward[i];
  }
  return u;
}

void Simulation::step_control() {
  const double t = time();
  physics_time_ = t;

  const ActuatorParams& act = config_.drive.actuator;
  Vec3 measured = act.sensor_mode == SensorMode::Spring ? spring_torque()
                                                        : transmitted_;
  for (int i = 0; i < 3; ++i) measured[i] += noise_.sample();
  sensed_ = measured;

  const EstimatorOutput& est = estimator_.update(t, wheel_angle_, measured);
  const Supervisor::Transition tr = supervisor_.update(
      t, est.base.pose, est.filtered, estimator_.detector());
  if (tr.entered || tr.restarted || tr.resumed) {
    if (config_.controller.escape_enabled) reset_pending_ = true;
  }
  if (tr.entered) {
    for (std::size_t i = 0; i < push_ended_.size(); ++i) {
      if (config_.pushes[i].end_on_escape) push_ended_[i] = true;
    }
  }
  command_ = control_command(t);

  TraceRow row;
  row.t = t;
  row.pose = base_.pose;
  row.velocity = base_.velocity;
  row.wheel_angle = wheel_angle_;
  row.sensed_torque = measured;
  row.dummy_s = dummy_.s;
  row.dummy_sdot = dummy_.sdot;
  row.bumper_deflection =
      contact_.active ? bumper_compression(contact_.depth, bumper_) : 0.0;
  row.force_true = applied_force_;
  row.force_est = est.filtered.head<2>();
  if (est.contact.located) {
    row.point_est = est.contact.point;
  } else {
    row.point_est = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
  }
  row.mode = supervisor_.mode() == Mode::Tracking ? 0 : 1;
  trace_.rows.push_back(row);
  if (std::isnan(contact_onset_) && applied_force_.norm() > 0.0) {
    contact_onset_ = t;
  }

  for (int k = 0; k < substeps_; ++k) {
    physics_step();
    physics_time_ = t + static_cast<double>(k + 1) * config_.sim.dt;
  }
  ++tick_;
}

const SimTrace& Simulation::run() {
  const auto ticks = static_cast<std::int64_t>(
      std::floor(config_.sim.duration / control_dt_ + 1e-9));
  while (tick_ <= ticks) step_control();
  return trace_;
}

void Simulation::physics_step() {
  const double dt = config_.sim.dt;
  const RobotParams& p = robot_;
  const ActuatorParams& act = config_.drive.actuator;
  const bool spring = act.sensor_mode == SensorMode::Spring;
  const bool stiction = config_.drive.stiction_enabled;
  const double motor_stick = stiction ? act.stiction_torque : 0.0;
  const double load_stick = stiction ? act.load_stiction_torque : 0.0;
  const double t = physics_time_;

  // External forces.
  Vec3 generalized = Vec3::Zero();
  Vec2 total = Vec2::Zero();
  double contact_force = 0.0;
  if (config_.dummy.enabled) {
    contact_ = resolve_contact(base_, dummy_.tip(), dummy_.sdot * dummy_.axis,
                               feature_, bumper_, p);
    if (contact_.active && contact_.force > 0.0) {
      Wrench w;
      w.force = contact_.force * contact_.inward;
      generalized += generalized_contact_force(base_.pose, w, contact_.point);
      total += w.force;
      contact_force = contact_.force;
    }
  }
  for (std::size_t i = 0; i < config_.pushes.size(); ++i) {
    if (push_ended_[i]) continue;
    const PushProfile& push = config_.pushes[i];
    const double mag = push.force_at(t);
    if (mag == 0.0) continue;
    const double theta = base_.pose.z();
    Wrench w;
    w.force = mag * rotate(theta, push.direction.normalized());
    const Vec2 point = base_.pose.head<2>() + rotate(theta, push.point);
    generalized += generalized_contact_force(base_.pose, w, point);
    total += w.force;
  }
  applied_force_ = total;

  // Base with wheel-side drivetrain torques.
  const double theta = base_.pose.z();
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  const JacobianRates jd = jacobian_time_derivative(theta, base_.velocity.z(), p);
  const Vec3 qd = jw * base_.velocity;
  const Vec3 tau_spring = spring_torque();

  Mat3 mass = effective_mass(theta, p, config_.variant);
  Vec3 bias = velocity_bias(base_, p, config_.variant);
  Vec3 wheel_torque;
  double wheel_stick;
  if (spring) {
    wheel_torque = tau_spring - act.load_damping * qd;
    wheel_stick = load_stick;
  } else {
    wheel_torque = command_ - (act.motor_damping + act.load_damping) * qd;
    wheel_stick = motor_stick + load_stick;
    mass += act.rotor_inertia * jw.transpose() * jw;
    bias += act.rotor_inertia * jw.transpose() * (jd.wheel * base_.velocity);
  }
  const Mat3 minv = invert3(mass);
  const Vec3 rhs = jw.transpose() * wheel_torque + generalized - bias;

  // Velocity-deadband friction on the wheels, solved jointly because the
  // wheels are coupled through the body.
  Vec3 friction = Vec3::Zero();
  if (wheel_stick > 0.0) {
    const Mat3 w = jw * minv * jw.transpose();
    std::array<bool, 3> stuck{};
    std::array<bool, 3> released{};
    std::array<bool, 3> crossed{};
    for (int i = 0; i < 3; ++i) {
      stuck[i] = std::abs(qd[i]) < act.stiction_deadband;
      if (!stuck[i]) friction[i] = -std::copysign(wheel_stick, qd[i]);
    }
    for (int iter = 0; iter < 12; ++iter) {
      std::vector<int> s;
      for (int i = 0; i < 3; ++i) {
        if (stuck[i]) {
          s.push_back(i);
          friction[i] = 0.0;
        }
      }
      const Vec3 a_free = minv * (rhs + jw.transpose() * friction);
      const Vec3 qdd_free = jw * a_free;
      bool changed = false;
      if (!s.empty()) {
        const auto n = static_cast<Eigen::Index>(s.size());
        Eigen::MatrixXd wss(n, n);
        Eigen::VectorXd target(n);
        for (Eigen::Index r = 0; r < n; ++r) {
          target[r] = -qd[s[r]] / dt - qdd_free[s[r]];
          for (Eigen::Index c = 0; c < n; ++c) wss(r, c) = w(s[r], s[c]);
        }
        const Eigen::VectorXd f = wss.ldlt().solve(target);
        int worst = -1;
        double excess = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
          friction[s[r]] = f[r];
          const double over = std::abs(f[r]) - wheel_stick;
          if (over > excess) {
            excess = over;
            worst = s[r];
          }
        }
        if (worst >= 0) {
          stuck[worst] = false;
          released[worst] = true;
          friction[worst] = std::copysign(wheel_stick, friction[worst]);
          for (int i : s) {
            if (i != worst) friction[i] = 0.0;
          }
          changed = true;
        }
      }
      if (!changed) {
        const Vec3 qd_next = qd + jw * (minv * (rhs + jw.transpose() *
                                                          friction)) * dt;
        for (int i = 0; i < 3; ++i) {
          if (!stuck[i] && !released[i] && !crossed[i] && qd[i] != 0.0 &&
              qd_next[i] * qd[i] < 0.0) {
            stuck[i] = true;
            crossed[i] = true;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
  }
  const Vec3 accel = minv * (rhs + jw.transpose() * friction);

  // Rotors.
  const Vec3 qdd = jw * accel + jd.wheel * base_.velocity;
  if (spring) {
    for (int i = 0; i < 3; ++i) {
      const double drive =
          command_[i] - act.motor_damping * motor_rate_[i] - tau_spring[i];
      const StictionResult st = coulomb_stiction(motor_rate_[i], drive,
                                                 motor_stick,
                                                 act.stiction_deadband);
      const double before = motor_rate_[i];
      motor_rate_[i] += (drive + st.torque) / act.rotor_inertia * dt;
      if (st.stuck || (before != 0.0 && before * motor_rate_[i] < 0.0 &&
                       motor_stick > 0.0)) {
        motor_rate_[i] = 0.0;
      }
      motor_angle_[i] += motor_rate_[i] * dt;
    }
  } else {
    const double share =
        wheel_stick > 0.0 ? motor_stick / wheel_stick : 0.0;
    transmitted_ = command_ - act.motor_damping * qd -
                   act.rotor_inertia * qdd + share * friction;
  }

  // Dummy on its slider.
  if (config_.dummy.enabled) {
    double f = config_.dummy.pull_force -
               contact_force * contact_.inward.dot(dummy_.axis);
    if (dummy_.s > dummy_.s_max) {
      const double c = 2.0 * std::sqrt(kStopStiffness * config_.dummy.mass);
      f += std::min(0.0, -kStopStiffness * (dummy_.s - dummy_.s_max) -
                             c * dummy_.sdot);
    }
    dummy_.sdot += f / config_.dummy.mass * dt;
    dummy_.s += dummy_.sdot * dt;
  }

  // Semi-implicit Euler on the base and the constrained wheel coordinates.
  base_.acceleration = accel;
  base_.velocity += accel * dt;
  wheel_rate_ = jw * base_.velocity;
  const Vec3 roller_rate = jr * base_.velocity;
  base_.pose += base_.velocity * dt;
  wheel_angle_ += wheel_rate_ * dt;
  roller_angle_ += roller_rate * dt;
  if (!spring) {
    motor_angle_ = wheel_angle_;
    motor_rate_ = wheel_rate_;
  }
  check_stability();
}

void Simulation::check_stability() const {
  const double r = robot_.wheel_radius;
  const bool bad =
      !(base_.velocity.head<2>().norm() <= kMaxSpeed) ||
      !(std::abs(dummy_.sdot) <= kMaxSpeed) ||
      !(r * wheel_rate_.cwiseAbs().maxCoeff() <= kMaxSpeed) ||
      !(r * motor_rate_.cwiseAbs().maxCoeff() <= kMaxSpeed);
  if (bad) {
    throw InstabilityError("speed above 100 m/s at t=" +
                           std::to_string(physics_time_));
  }
}

}  // namespace omniforce
