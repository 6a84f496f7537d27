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

#include "omniforce/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "omniforce/dynamics.hpp"
#include "omniforce/errors.hpp"
#include "omniforce/geometry.hpp"
#include "omniforce/kinematics.hpp"

namespace omniforce {

Vec3 residual_torques(const Vec3& sensed, const GeneralizedState& state,
                      const RobotParams& p) {
  return nominal_torque(state, p, ModelVariant::Reduced) - sensed;
}

Vec3 residual_wrench(const Vec3& residual, double theta, const RobotParams& p) {
  return wheel_jacobian(theta, p).transpose() * residual;
}

Line zero_moment_line_from_wrench(const Vec3& wrench, const Vec2& center,
                                  double min_force) {
  const Vec2 f = wrench.head<2>();
  const double f2 = f.squaredNorm();
  if (!(f2 >= min_force * min_force) || f2 == 0.0) {
    throw DegenerateForceError("force magnitude below localization floor");
  }
  Line line;
  line.point = center + (wrench.z() / f2) * Vec2(f.y(), -f.x());
  line.direction = f / std::sqrt(f2);
  return line;
}

Line zero_moment_line(const Vec3& residual, const BaseState& base,
                      const RobotParams& p, double min_force) {
  return zero_moment_line_from_wrench(
      residual_wrench(residual, base.pose.z(), p), base.pose.head<2>(),
      min_force);
}

LocatedPoint locate_contact(const Line& line, const Vec3& pose,
                            const RobotParams& p) {
  const auto hit = first_entry(line.point, line.direction, pose, p);
  if (!hit) {
    throw NoIntersectionError("zero-moment line misses the body outline");
  }
  if (hit->wheel < 0) return {hit->point, -1};
  return {closest_on_triangle(hit->point, triangle_vertices(pose, p)),
          hit->wheel};
}

Wrench solve_force(const Vec3& residual, const Vec2& /*contact*/,
                   const BaseState& base, const RobotParams& p) {
  Wrench w;
  w.force = residual_wrench(residual, base.pose.z(), p).head<2>();
  w.torque = 0.0;
  return w;
}

ContactEstimate estimate_contact(const Vec3& wrench, const Vec3& pose,
                                 const RobotParams& p, double min_force) {
  ContactEstimate est;
  const Vec2 f = wrench.head<2>();
  est.residual_norm = f.norm();
  est.magnitude = est.residual_norm;
  if (est.magnitude > 0.0) est.direction = f / est.magnitude;
  if (est.magnitude < min_force) return est;
  try {
    const Line line =
        zero_moment_line_from_wrench(wrench, pose.head<2>(), min_force);
    const LocatedPoint at = locate_contact(line, pose, p);
    est.point = at.point;
    est.wheel = at.wheel;
    est.located = true;
  } catch (const NoIntersectionError&) {
    est.located = false;
  }
  return est;
}

MovingAverage::MovingAverage(std::size_t length)
    : buffer_(length == 0 ? 1 : length, 0.0) {}

double MovingAverage::push(double value) {
  buffer_[head_] = value;
  head_ = (head_ + 1) % buffer_.size();
  // Compensated sum, so a window of equal samples averages exactly.
  double sum = 0.0;
  double carry = 0.0;
  for (double v : buffer_) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  value_ = (sum + carry) / static_cast<double>(buffer_.size());
  return value_;
}

void MovingAverage::reset() {
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  head_ = 0;
  value_ = 0.0;
}

CollisionDetector::CollisionDetector(const DetectorParams& params, double dt)
    : params_(params),
      average_(static_cast<std::size_t>(std::lround(params.window / dt))),
      trigger_time_(std::numeric_limits<double>::quiet_NaN()) {}

bool CollisionDetector::update(double magnitude, double t) {
  const double mean = average_.push(magnitude);
  if (!triggered_ && mean > params_.threshold) {
    triggered_ = true;
    trigger_time_ = t;
    return true;
  }
  return false;
}

void CollisionDetector::rearm() {
  triggered_ = false;
  trigger_time_ = std::numeric_limits<double>::quiet_NaN();
}

double detect(const std::vector<double>& magnitudes, const DetectorParams& d,
              double dt, double t0) {
  CollisionDetector det(d, dt);
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    if (det.update(magnitudes[k], t0 + static_cast<double>(k) * dt)) {
      return det.trigger_time();
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

StateVariableFilter::StateVariableFilter(double cutoff_hz, double dt)
    : omega_(2.0 * std::numbers::pi * cutoff_hz), dt_(dt) {
  Eigen::Matrix2d a;
  a << 0.0, 1.0, -omega_ * omega_, -std::sqrt(2.0) * omega_;
  const Eigen::Vector2d b(0.0, omega_ * omega_);
  // Truncated series for exp(A dt) and its integral; |A dt| is well below 1
  // for any cutoff under the Nyquist rate, so 40 terms reach machine precision.
  Eigen::Matrix2d term = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d integral_term = Eigen::Matrix2d::Identity() * dt;
  phi_ = term;
  Eigen::Matrix2d integral = integral_term;
  for (int k = 1; k < 40; ++k) {
    term = term * a * dt / static_cast<double>(k);
    integral_term = integral_term * a * dt / static_cast<double>(k + 1);
    phi_ += term;
    integral += integral_term;
  }
  gamma_ = integral * b;
}

void StateVariableFilter::reset(double value, double rate) {
  // Steady state of a ramp through `value` with slope `rate`, so a moving
  // start does not excite the filter.
  const Eigen::Vector2d rhs = Eigen::Vector2d(rate * dt_, 0.0) - gamma_ * value;
  const Eigen::Vector2d x =
      (phi_ - Eigen::Matrix2d::Identity()).partialPivLu().solve(rhs);
  y_ = x.x();
  yd_ = x.y();
  ydd_ = 0.0;
  input_ = value;
}

void StateVariableFilter::update(double input) {
  input_ = input;
  const Eigen::Vector2d x = phi_ * Eigen::Vector2d(y_, yd_) + gamma_ * input;
  // Mean acceleration over the step. The instantaneous derivative at the
  // step end is biased by the held input on ramps.
  ydd_ = (x.y() - yd_) / dt_;
  y_ = x.x();
  yd_ = x.y();
}

void EstimatorParams::validate() const {
  if (!(rate > 0.0)) throw ConfigError("estimator.rate", "must be > 0");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= 0.5 * rate) {
    throw ConfigError("estimator.cutoff_hz", "must lie in (0, rate/2)");
  }
  if (!(window >= 1.0 / rate)) {
    throw ConfigError("estimator.window", "must cover at least one sample");
  }
  if (!(threshold > 0.0)) {
    throw ConfigError("estimator.threshold", "must be > 0");
  }
  if (degenerate_force < 0.0) {
    throw ConfigError("estimator.degenerate_force", "must be >= 0");
  }
}

ForceEstimator::ForceEstimator(const RobotParams& robot,
                               const EstimatorParams& params, const Vec3& pose,
                               const Vec3& wheel_angles,
                               const Vec3& wheel_rates)
    : robot_(robot),
      params_(params),
      detector_(DetectorParams{params.threshold, params.window},
                1.0 / params.rate),
      pose_(pose),
      last_angles_(wheel_angles),
      theta0_(pose.z()),
      angles0_(wheel_angles) {
  const double dt = 1.0 / params.rate;
  const auto window = static_cast<std::size_t>(std::lround(params.window / dt));
  for (int i = 0; i < 3; ++i) {
    filters_.emplace_back(params.cutoff_hz, dt);
    filters_.back().reset(wheel_angles[i], wheel_rates[i]);
    wrench_avg_.emplace_back(window);
  }
  out_.base.pose = pose;
  out_.base.velocity = wheel_jacobian_inverse(pose.z(), robot) * wheel_rates;
}

const EstimatorOutput& ForceEstimator::update(double t,
                                              const Vec3& wheel_angles,
                                              const Vec3& sensed) {
  const RobotParams& p = robot_;
  Vec3 rate, accel;
  for (int i = 0; i < 3; ++i) {
    filters_[i].update(wheel_angles[i]);
    rate[i] = filters_[i].rate();
    accel[i] = filters_[i].accel();
  }

  // Heading follows from the wheel-angle sum exactly; position is integrated
  // at the midpoint heading.
  const double theta = theta0_ + p.wheel_radius / (3.0 * p.wheel_distance) *
                                     (wheel_angles - angles0_).sum();
  const double theta_mid = 0.5 * (pose_.z() + theta);
  const Vec3 step =
      wheel_jacobian_inverse(theta_mid, p) * (wheel_angles - last_angles_);
  pose_.x() += step.x();
  pose_.y() += step.y();
  pose_.z() = theta;
  last_angles_ = wheel_angles;

  GeneralizedState state;
  state.base.pose = pose_;
  state.base.velocity = wheel_jacobian_inverse(theta, p) * rate;
  state.base.acceleration =
      body_accel_from_wheels(rate, accel, theta, state.base.velocity.z(), p);
  state.wheels.wheel_angle = wheel_angles;
  state.wheels.wheel_rate = rate;
  state.wheels.wheel_accel = accel;
  state.wheels.roller_rate = roller_jacobian(theta, p) * state.base.velocity;

  const Vec3 r = residual_torques(sensed, state, p);
  out_.raw = residual_wrench(r, theta, p);
  for (int i = 0; i < 3; ++i) out_.filtered[i] = wrench_avg_[i].push(out_.raw[i]);
  out_.raw_magnitude = out_.raw.head<2>().norm();
  out_.triggered_now = detector_.update(out_.raw_magnitude, t);
  out_.average_magnitude = detector_.average();
  out_.contact =
      estimate_contact(out_.filtered, pose_, p, params_.degenerate_force);
  out_.base = state.base;
  return out_;
}

}  // namespace omniforce
