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

#include <cstddef>
#include <vector>

#include "omniforce/types.hpp"

namespace omniforce {

/// Candidate contact locus: point + s * direction, direction parallel to
/// the estimated force.
struct Line {
  Vec2 point = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();
};

struct ContactEstimate {
  Vec2 point = Vec2::Zero();      // on the triangular outline, world frame
  Vec2 direction = Vec2::Zero();  // unit force direction
  double magnitude = 0.0;         // N
  double residual_norm = 0.0;     // N, |rows 1-2 of the mapped residual|
  int wheel = -1;                 // wheel index when a disc is hit first
  bool located = false;
};

/// r = T_nominal(reduced model) - tau_s. `state` must carry accelerations
/// and roller rates reconstructed from wheel data.
Vec3 residual_torques(const Vec3& sensed, const GeneralizedState& state,
                      const RobotParams& p);

/// (Fx, Fy, m_z) = J_w^T r: the residual expressed as a body-center wrench.
Vec3 residual_wrench(const Vec3& residual, double theta, const RobotParams& p);

/// Line of points where the residual force produces the residual moment.
/// Throws DegenerateForceError when |F| < min_force.
Line zero_moment_line(const Vec3& residual, const BaseState& base,
                      const RobotParams& p, double min_force = 0.05);

/// Same construction from an already mapped (Fx, Fy, m_z).
Line zero_moment_line_from_wrench(const Vec3& wrench, const Vec2& center,
                                  double min_force = 0.05);

struct LocatedPoint {
  Vec2 point = Vec2::Zero();
  int wheel = -1;
};

/// Pushing-side entry of the line into the body outline. A wheel-disc entry
/// is reported at the nearest triangle point with the wheel index set.
/// Throws NoIntersectionError when the line misses the body.
LocatedPoint locate_contact(const Line& line, const Vec3& pose,
                            const RobotParams& p);

/// Planar force from rows 1-2 of J_w^T r. The torque entry is always zero.
Wrench solve_force(const Vec3& residual, const Vec2& contact,
                   const BaseState& base, const RobotParams& p);

/// Full pipeline on a mapped wrench: line, localization, magnitude.
ContactEstimate estimate_contact(const Vec3& wrench, const Vec3& pose,
                                 const RobotParams& p, double min_force = 0.05);

/// Rectangular moving average over a fixed number of samples. The buffer
/// starts filled with zeros.
class MovingAverage {
 public:
  explicit MovingAverage(std::size_t length);

  double push(double value);
  double value() const { return value_; }
  std::size_t length() const { return buffer_.size(); }
  void reset();

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;
  double value_ = 0.0;
};

struct DetectorParams {
  double threshold = 0.8;  // N
  double window = 0.05;    // s
};

/// Latches on the first sample whose windowed mean magnitude exceeds the
/// threshold.
class CollisionDetector {
 public:
  CollisionDetector(const DetectorParams& params, double dt);

  /// Returns true only on the sample that trips the detector.
  bool update(double magnitude, double t);

  bool triggered() const { return triggered_; }
  double trigger_time() const { return trigger_time_; }
  double average() const { return average_.value(); }
  double threshold() const { return params_.threshold; }

  /// Clears the latch; the averaging window is kept.
  void rearm();

 private:
  DetectorParams params_;
  MovingAverage average_;
  bool triggered_ = false;
  double trigger_time_;
};

/// Trigger time of a uniformly sampled magnitude stream starting at t0, or
/// NaN when the detector never fires.
double detect(const std::vector<double>& magnitudes, const DetectorParams& d,
              double dt, double t0 = 0.0);

/// Second-order Butterworth state-variable filter. Produces smoothed value,
/// first and second derivative of a sampled signal. Discretized exactly for
/// a zero-order-held input.
class StateVariableFilter {
 public:
  StateVariableFilter(double cutoff_hz, double dt);

  /// Ramp steady state whose next update() input is `value`.
  void reset(double value, double rate = 0.0);
  void update(double input);

  double value() const { return y_; }
  double rate() const { return yd_; }
  double accel() const { return ydd_; }

 private:
  double omega_;
  double dt_;
  Eigen::Matrix2d phi_;
  Eigen::Vector2d gamma_;
  double y_ = 0.0;
  double yd_ = 0.0;
  double ydd_ = 0.0;
  double input_ = 0.0;
};

struct EstimatorParams {
  double cutoff_hz = 30.0;        // acceleration filter
  double window = 0.05;           // s, wrench and detector averaging
  double threshold = 0.8;         // N
  double degenerate_force = 0.05; // N, below this no localization
  double rate = 1000.0;           // Hz

  void validate() const;
};

struct EstimatorOutput {
  Vec3 raw = Vec3::Zero();       // unfiltered (Fx, Fy, m_z)
  Vec3 filtered = Vec3::Zero();  // windowed mean of raw
  double raw_magnitude = 0.0;
  double average_magnitude = 0.0;
  ContactEstimate contact;
  bool triggered_now = false;
  BaseState base;                // odometry pose, filtered rates
};

/// Streaming estimator fed with encoder wheel angles and sensor torques.
class ForceEstimator {
 public:
  ForceEstimator(const RobotParams& robot, const EstimatorParams& params,
                 const Vec3& pose, const Vec3& wheel_angles,
                 const Vec3& wheel_rates = Vec3::Zero());

  const EstimatorOutput& update(double t, const Vec3& wheel_angles,
                                const Vec3& sensed);

  const EstimatorOutput& output() const { return out_; }
  CollisionDetector& detector() { return detector_; }
  const CollisionDetector& detector() const { return detector_; }

 private:
  RobotParams robot_;
  EstimatorParams params_;
  std::vector<StateVariableFilter> filters_;
  std::vector<MovingAverage> wrench_avg_;
  CollisionDetector detector_;
  Vec3 pose_;
  Vec3 last_angles_;
  double theta0_;
  Vec3 angles0_;
  EstimatorOutput out_;
};

}  // namespace omniforce
