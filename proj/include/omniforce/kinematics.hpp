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

#include "omniforce/types.hpp"

namespace omniforce {

/// Maps body velocity (xdot, ydot, thetadot) to wheel spin rates.
/// Row i is (1/r_w) * (-sin(theta + phi_i), cos(theta + phi_i), R).
Mat3 wheel_jacobian(double theta, const RobotParams& p);

/// Maps body velocity to side-roller spin rates.
/// Row i is (1/r_r) * (cos(theta + phi_i), sin(theta + phi_i), 0).
Mat3 roller_jacobian(double theta, const RobotParams& p);

/// Closed-form adjugate inverse. Throws SingularMatrixError when the
/// Frobenius condition estimate exceeds 1e12.
Mat3 invert3(const Mat3& m);

/// Body velocity from wheel rates.
Mat3 wheel_jacobian_inverse(double theta, const RobotParams& p);

struct JacobianRates {
  Mat3 wheel;
  Mat3 roller;
};

/// Time derivatives of both Jacobians for heading rate `theta_rate`.
JacobianRates jacobian_time_derivative(double theta, double theta_rate,
                                       const RobotParams& p);

/// Body acceleration from wheel rates and accelerations:
///   xddot = J^-1 qddot_w + d(J^-1)/dt qdot_w,  d(J^-1)/dt = -J^-1 Jdot J^-1.
Vec3 body_accel_from_wheels(const Vec3& wheel_rate, const Vec3& wheel_accel,
                            double theta, double theta_rate,
                            const RobotParams& p);

/// Wheel and roller rates/accelerations implied by rolling without slip.
/// Angles in `base_angles` are copied through unchanged.
WheelState constrained_wheel_state(const BaseState& base,
                                   const WheelState& base_angles,
                                   const RobotParams& p);

}  // namespace omniforce
