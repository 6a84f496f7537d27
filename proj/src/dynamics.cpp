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

#include "omniforce/dynamics.hpp"

#include <cmath>

#include "omniforce/kinematics.hpp"

namespace omniforce {
namespace {

double wheel_inertia(const RobotParams& p, ModelVariant v) {
  return v == ModelVariant::Full ? p.wheel_inertia : 0.0;
}

double roller_inertia(const RobotParams& p, ModelVariant v) {
  return v == ModelVariant::Full ? p.roller_inertia : 0.0;
}

}  // namespace

Vec3 roller_friction(const Vec3& roller_rate, const RobotParams& p) {
  Vec3 b;
  for (int i = 0; i < 3; ++i) {
    b[i] = p.roller_friction * std::tanh(p.friction_scale * roller_rate[i]);
  }
  return b;
}

Mat3 body_mass_matrix(const RobotParams& p) {
  return Vec3(p.body_mass, p.body_mass, p.body_inertia).asDiagonal();
}

Mat3 contact_jacobian(const Vec3& pose, const Vec2& point) {
  Mat3 j = Mat3::Identity();
  j(0, 2) = pose.y() - point.y();
  j(1, 2) = point.x() - pose.x();
  return j;
}

Vec3 generalized_contact_force(const Vec3& pose, const Wrench& wrench,
                               const Vec2& point) {
  const Vec3 f(wrench.force.x(), wrench.force.y(), wrench.torque);
  return contact_jacobian(pose, point).transpose() * f;
}

Mat3 effective_mass(double theta, const RobotParams& p, ModelVariant variant) {
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  return body_mass_matrix(p) +
         wheel_inertia(p, variant) * jw.transpose() * jw +
         roller_inertia(p, variant) * jr.transpose() * jr;
}

Vec3 velocity_bias(const BaseState& base, const RobotParams& p,
                   ModelVariant variant) {
  const double theta = base.pose.z();
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  const JacobianRates d = jacobian_time_derivative(theta, base.velocity.z(), p);
  const Vec3 friction = roller_friction(jr * base.velocity, p);
  return wheel_inertia(p, variant) * jw.transpose() * (d.wheel * base.velocity) +
         roller_inertia(p, variant) * jr.transpose() *
             (d.roller * base.velocity) +
         jr.transpose() * friction;
}

Vec3 nominal_torque(const GeneralizedState& state, const RobotParams& p,
                    ModelVariant variant) {
  const double theta = state.base.pose.z();
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  const Vec3 friction = roller_friction(state.wheels.roller_rate, p);
  const Vec3 body = body_mass_matrix(p) * state.base.acceleration +
                    jr.transpose() * (roller_inertia(p, variant) *
                                          state.wheels.roller_accel +
                                      friction);
  return invert3(jw.transpose()) * body +
         wheel_inertia(p, variant) * state.wheels.wheel_accel;
}

DynamicsResult forward_dynamics(const GeneralizedState& state,
                                const Vec3& wheel_torque,
                                const Wrench& applied,
                                const Vec2& contact_point,
                                const RobotParams& p, ModelVariant variant) {
  const BaseState& base = state.base;
  const double theta = base.pose.z();
  const Mat3 jw = wheel_jacobian(theta, p);
  const Mat3 jr = roller_jacobian(theta, p);
  const JacobianRates d = jacobian_time_derivative(theta, base.velocity.z(), p);

  const Vec3 rhs = jw.transpose() * wheel_torque +
                   generalized_contact_force(base.pose, applied, contact_point) -
                   velocity_bias(base, p, variant);

  DynamicsResult out;
  out.base_accel = invert3(effective_mass(theta, p, variant)) * rhs;
  out.wheel_accel = jw * out.base_accel + d.wheel * base.velocity;
  out.roller_accel = jr * out.base_accel + d.roller * base.velocity;
  const Vec3 friction = roller_friction(jr * base.velocity, p);
  out.constraint.wheel =
      wheel_inertia(p, variant) * out.wheel_accel - wheel_torque;
  out.constraint.roller =
      roller_inertia(p, variant) * out.roller_accel + friction;
  return out;
}

double kinetic_energy(const BaseState& base, const RobotParams& p,
                      ModelVariant variant) {
  const double theta = base.pose.z();
  const Vec3 qw = wheel_jacobian(theta, p) * base.velocity;
  const Vec3 qr = roller_jacobian(theta, p) * base.velocity;
  return 0.5 * base.velocity.dot(body_mass_matrix(p) * base.velocity) +
         0.5 * wheel_inertia(p, variant) * qw.squaredNorm() +
         0.5 * roller_inertia(p, variant) * qr.squaredNorm();
}

}  // namespace omniforce
