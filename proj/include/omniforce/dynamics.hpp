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

/// FULL keeps wheel and roller inertia; REDUCED drops both (I_w = I_r = 0),
/// which is the model the force estimator works with.
enum class ModelVariant { Full, Reduced };

/// Lagrange multipliers of the wheel and roller rolling constraints.
struct ConstraintForces {
  Vec3 wheel = Vec3::Zero();
  Vec3 roller = Vec3::Zero();
};

struct DynamicsResult {
  Vec3 base_accel = Vec3::Zero();
  Vec3 wheel_accel = Vec3::Zero();
  Vec3 roller_accel = Vec3::Zero();
  ConstraintForces constraint;
};

/// tanh-softened Coulomb roller friction, B_r * tanh(alpha * qdot_r).
Vec3 roller_friction(const Vec3& roller_rate, const RobotParams& p);

/// Body mass matrix diag(M, M, I_b).
Mat3 body_mass_matrix(const RobotParams& p);

/// Maps body velocity to the velocity of a point fixed to the body at
/// `point` (world frame); third row passes thetadot through.
Mat3 contact_jacobian(const Vec3& pose, const Vec2& point);

/// J_ext^T F: generalized body force of `wrench` applied at `point`.
Vec3 generalized_contact_force(const Vec3& pose, const Wrench& wrench,
                               const Vec2& point);

/// Body-space inertia with wheel and roller inertia reflected through the
/// rolling constraints: M + I_w Jw^T Jw + I_r Jr^T Jr.
Mat3 effective_mass(double theta, const RobotParams& p, ModelVariant variant);

/// Velocity-dependent body force: Jdot terms of the reflected inertia plus
/// roller friction, so that M_eff xddot = Jw^T T + J_ext^T F - bias.
Vec3 velocity_bias(const BaseState& base, const RobotParams& p,
                   ModelVariant variant);

/// Torque-sensor reading predicted without external force:
///   T = Jw^-T [M xddot + Jr^T (I_r qddot_r + B_r)] + I_w qddot_w.
/// Uses state.base.acceleration and the roller rate/acceleration and wheel
/// acceleration stored in state.wheels.
Vec3 nominal_torque(const GeneralizedState& state, const RobotParams& p,
                    ModelVariant variant = ModelVariant::Full);

/// Constrained forward dynamics with wheel output torques `wheel_torque` and
/// an external wrench `applied` acting on the body at `contact_point`.
/// Solves M_eff xddot = Jw^T T - Jr^T B_r + J_ext^T F - Jdot terms; wheel and
/// roller accelerations follow from the differentiated constraints.
DynamicsResult forward_dynamics(const GeneralizedState& state,
                                const Vec3& wheel_torque,
                                const Wrench& applied,
                                const Vec2& contact_point,
                                const RobotParams& p,
                                ModelVariant variant = ModelVariant::Full);

/// Kinetic energy of body, wheels and rollers at the constrained rates.
double kinetic_energy(const BaseState& base, const RobotParams& p,
                      ModelVariant variant);

}  // namespace omniforce
