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

#include "omniforce/harness.hpp"

namespace omniforce {

const std::vector<std::pair<std::string, std::string>>& preset_files() {
  static const std::vector<std::pair<std::string, std::string>> files = {
      {"profiles/hardware.yaml", R"yaml(# Hardware-like imperfections for the static push suite: drivetrain
# stiction on both sides of the torque sensor and sensor noise.
actuator:
  stiction_enabled: true
  noise_enabled: true
  stiction_torque: 1.5
  load_stiction_torque: 0.08
  torque_noise_sd: 0.02
)yaml"},
      {"static_push_0.yaml", R"yaml(# Static 10 N push on one side wall, robot pose 0.
id: static_push_0
experiment: STATIC_PUSH
profile: profiles/hardware.yaml
actuator:
  motors_enabled: false
controller:
  escape_enabled: false
pushes:
  - point: [0.088, 0.1525]      # body frame, m
    direction: [-0.5, -0.866]   # body frame
    magnitude: 10.0
    start: 0.1
    ramp: 0.3
    hold: 1.0
sim:
  duration: 1.8
  seed: 1
initial:
  pose: [0.0, 0.0, 0.0]
)yaml"},
      {"static_push_1.yaml", R"yaml(# Static 10 N push on one side wall, robot pose 1.
id: static_push_1
experiment: STATIC_PUSH
profile: profiles/hardware.yaml
actuator:
  motors_enabled: false
controller:
  escape_enabled: false
pushes:
  - point: [0.1673, 0.1068]      # body frame, m
    direction: [-0.1736, -0.9848]   # body frame
    magnitude: 10.0
    start: 0.1
    ramp: 0.3
    hold: 1.0
sim:
  duration: 1.8
  seed: 2
initial:
  pose: [0.5, -0.2, 0.6]
)yaml"},
      {"static_push_2.yaml", R"yaml(# Static 10 N push on one side wall, robot pose 2.
id: static_push_2
experiment: STATIC_PUSH
profile: profiles/hardware.yaml
actuator:
  motors_enabled: false
controller:
  escape_enabled: false
pushes:
  - point: [0.0088, 0.1982]      # body frame, m
    direction: [-0.8192, -0.5736]   # body frame
    magnitude: 10.0
    start: 0.1
    ramp: 0.3
    hold: 1.0
sim:
  duration: 1.8
  seed: 3
initial:
  pose: [-0.3, 0.4, -1.2]
)yaml"},
      {"static_push_3.yaml", R"yaml(# Static 10 N push on one side wall, robot pose 3.
id: static_push_3
experiment: STATIC_PUSH
profile: profiles/hardware.yaml
actuator:
  motors_enabled: false
controller:
  escape_enabled: false
pushes:
  - point: [0.1303, 0.1281]      # body frame, m
    direction: [-0.342, -0.9397]   # body frame
    magnitude: 10.0
    start: 0.1
    ramp: 0.3
    hold: 1.0
sim:
  duration: 1.8
  seed: 4
initial:
  pose: [1.0, 1.0, 2.5]
)yaml"},
      {"static_push_ideal.yaml", R"yaml(# Static 10 N push on one side wall, noiseless rigid-wheel model.
id: static_push_ideal
experiment: STATIC_PUSH
robot:
  model: REDUCED
actuator:
  stiction_enabled: false
  noise_enabled: false
  motors_enabled: false
controller:
  escape_enabled: false
pushes:
  - point: [0.088, 0.1525]      # body frame, m
    direction: [-0.5, -0.866]   # body frame
    magnitude: 10.0
    start: 0.1
    ramp: 0.3
    hold: 1.0
sim:
  duration: 1.8
  seed: 1
initial:
  pose: [0.0, 0.0, 0.0]
)yaml"},
      {"dummy_pu.yaml", R"yaml(# Slider dummy pulled into the resting robot, PU bumper.
# The release gap gives a 0.5 m/s impact without slider friction.
id: dummy_pu
experiment: DUMMY_INTO_ROBOT
dummy:
  mass: 9.08
  pull_force: 44.54
  release_gap: 0.02548
  axis: [-1.0, 0.0]
  aim: [0.0, 0.0]
  contact_height: 0.2
  bumper:
    kind: PU
sim:
  duration: 2.0
initial:
  pose: [0.0, 0.0, 1.0471975511965976]   # flat side facing +x
)yaml"},
      {"dummy_spring.yaml", R"yaml(# Slider dummy pulled into the resting robot, SPRING bumper.
# The release gap gives a 0.5 m/s impact without slider friction.
id: dummy_spring
experiment: DUMMY_INTO_ROBOT
dummy:
  mass: 9.08
  pull_force: 44.54
  release_gap: 0.02548
  axis: [-1.0, 0.0]
  aim: [0.0, 0.0]
  contact_height: 0.2
  bumper:
    kind: SPRING
sim:
  duration: 2.0
initial:
  pose: [0.0, 0.0, 1.0471975511965976]   # flat side facing +x
)yaml"},
      {"dummy_magnet.yaml", R"yaml(# Slider dummy pulled into the resting robot, MAGNET bumper.
# The release gap gives a 0.5 m/s impact without slider friction.
id: dummy_magnet
experiment: DUMMY_INTO_ROBOT
dummy:
  mass: 9.08
  pull_force: 44.54
  release_gap: 0.02548
  axis: [-1.0, 0.0]
  aim: [0.0, 0.0]
  contact_height: 0.2
  bumper:
    kind: MAGNET
sim:
  duration: 2.0
initial:
  pose: [0.0, 0.0, 1.0471975511965976]   # flat side facing +x
)yaml"},
      {"robot_into_dummy.yaml", R"yaml(# Robot driving at 0.22 m/s into a resting dummy with the MAGNET bumper.
id: robot_into_dummy
experiment: ROBOT_INTO_DUMMY
controller:
  trajectory:
    kind: LINE
    speed: 0.22
    heading: 0.0
dummy:
  mass: 13.62
  pull_force: 0.0
  release_gap: 0.1
  axis: [-1.0, 0.0]
  aim: [0.0, 0.0]
  contact_height: 0.2
  bumper:
    kind: MAGNET
sim:
  duration: 2.5
initial:
  pose: [0.0, 0.0, 1.0471975511965976]
  velocity: [0.22, 0.0, 0.0]
)yaml"},
      {"arc_with_pushes.yaml", R"yaml(# 1.5 m diameter circle at 0.16 m/s, interrupted by two pushes.
id: arc_with_pushes
experiment: ARC_WITH_PUSHES
# Stiction is off: wheel 0 reverses at the start of the circle and the
# breakaway transient alone would trip the 0.8 N detector.
actuator:
  stiction_enabled: false
controller:
  trajectory:
    kind: ARC
    speed: 0.16
    radius: 0.75
    heading: 0.0
pushes:
  - point: [0.088, 0.1525]
    direction: [-0.5, -0.866]
    magnitude: 10.0
    start: 3.0
    ramp: 0.1
    hold: 0.5
    end_on_escape: true
  - point: [0.1303, 0.1281]
    direction: [-0.342, -0.9397]
    magnitude: 10.0
    start: 10.0
    ramp: 0.1
    hold: 0.5
    end_on_escape: true
sim:
  duration: 16.0
initial:
  velocity: [0.16, 0.0, 0.0]
)yaml"},
      {"calib_arc_w0.yaml", R"yaml(# Roller friction identification on the ARC_W0 wheel trajectory.
id: calib_arc_w0
experiment: CALIBRATION
robot:
  roller_friction: 0.2
  friction_scale: 0.4
actuator:
  stiction_enabled: false
  noise_enabled: true
calibration:
  trajectory: ARC_W0
  omega: 0.2
  duration: 10.0
  feedforward: true
)yaml"},
      {"calib_pivot_w2.yaml", R"yaml(# Roller friction identification on the PIVOT_W2 wheel trajectory.
id: calib_pivot_w2
experiment: CALIBRATION
robot:
  roller_friction: 0.2
  friction_scale: 0.4
actuator:
  stiction_enabled: false
  noise_enabled: true
calibration:
  trajectory: PIVOT_W2
  omega: 0.2
  duration: 10.0
  feedforward: true
)yaml"},
  };
  return files;
}

}  // namespace omniforce
