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

#include <string>

#include "omniforce/calibration.hpp"
#include "omniforce/simulator.hpp"

namespace omniforce {

enum class Experiment {
  StaticPush,
  DummyIntoRobot,
  RobotIntoDummy,
  ArcWithPushes,
  Calibration
};

const char* experiment_name(Experiment e);

struct CalibrationConfig {
  CalibrationTrajectory trajectory = CalibrationTrajectory::ArcW0;
  double omega = 0.2;      // Hz
  double duration = 10.0;  // s
  bool feedforward = true;
  std::string measured;    // optional torque CSV replacing the simulation
  FitOptions fit;

  void validate() const;
};

/// Everything needed to reproduce one experiment.
struct ScenarioConfig {
  std::string id = "scenario";
  Experiment experiment = Experiment::StaticPush;
  WorldConfig world;
  CalibrationConfig calibration;

  void validate() const;
};

/// Parses YAML text. A top-level `profile:` names another YAML file,
/// resolved against `base_dir`, whose keys are merged over this document.
/// Unknown keys and invalid values raise ConfigError naming the field.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& base_dir = ".");

ScenarioConfig load_config(const std::string& path);

/// Complete YAML rendering of every field (profile already merged).
std::string serialize_config(const ScenarioConfig& config);

}  // namespace omniforce
