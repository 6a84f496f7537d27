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

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omniforce/config.hpp"
#include "omniforce/trace.hpp"

namespace omniforce {

/// One acceptance bound evaluated on a run.
struct Check {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};

/// Summary numbers of one scenario. NaN marks quantities that do not apply.
struct Report {
  std::string id;
  Experiment experiment = Experiment::StaticPush;
  double detection_latency_ms = 0.0;
  Vec3 peak_torque = Vec3::Zero();  // N m, first contact interval
  double magnitude = 0.0;            // N, estimated
  double magnitude_error_pct = 0.0;
  double direction_error_pct = 0.0;  // of a full turn
  double location_error_m = 0.0;
  double location_error_pct = 0.0;   // of side_length
  double escape_displacement = 0.0;  // m, measured at T_esc after trigger
  double escape_expected = 0.0;      // m, |F_trigger| / B_des
  double tip_proxy_max = 0.0;
  double roller_friction = 0.0;      // calibration fit
  double friction_scale = 0.0;
  double fit_rms = 0.0;
  std::vector<Check> checks;

  bool passed() const;
};

/// Report of a simulation run. Depends only on the configuration and the
/// trace, so replaying a stored trace reproduces it exactly.
Report compute_report(const ScenarioConfig& config, const SimTrace& trace);

/// Report of a calibration run from its measured torques.
Report calibration_report(const ScenarioConfig& config, const FitResult& fit);

/// Tip-over proxy per trace row: overturning moment of the contact force at
/// its height over the gravity moment at the wheel distance.
std::vector<double> tip_proxy(const ScenarioConfig& config,
                              const SimTrace& trace);

/// Column names of the report CSV.
const std::vector<std::string>& report_columns();

/// One CSV row per report; `status` is "ok" or an error message.
void write_report_csv(std::ostream& out,
                      const std::vector<std::pair<Report, std::string>>& rows);
void write_report_text(std::ostream& out, const Report& report);

/// Measured sensor torques from a CSV with t and tau_s0..2 columns.
std::vector<Vec3> read_torque_csv(const std::string& path);
void write_torque_csv(const std::string& path, double rate,
                      const std::vector<Vec3>& torques);

/// Trace serialized and parsed back, so in-memory reports match replays.
SimTrace roundtrip_trace(const SimTrace& trace);

struct RunOutput {
  SimTrace trace;
  Report report;
};

/// Simulates a scenario without touching the file system.
RunOutput simulate_scenario(const ScenarioConfig& config);

/// Runs and writes config.yaml, trace.csv (or torques.csv for
/// calibrations), report.csv and report.txt into `out_dir`/<id>.
Report run_scenario(const ScenarioConfig& config, const std::string& out_dir);

/// Fits roller friction to measured torques (simulated when `measured` is
/// empty and the config names no file).
Report calibrate_scenario(const ScenarioConfig& config,
                          const std::string& out_dir,
                          const std::string& measured = "");

/// Recomputes the report of a stored trace.
Report replay_trace(const ScenarioConfig& config, const std::string& trace);

/// Config paths matching a glob pattern (wildcards in the file name only),
/// sorted. A path without wildcards is returned as is.
std::vector<std::string> expand_glob(const std::string& pattern);

struct BatchEntry {
  std::string path;
  std::optional<Report> report;
  std::string error;  // empty on success
};

/// Runs configs concurrently; one failure does not stop the others. Output
/// order follows `paths`. Writes summary.csv and summary.txt to `out_dir`.
std::vector<BatchEntry> run_batch(const std::vector<std::string>& paths,
                                  const std::string& out_dir, int parallel,
                                  std::optional<std::uint64_t> seed = {});

void write_summary_text(std::ostream& out,
                        const std::vector<BatchEntry>& entries);

/// Scenario files of the experiment suite: (file name, YAML text).
const std::vector<std::pair<std::string, std::string>>& preset_files();

/// Writes preset_files() into `dir`, returning the written paths.
std::vector<std::string> write_presets(const std::string& dir);

}  // namespace omniforce
