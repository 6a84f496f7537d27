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

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "omniforce/errors.hpp"
#include "omniforce/geometry.hpp"

namespace omniforce {
namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGravity = 9.81;
constexpr double kEstimateWindow = 0.1;  // s, averaged at the end of a hold

Vec2 rotate2(double theta, const Vec2& v) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

Check band(const std::string& name, double value, double lower,
           double upper) {
  Check c{name, value, lower, upper, false};
  c.pass = value >= lower && value <= upper;
  return c;
}

double escape_duration(const ControllerConfig& c) {
  return c.supervisor.escape_duration > 0.0
             ? c.supervisor.escape_duration
             : 5.0 * c.admittance.mass / c.admittance.damping;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

std::string trace_text(const SimTrace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  return out.str();
}

void write_reports(const fs::path& dir, const Report& report) {
  std::ostringstream csv, txt;
  write_report_csv(csv, {{report, "ok"}});
  write_report_text(txt, report);
  write_file(dir / "report.csv", csv.str());
  write_file(dir / "report.txt", txt.str());
}

std::string cell(double v) { return format_number(v); }

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

std::vector<double> tip_proxy(const ScenarioConfig& config,
                              const SimTrace& trace) {
  const WorldConfig& w = config.world;
  double height = 0.0;
  if (w.dummy.enabled) height = w.dummy.contact_height;
  for (const PushProfile& p : w.pushes) height = std::max(height, p.contact_height);
  const double restoring =
      w.robot.body_mass * kGravity * w.robot.wheel_distance;
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) {
    out.push_back(height * row.force_true.norm() / restoring);
  }
  return out;
}

Report compute_report(const ScenarioConfig& config, const SimTrace& trace) {
  const WorldConfig& w = config.world;
  Report r;
  r.id = config.id;
  r.experiment = config.experiment;
  r.detection_latency_ms = kNaN;
  r.peak_torque = Vec3::Constant(kNaN);
  r.magnitude = r.magnitude_error_pct = r.direction_error_pct = kNaN;
  r.location_error_m = r.location_error_pct = kNaN;
  r.escape_displacement = r.escape_expected = kNaN;
  r.roller_friction = r.friction_scale = r.fit_rms = kNaN;
  r.tip_proxy_max = kNaN;
  const auto& rows = trace.rows;
  if (rows.empty()) return r;

  std::size_t onset = rows.size();
  std::size_t trigger = rows.size();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (onset == rows.size() && rows[k].force_true.norm() > 0.0) onset = k;
    if (trigger == rows.size() && rows[k].mode == 1) trigger = k;
  }
  if (onset < rows.size() && trigger < rows.size() && trigger >= onset) {
    r.detection_latency_ms = (rows[trigger].t - rows[onset].t) * 1000.0;
  }
  // Peak over the first contact interval, or the whole run without contact.
  std::size_t contact_end = rows.size();
  if (onset < rows.size()) {
    for (std::size_t k = onset + 1; k < rows.size(); ++k) {
      if (rows[k].force_true.norm() == 0.0) {
        contact_end = k;
        break;
      }
    }
  }
  r.peak_torque = Vec3::Zero();
  for (std::size_t k = onset < rows.size() ? onset : 0; k < contact_end; ++k) {
    r.peak_torque = r.peak_torque.cwiseMax(rows[k].sensed_torque.cwiseAbs());
  }

  if (config.experiment == Experiment::StaticPush && !w.pushes.empty()) {
    const PushProfile& push = w.pushes.front();
    const double end = push.start + push.ramp + push.hold;
    Vec2 est = Vec2::Zero(), truth = Vec2::Zero();
    Vec2 point = Vec2::Zero(), true_point = Vec2::Zero();
    int n = 0, located = 0;
    for (const TraceRow& row : rows) {
      if (row.t < end - kEstimateWindow - 1e-9 || row.t >= end - 1e-9) continue;
      est += row.force_est;
      truth += row.force_true;
      true_point += row.pose.head<2>() + rotate2(row.pose.z(), push.point);
      ++n;
      if (!std::isnan(row.point_est.x())) {
        point += row.point_est;
        ++located;
      }
    }
    if (n > 0) {
      est /= n;
      truth /= n;
      true_point /= n;
      r.magnitude = est.norm();
      r.magnitude_error_pct =
          100.0 * std::abs(r.magnitude - truth.norm()) / truth.norm();
      const double angle = std::abs(std::atan2(
          truth.x() * est.y() - truth.y() * est.x(), truth.dot(est)));
      r.direction_error_pct = 100.0 * angle / (2.0 * std::numbers::pi);
      if (located > 0) {
        point /= located;
        r.location_error_m = (point - true_point).norm();
        r.location_error_pct = 100.0 * r.location_error_m / w.robot.side_length;
      }
    }
    r.checks.push_back(band("magnitude_N", r.magnitude, 5.5, 10.0));
    r.checks.push_back(band("direction_err_pct", r.direction_error_pct, 0.0, 3.3));
    r.checks.push_back(band("location_err_m", r.location_error_m, 0.0, 0.11));
  }

  if (config.experiment == Experiment::DummyIntoRobot) {
    double lo = 20.0, hi = 70.0;
    if (w.dummy.bumper.kind == BumperKind::Spring) lo = 60.0, hi = 130.0;
    if (w.dummy.bumper.kind == BumperKind::Magnet) lo = 55.0, hi = 120.0;
    r.checks.push_back(band("latency_ms", r.detection_latency_ms, lo, hi));
  }
  if (config.experiment == Experiment::RobotIntoDummy) {
    r.checks.push_back(band("latency_ms", r.detection_latency_ms, 70.0, 150.0));
  }

  if (trigger < rows.size() && w.controller.escape_enabled &&
      w.drive.motors_enabled) {
    const double rate = w.sim.control_rate;
    const auto steps = static_cast<std::size_t>(
        std::llround(escape_duration(w.controller) * rate));
    if (trigger + steps < rows.size()) {
      r.escape_displacement = (rows[trigger + steps].pose.head<2>() -
                               rows[trigger].pose.head<2>())
                                  .norm();
      r.escape_expected =
          rows[trigger].force_est.norm() / w.controller.admittance.damping;
      const double rel = std::abs(r.escape_displacement - r.escape_expected) /
                         r.escape_expected;
      r.checks.push_back(band("escape_rel_err", rel, 0.0, 0.05));
    }
  }

  const std::vector<double> tip = tip_proxy(config, trace);
  r.tip_proxy_max = *std::max_element(tip.begin(), tip.end());
  Check tip_check{"tip_proxy", r.tip_proxy_max, 0.0, 1.0, r.tip_proxy_max < 1.0};
  r.checks.push_back(tip_check);
  return r;
}

Report calibration_report(const ScenarioConfig& config, const FitResult& fit) {
  Report r;
  r.id = config.id;
  r.experiment = config.experiment;
  r.detection_latency_ms = kNaN;
  r.peak_torque = Vec3::Constant(kNaN);
  r.magnitude = r.magnitude_error_pct = r.direction_error_pct = kNaN;
  r.location_error_m = r.location_error_pct = kNaN;
  r.escape_displacement = r.escape_expected = r.tip_proxy_max = kNaN;
  r.roller_friction = fit.roller_friction;
  r.friction_scale = fit.friction_scale;
  r.fit_rms = fit.rms;
  r.checks.push_back(band("fit_rms", fit.rms, 0.0,
                          std::numeric_limits<double>::infinity()));
  return r;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "id",           "experiment",        "status",
      "pass",         "latency_ms",        "peak_tau0",
      "peak_tau1",    "peak_tau2",         "magnitude_N",
      "magnitude_err_pct", "direction_err_pct", "location_err_m",
      "location_err_pct",  "escape_disp_m",     "escape_expected_m",
      "tip_proxy_max", "roller_friction",  "friction_scale",
      "fit_rms",      "failed_checks"};
  return cols;
}

void write_report_csv(std::ostream& out,
                      const std::vector<std::pair<Report, std::string>>& rows) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << "\n";
  for (const auto& [r, status] : rows) {
    std::string safe = status;
    std::replace(safe.begin(), safe.end(), ',', ';');
    std::replace(safe.begin(), safe.end(), '\n', ' ');
    out << r.id << "," << experiment_name(r.experiment) << "," << safe;
    if (status != "ok") {
      out << std::string(cols.size() - 3, ',') << "\n";
      continue;
    }
    std::string failed;
    for (const Check& c : r.checks) {
      if (!c.pass) failed += (failed.empty() ? "" : ";") + c.name;
    }
    out << "," << (r.passed() ? "PASS" : "FAIL") << ","
        << cell(r.detection_latency_ms) << "," << cell(r.peak_torque[0]) << ","
        << cell(r.peak_torque[1]) << "," << cell(r.peak_torque[2]) << ","
        << cell(r.magnitude) << "," << cell(r.magnitude_error_pct) << ","
        << cell(r.direction_error_pct) << "," << cell(r.location_error_m) << ","
        << cell(r.location_error_pct) << "," << cell(r.escape_displacement)
        << "," << cell(r.escape_expected) << "," << cell(r.tip_proxy_max) << ","
        << cell(r.roller_friction) << "," << cell(r.friction_scale) << ","
        << cell(r.fit_rms) << "," << failed << "\n";
  }
}

void write_report_text(std::ostream& out, const Report& r) {
  char line[160];
  auto row = [&](const char* label, double v, const char* unit) {
    if (std::isnan(v)) return;
    std::snprintf(line, sizeof(line), "  %-24s %14.6g %s\n", label, v, unit);
    out << line;
  };
  out << "scenario   " << r.id << "\n";
  out << "experiment " << experiment_name(r.experiment) << "\n";
  out << "result     " << (r.passed() ? "PASS" : "FAIL") << "\n\n";
  row("detection latency", r.detection_latency_ms, "ms");
  row("peak torque wheel 0", r.peak_torque[0], "N m");
  row("peak torque wheel 1", r.peak_torque[1], "N m");
  row("peak torque wheel 2", r.peak_torque[2], "N m");
  row("force magnitude", r.magnitude, "N");
  row("magnitude error", r.magnitude_error_pct, "%");
  row("direction error", r.direction_error_pct, "% of 360 deg");
  row("location error", r.location_error_m, "m");
  row("location error", r.location_error_pct, "% of side");
  row("escape displacement", r.escape_displacement, "m");
  row("expected displacement", r.escape_expected, "m");
  row("tip proxy max", r.tip_proxy_max, "");
  row("roller friction", r.roller_friction, "N m");
  row("friction scale", r.friction_scale, "s/rad");
  row("fit rms", r.fit_rms, "N m");
  if (r.checks.empty()) return;
  out << "\nchecks\n";
  for (const Check& c : r.checks) {
    std::snprintf(line, sizeof(line), "  %-20s %14.6g  in [%g, %g]  %s\n",
                  c.name.c_str(), c.value, c.lower, c.upper,
                  c.pass ? "PASS" : "FAIL");
    out << line;
  }
}

std::vector<Vec3> read_torque_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("calibration.measured", "cannot open " + path);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> names;
  {
    std::stringstream ss(header);
    std::string name;
    while (std::getline(ss, name, ',')) names.push_back(name);
  }
  int col[3] = {-1, -1, -1};
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      if (names[i] == "tau_s" + std::to_string(c)) col[c] = static_cast<int>(i);
    }
  }
  if (col[0] < 0 || col[1] < 0 || col[2] < 0) {
    throw ConfigError("calibration.measured", "missing tau_s0..2 columns");
  }
  std::vector<Vec3> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    Vec3 v;
    for (int c = 0; c < 3; ++c) {
      if (col[c] >= static_cast<int>(fields.size())) {
        throw ConfigError("calibration.measured", "short row in " + path);
      }
      try {
        v[c] = std::stod(fields[col[c]]);
      } catch (const std::exception&) {
        throw ConfigError("calibration.measured", "bad number in " + path);
      }
    }
    out.push_back(v);
  }
  return out;
}

void write_torque_csv(const std::string& path, double rate,
                      const std::vector<Vec3>& torques) {
  std::ostringstream out;
  out << "t,tau_s0,tau_s1,tau_s2\n";
  for (std::size_t k = 0; k < torques.size(); ++k) {
    out << format_number(static_cast<double>(k) / rate) << ","
        << format_number(torques[k][0]) << "," << format_number(torques[k][1])
        << "," << format_number(torques[k][2]) << "\n";
  }
  write_file(path, out.str());
}

SimTrace roundtrip_trace(const SimTrace& trace) {
  std::istringstream in(trace_text(trace));
  return read_trace(in);
}

RunOutput simulate_scenario(const ScenarioConfig& config) {
  Simulation sim(config.world);
  RunOutput out;
  out.trace = roundtrip_trace(sim.run());
  out.report = compute_report(config, out.trace);
  return out;
}

Report run_scenario(const ScenarioConfig& config, const std::string& out_dir) {
  if (config.experiment == Experiment::Calibration) {
    return calibrate_scenario(config, out_dir);
  }
  const fs::path dir = fs::path(out_dir) / config.id;
  Simulation sim(config.world);
  const std::string text = trace_text(sim.run());
  std::istringstream in(text);
  const Report report = compute_report(config, read_trace(in));
  fs::create_directories(dir);
  write_file(dir / "config.yaml", serialize_config(config));
  write_file(dir / "trace.csv", text);
  write_reports(dir, report);
  return report;
}

Report calibrate_scenario(const ScenarioConfig& config,
                          const std::string& out_dir,
                          const std::string& measured) {
  const CalibrationConfig& cal = config.calibration;
  cal.validate();
  const WorldConfig& w = config.world;
  const double rate = w.sim.control_rate;
  std::vector<WheelSample> traj = generate_calibration_trajectory(
      cal.trajectory, cal.omega, cal.duration, 1.0 / rate);
  const std::string source = measured.empty() ? cal.measured : measured;
  std::vector<Vec3> torques;
  if (source.empty()) {
    torques = simulate_calibration(w, cal.trajectory, cal.omega, cal.duration,
                                   cal.feedforward);
  } else {
    torques = read_torque_csv(source);
  }
  const std::size_t n = std::min(torques.size(), traj.size());
  torques.resize(n);
  traj.resize(n);
  const FitResult fit =
      fit_roller_friction(torques, traj, w.robot, cal.omega, cal.fit);
  Report report = calibration_report(config, fit);
  if (!out_dir.empty()) {
    const fs::path dir = fs::path(out_dir) / config.id;
    fs::create_directories(dir);
    write_file(dir / "config.yaml", serialize_config(config));
    write_torque_csv((dir / "torques.csv").string(), rate, torques);
    write_reports(dir, report);
  }
  return report;
}

Report replay_trace(const ScenarioConfig& config, const std::string& trace) {
  return compute_report(config, read_trace(trace));
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  if (pattern.find_first_of("*?[") == std::string::npos) return {pattern};
  const fs::path p(pattern);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  const std::string name = p.filename().string();
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string file = entry.path().filename().string();
    if (fnmatch(name.c_str(), file.c_str(), 0) == 0) {
      out.push_back((p.has_parent_path() ? dir / file : fs::path(file)).string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BatchEntry> run_batch(const std::vector<std::string>& paths,
                                  const std::string& out_dir, int parallel,
                                  std::optional<std::uint64_t> seed) {
  std::vector<BatchEntry> entries(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      BatchEntry& e = entries[i];
      e.path = paths[i];
      try {
        ScenarioConfig c = load_config(paths[i]);
        if (seed) c.world.sim.seed = *seed;
        e.report = run_scenario(c, out_dir);
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
  };
  const int threads = std::max(
      1, std::min(parallel, static_cast<int>(std::max<std::size_t>(paths.size(), 1))));
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(out_dir);
  std::vector<std::pair<Report, std::string>> rows;
  for (const BatchEntry& e : entries) {
    if (e.report) {
      rows.emplace_back(*e.report, "ok");
    } else {
      Report r;
      r.id = fs::path(e.path).stem().string();
      rows.emplace_back(r, "error: " + e.error);
    }
  }
  std::ostringstream csv, txt;
  write_report_csv(csv, rows);
  write_summary_text(txt, entries);
  write_file(fs::path(out_dir) / "summary.csv", csv.str());
  write_file(fs::path(out_dir) / "summary.txt", txt.str());
  return entries;
}

void write_summary_text(std::ostream& out,
                        const std::vector<BatchEntry>& entries) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-22s %-17s %-5s %9s %9s %9s %9s %9s %7s\n",
                "id", "experiment", "pass", "lat_ms", "peak_Nm", "mag_N",
                "dir_pct", "loc_m", "tip");
  out << line;
  for (const BatchEntry& e : entries) {
    if (!e.report) {
      std::snprintf(line, sizeof(line), "%-22s error: %s\n",
                    fs::path(e.path).stem().string().c_str(), e.error.c_str());
      out << line;
      continue;
    }
    const Report& r = *e.report;
    std::snprintf(line, sizeof(line),
                  "%-22s %-17s %-5s %9.4g %9.4g %9.4g %9.4g %9.4g %7.3g\n",
                  r.id.c_str(), experiment_name(r.experiment),
                  r.passed() ? "PASS" : "FAIL", r.detection_latency_ms,
                  r.peak_torque.maxCoeff(), r.magnitude, r.direction_error_pct,
                  r.location_error_m, r.tip_proxy_max);
    out << line;
  }
}

std::vector<std::string> write_presets(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& [name, text] : preset_files()) {
    const fs::path path = fs::path(dir) / name;
    fs::create_directories(path.parent_path());
    write_file(path, text);
    out.push_back(path.string());
  }
  return out;
}

}  // namespace omniforce
