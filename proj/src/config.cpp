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

#include "omniforce/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "omniforce/errors.hpp"

namespace omniforce {
namespace {

/// Map node reader that records which keys were consumed so leftovers can be
/// reported as unknown fields.
class Section {
 public:
  Section(YAML::Node node, std::string path)
      : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(path_, "expected a mapping");
    }
  }

  bool has(const std::string& key) const {
    return node_ && node_.IsMap() && node_[key];
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node take(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  void num(const std::string& key, double& out) {
    if (!has(key)) return;
    try {
      out = take(key).as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected a number");
    }
  }

  void integer(const std::string& key, int& out) {
    if (!has(key)) return;
    try {
      out = take(key).as<int>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected an integer");
    }
  }

  void u64(const std::string& key, std::uint64_t& out) {
    if (!has(key)) return;
    try {
      out = take(key).as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
  }

  void flag(const std::string& key, bool& out) {
    if (!has(key)) return;
    try {
      out = take(key).as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected true or false");
    }
  }

  void text(const std::string& key, std::string& out) {
    if (!has(key)) return;
    try {
      out = take(key).as<std::string>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected a string");
    }
  }

  template <int N>
  void vec(const std::string& key, Eigen::Matrix<double, N, 1>& out) {
    if (!has(key)) return;
    const YAML::Node n = take(key);
    if (!n.IsSequence() || n.size() != static_cast<std::size_t>(N)) {
      throw ConfigError(field(key),
                        "expected a list of " + std::to_string(N) + " numbers");
    }
    try {
      for (int i = 0; i < N; ++i) out[i] = n[i].as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key), "expected numbers");
    }
  }

  template <class E>
  void choice(const std::string& key, E& out,
              const std::map<std::string, E>& names) {
    if (!has(key)) return;
    std::string s;
    text(key, s);
    const auto it = names.find(s);
    if (it == names.end()) {
      std::string allowed;
      for (const auto& [name, value] : names) {
        allowed += (allowed.empty() ? "" : ", ") + name;
      }
      throw ConfigError(field(key), "unknown value '" + s + "' (expected " +
                                        allowed + ")");
    }
    out = it->second;
  }

  Section child(const std::string& key) {
    if (!has(key)) return Section(YAML::Node(), field(key));
    return Section(take(key), field(key));
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

const std::map<std::string, Experiment> kExperiments = {
    {"STATIC_PUSH", Experiment::StaticPush},
    {"DUMMY_INTO_ROBOT", Experiment::DummyIntoRobot},
    {"ROBOT_INTO_DUMMY", Experiment::RobotIntoDummy},
    {"ARC_WITH_PUSHES", Experiment::ArcWithPushes},
    {"CALIBRATION", Experiment::Calibration}};

const std::map<std::string, ModelVariant> kVariants = {
    {"FULL", ModelVariant::Full}, {"REDUCED", ModelVariant::Reduced}};

const std::map<std::string, SensorMode> kSensorModes = {
    {"RIGID", SensorMode::Rigid}, {"SPRING", SensorMode::Spring}};

const std::map<std::string, TrajectoryKind> kTrajectories = {
    {"HOLD", TrajectoryKind::Hold},
    {"ARC", TrajectoryKind::Arc},
    {"LINE", TrajectoryKind::Line}};

const std::map<std::string, BumperKind> kBumpers = {
    {"PU", BumperKind::PU},
    {"SPRING", BumperKind::Spring},
    {"MAGNET", BumperKind::Magnet}};

const std::map<std::string, CalibrationTrajectory> kCalibration = {
    {"ARC_W0", CalibrationTrajectory::ArcW0},
    {"PIVOT_W2", CalibrationTrajectory::PivotW2}};

template <class E>
std::string name_of(const std::map<std::string, E>& names, E value) {
  for (const auto& [name, v] : names) {
    if (v == value) return name;
  }
  return "";
}

YAML::Node merge(const YAML::Node& base, const YAML::Node& overlay) {
  if (!base.IsMap() || !overlay.IsMap()) return YAML::Clone(overlay);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : overlay) {
    const auto key = kv.first.as<std::string>();
    if (out[key] && out[key].IsMap() && kv.second.IsMap()) {
      out[key] = merge(out[key], kv.second);
    } else {
      out[key] = YAML::Clone(kv.second);
    }
  }
  return out;
}

void read_robot(Section s, RobotParams& r, ModelVariant& variant) {
  s.num("wheel_distance", r.wheel_distance);
  s.num("wheel_radius", r.wheel_radius);
  s.num("roller_radius", r.roller_radius);
  s.num("body_mass", r.body_mass);
  s.num("body_inertia", r.body_inertia);
  s.num("wheel_inertia", r.wheel_inertia);
  s.num("roller_inertia", r.roller_inertia);
  s.num("roller_friction", r.roller_friction);
  s.num("friction_scale", r.friction_scale);
  s.num("side_length", r.side_length);
  s.choice("model", variant, kVariants);
  s.finish();
}

void read_actuator(Section s, DriveConfig& d) {
  ActuatorParams& a = d.actuator;
  s.choice("sensor_mode", a.sensor_mode, kSensorModes);
  s.num("sensor_stiffness", a.sensor_stiffness);
  s.num("rotor_inertia", a.rotor_inertia);
  s.num("motor_damping", a.motor_damping);
  s.num("load_damping", a.load_damping);
  s.num("stiction_torque", a.stiction_torque);
  s.num("load_stiction_torque", a.load_stiction_torque);
  s.num("stiction_deadband", a.stiction_deadband);
  s.num("torque_noise_sd", a.torque_noise_sd);
  s.num("sample_rate", a.sample_rate);
  s.num("torque_limit", a.torque_limit);
  s.num("kp", d.gains.kp);
  s.num("kd", d.gains.kd);
  s.flag("motors_enabled", d.motors_enabled);
  s.flag("stiction_enabled", d.stiction_enabled);
  s.flag("noise_enabled", d.noise_enabled);
  s.finish();
}

void read_estimator(Section s, EstimatorParams& e) {
  s.num("cutoff_hz", e.cutoff_hz);
  s.num("window", e.window);
  s.num("threshold", e.threshold);
  s.num("degenerate_force", e.degenerate_force);
  s.finish();
}

void read_controller(Section s, ControllerConfig& c, double threshold) {
  s.num("desired_mass", c.admittance.mass);
  s.num("standoff", c.admittance.standoff);
  if (s.has("desired_damping")) {
    s.num("desired_damping", c.admittance.damping);
  } else {
    c.admittance.damping = design_damping(threshold, c.admittance.standoff);
  }
  s.flag("escape_enabled", c.escape_enabled);
  s.num("escape_duration", c.supervisor.escape_duration);
  s.num("quiet_time", c.supervisor.quiet_time);
  s.num("holdoff", c.supervisor.holdoff);
  Section t = s.child("trajectory");
  t.choice("kind", c.trajectory.kind, kTrajectories);
  t.num("speed", c.trajectory.speed);
  t.num("radius", c.trajectory.radius);
  t.num("heading", c.trajectory.heading);
  t.flag("clockwise", c.trajectory.clockwise);
  t.finish();
  s.finish();
}

void read_bumper(Section s, BumperModel& b) {
  BumperKind kind = BumperKind::PU;
  s.choice("kind", kind, kBumpers);
  b = BumperModel::preset(kind);
  s.num("stiffness", b.stiffness);
  s.num("damping", b.damping);
  s.num("travel_max", b.travel_max);
  s.num("latch_force", b.latch_force);
  s.num("rigid_stiffness", b.rigid_stiffness);
  s.num("rigid_damping", b.rigid_damping);
  s.finish();
}

void read_dummy(Section s, DummyConfig& d) {
  d.enabled = true;
  s.flag("enabled", d.enabled);
  s.num("mass", d.mass);
  s.num("pull_force", d.pull_force);
  s.num("release_gap", d.release_gap);
  s.vec<2>("axis", d.axis);
  s.vec<2>("aim", d.aim);
  s.num("stroke", d.stroke);
  s.num("initial_speed", d.initial_speed);
  s.num("contact_height", d.contact_height);
  read_bumper(s.child("bumper"), d.bumper);
  s.finish();
}

void read_push(Section s, PushProfile& p) {
  s.vec<2>("point", p.point);
  s.vec<2>("direction", p.direction);
  s.num("magnitude", p.magnitude);
  s.num("start", p.start);
  s.num("ramp", p.ramp);
  s.num("hold", p.hold);
  s.flag("end_on_escape", p.end_on_escape);
  s.num("contact_height", p.contact_height);
  s.finish();
}

void read_sim(Section s, SimSettings& sim) {
  s.num("dt", sim.dt);
  s.num("control_rate", sim.control_rate);
  s.num("duration", sim.duration);
  s.u64("seed", sim.seed);
  s.finish();
}

void read_calibration(Section s, CalibrationConfig& c) {
  s.choice("trajectory", c.trajectory, kCalibration);
  s.num("omega", c.omega);
  s.num("duration", c.duration);
  s.flag("feedforward", c.feedforward);
  s.text("measured", c.measured);
  Section f = s.child("fit");
  f.num("br_min", c.fit.br_min);
  f.num("br_max", c.fit.br_max);
  f.num("br_step", c.fit.br_step);
  f.num("alpha_min", c.fit.alpha_min);
  f.num("alpha_max", c.fit.alpha_max);
  f.integer("alpha_points", c.fit.alpha_points);
  f.integer("rounds", c.fit.rounds);
  f.num("noise_floor", c.fit.noise_floor);
  f.finish();
  s.finish();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string vec2(const Vec2& v) { return "[" + num(v.x()) + ", " + num(v.y()) + "]"; }

std::string vec3(const Vec3& v) {
  return "[" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + "]";
}

const char* yes(bool b) { return b ? "true" : "false"; }

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::StaticPush:
      return "STATIC_PUSH";
    case Experiment::DummyIntoRobot:
      return "DUMMY_INTO_ROBOT";
    case Experiment::RobotIntoDummy:
      return "ROBOT_INTO_DUMMY";
    case Experiment::ArcWithPushes:
      return "ARC_WITH_PUSHES";
    case Experiment::Calibration:
      return "CALIBRATION";
  }
  return "STATIC_PUSH";
}

void CalibrationConfig::validate() const {
  if (!(omega > 0.0)) throw ConfigError("calibration.omega", "must be > 0");
  if (!(duration >= 2.0 / omega)) {
    throw ConfigError("calibration.duration", "must cover at least 2 periods");
  }
  if (!(fit.br_step > 0.0) || fit.br_max < fit.br_min) {
    throw ConfigError("calibration.fit.br_step", "invalid friction grid");
  }
  if (fit.alpha_points < 2 || !(fit.alpha_min > 0.0) ||
      !(fit.alpha_max > fit.alpha_min)) {
    throw ConfigError("calibration.fit.alpha_points", "invalid scale grid");
  }
  if (fit.rounds < 0) throw ConfigError("calibration.fit.rounds", ">= 0");
}

void ScenarioConfig::validate() const {
  if (id.empty()) throw ConfigError("id", "must not be empty");
  world.validate();
  switch (experiment) {
    case Experiment::StaticPush:
      if (world.pushes.empty()) {
        throw ConfigError("pushes", "STATIC_PUSH needs at least one push");
      }
      break;
    case Experiment::DummyIntoRobot:
    case Experiment::RobotIntoDummy:
      if (!world.dummy.enabled) {
        throw ConfigError("dummy", "dummy experiments need an enabled dummy");
      }
      break;
    case Experiment::ArcWithPushes:
      if (world.controller.trajectory.kind != TrajectoryKind::Arc) {
        throw ConfigError("controller.trajectory.kind",
                          "ARC_WITH_PUSHES needs an ARC trajectory");
      }
      break;
    case Experiment::Calibration:
      calibration.validate();
      break;
  }
}

ScenarioConfig parse_config(const std::string& text,
                            const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<yaml>", e.what());
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("<root>", "expected a mapping");
  if (root["profile"]) {
    std::string name;
    try {
      name = root["profile"].as<std::string>();
    } catch (const YAML::Exception&) {
      throw ConfigError("profile", "expected a file path");
    }
    const std::filesystem::path path =
        std::filesystem::path(base_dir) / std::filesystem::path(name);
    YAML::Node profile;
    try {
      profile = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
      throw ConfigError("profile", "cannot load " + path.string() + ": " +
                                       e.what());
    }
    if (profile && profile.IsMap() && profile["profile"]) {
      throw ConfigError("profile", "profiles cannot reference profiles");
    }
    root.remove("profile");
    if (profile && !profile.IsNull()) root = merge(root, profile);
  }

  ScenarioConfig c;
  Section s(root, "");
  s.text("id", c.id);
  s.choice("experiment", c.experiment, kExperiments);
  WorldConfig& w = c.world;
  read_sim(s.child("sim"), w.sim);
  w.estimator.rate = w.sim.control_rate;
  w.drive.actuator.sample_rate = w.sim.control_rate;
  read_robot(s.child("robot"), w.robot, w.variant);
  read_actuator(s.child("actuator"), w.drive);
  read_estimator(s.child("estimator"), w.estimator);
  read_controller(s.child("controller"), w.controller, w.estimator.threshold);
  if (s.has("dummy")) read_dummy(s.child("dummy"), w.dummy);
  if (s.has("pushes")) {
    const YAML::Node list = s.take("pushes");
    if (!list.IsSequence()) throw ConfigError("pushes", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      PushProfile p;
      read_push(Section(list[i], "pushes[" + std::to_string(i) + "]"), p);
      w.pushes.push_back(p);
    }
  }
  Section init = s.child("initial");
  init.vec<3>("pose", w.initial_pose);
  init.vec<3>("velocity", w.initial_velocity);
  init.finish();
  read_calibration(s.child("calibration"), c.calibration);
  s.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path p(path);
  ScenarioConfig c = parse_config(
      buf.str(), p.has_parent_path() ? p.parent_path().string() : ".");
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  const WorldConfig& w = c.world;
  const RobotParams& r = w.robot;
  const ActuatorParams& a = w.drive.actuator;
  const EstimatorParams& e = w.estimator;
  const ControllerConfig& k = w.controller;
  const DummyConfig& d = w.dummy;
  const BumperModel& b = d.bumper;
  std::ostringstream o;
  o << "id: \"" << c.id << "\"\n";
  o << "experiment: " << experiment_name(c.experiment) << "\n";
  o << "robot:\n"
    << "  wheel_distance: " << num(r.wheel_distance) << "\n"
    << "  wheel_radius: " << num(r.wheel_radius) << "\n"
    << "  roller_radius: " << num(r.roller_radius) << "\n"
    << "  body_mass: " << num(r.body_mass) << "\n"
    << "  body_inertia: " << num(r.body_inertia) << "\n"
    << "  wheel_inertia: " << num(r.wheel_inertia) << "\n"
    << "  roller_inertia: " << num(r.roller_inertia) << "\n"
    << "  roller_friction: " << num(r.roller_friction) << "\n"
    << "  friction_scale: " << num(r.friction_scale) << "\n"
    << "  side_length: " << num(r.side_length) << "\n"
    << "  model: " << name_of(kVariants, w.variant) << "\n";
  o << "actuator:\n"
    << "  sensor_mode: " << name_of(kSensorModes, a.sensor_mode) << "\n"
    << "  sensor_stiffness: " << num(a.sensor_stiffness) << "\n"
    << "  rotor_inertia: " << num(a.rotor_inertia) << "\n"
    << "  motor_damping: " << num(a.motor_damping) << "\n"
    << "  load_damping: " << num(a.load_damping) << "\n"
    << "  stiction_torque: " << num(a.stiction_torque) << "\n"
    << "  load_stiction_torque: " << num(a.load_stiction_torque) << "\n"
    << "  stiction_deadband: " << num(a.stiction_deadband) << "\n"
    << "  torque_noise_sd: " << num(a.torque_noise_sd) << "\n"
    << "  sample_rate: " << num(a.sample_rate) << "\n"
    << "  torque_limit: " << num(a.torque_limit) << "\n"
    << "  kp: " << num(w.drive.gains.kp) << "\n"
    << "  kd: " << num(w.drive.gains.kd) << "\n"
    << "  motors_enabled: " << yes(w.drive.motors_enabled) << "\n"
    << "  stiction_enabled: " << yes(w.drive.stiction_enabled) << "\n"
    << "  noise_enabled: " << yes(w.drive.noise_enabled) << "\n";
  o << "estimator:\n"
    << "  cutoff_hz: " << num(e.cutoff_hz) << "\n"
    << "  window: " << num(e.window) << "\n"
    << "  threshold: " << num(e.threshold) << "\n"
    << "  degenerate_force: " << num(e.degenerate_force) << "\n";
  o << "controller:\n"
    << "  desired_mass: " << num(k.admittance.mass) << "\n"
    << "  desired_damping: " << num(k.admittance.damping) << "\n"
    << "  standoff: " << num(k.admittance.standoff) << "\n"
    << "  escape_enabled: " << yes(k.escape_enabled) << "\n"
    << "  escape_duration: " << num(k.supervisor.escape_duration) << "\n"
    << "  quiet_time: " << num(k.supervisor.quiet_time) << "\n"
    << "  holdoff: " << num(k.supervisor.holdoff) << "\n"
    << "  trajectory:\n"
    << "    kind: " << name_of(kTrajectories, k.trajectory.kind) << "\n"
    << "    speed: " << num(k.trajectory.speed) << "\n"
    << "    radius: " << num(k.trajectory.radius) << "\n"
    << "    heading: " << num(k.trajectory.heading) << "\n"
    << "    clockwise: " << yes(k.trajectory.clockwise) << "\n";
  o << "dummy:\n"
    << "  enabled: " << yes(d.enabled) << "\n"
    << "  mass: " << num(d.mass) << "\n"
    << "  pull_force: " << num(d.pull_force) << "\n"
    << "  release_gap: " << num(d.release_gap) << "\n"
    << "  axis: " << vec2(d.axis) << "\n"
    << "  aim: " << vec2(d.aim) << "\n"
    << "  stroke: " << num(d.stroke) << "\n"
    << "  initial_speed: " << num(d.initial_speed) << "\n"
    << "  contact_height: " << num(d.contact_height) << "\n"
    << "  bumper:\n"
    << "    kind: " << name_of(kBumpers, b.kind) << "\n"
    << "    stiffness: " << num(b.stiffness) << "\n"
    << "    damping: " << num(b.damping) << "\n"
    << "    travel_max: " << num(b.travel_max) << "\n"
    << "    latch_force: " << num(b.latch_force) << "\n"
    << "    rigid_stiffness: " << num(b.rigid_stiffness) << "\n"
    << "    rigid_damping: " << num(b.rigid_damping) << "\n";
  o << "pushes:" << (w.pushes.empty() ? " []\n" : "\n");
  for (const PushProfile& p : w.pushes) {
    o << "  - point: " << vec2(p.point) << "\n"
      << "    direction: " << vec2(p.direction) << "\n"
      << "    magnitude: " << num(p.magnitude) << "\n"
      << "    start: " << num(p.start) << "\n"
      << "    ramp: " << num(p.ramp) << "\n"
      << "    hold: " << num(p.hold) << "\n"
      << "    end_on_escape: " << yes(p.end_on_escape) << "\n"
      << "    contact_height: " << num(p.contact_height) << "\n";
  }
  o << "sim:\n"
    << "  dt: " << num(w.sim.dt) << "\n"
    << "  control_rate: " << num(w.sim.control_rate) << "\n"
    << "  duration: " << num(w.sim.duration) << "\n"
    << "  seed: " << w.sim.seed << "\n";
  o << "initial:\n"
    << "  pose: " << vec3(w.initial_pose) << "\n"
    << "  velocity: " << vec3(w.initial_velocity) << "\n";
  const CalibrationConfig& cal = c.calibration;
  o << "calibration:\n"
    << "  trajectory: " << name_of(kCalibration, cal.trajectory) << "\n"
    << "  omega: " << num(cal.omega) << "\n"
    << "  duration: " << num(cal.duration) << "\n"
    << "  feedforward: " << yes(cal.feedforward) << "\n"
    << "  measured: \"" << cal.measured << "\"\n"
    << "  fit:\n"
    << "    br_min: " << num(cal.fit.br_min) << "\n"
    << "    br_max: " << num(cal.fit.br_max) << "\n"
    << "    br_step: " << num(cal.fit.br_step) << "\n"
    << "    alpha_min: " << num(cal.fit.alpha_min) << "\n"
    << "    alpha_max: " << num(cal.fit.alpha_max) << "\n"
    << "    alpha_points: " << cal.fit.alpha_points << "\n"
    << "    rounds: " << cal.fit.rounds << "\n"
    << "    noise_floor: " << num(cal.fit.noise_floor) << "\n";
  return o.str();
}

}  // namespace omniforce
