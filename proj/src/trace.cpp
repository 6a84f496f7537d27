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

#include "omniforce/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "omniforce/errors.hpp"

namespace omniforce {
namespace {

constexpr int kColumns = 23;

std::array<std::string, kColumns> row_fields(const TraceRow& r) {
  return {format_number(r.t),
          format_number(r.pose.x()),
          format_number(r.pose.y()),
          format_number(r.pose.z()),
          format_number(r.velocity.x()),
          format_number(r.velocity.y()),
          format_number(r.velocity.z()),
          format_number(r.wheel_angle[0]),
          format_number(r.wheel_angle[1]),
          format_number(r.wheel_angle[2]),
          format_number(r.sensed_torque[0]),
          format_number(r.sensed_torque[1]),
          format_number(r.sensed_torque[2]),
          format_number(r.dummy_s),
          format_number(r.dummy_sdot),
          format_number(r.bumper_deflection),
          format_number(r.force_true.x()),
          format_number(r.force_true.y()),
          format_number(r.force_est.x()),
          format_number(r.force_est.y()),
          format_number(r.point_est.x()),
          format_number(r.point_est.y()),
          r.mode == 0 ? "TRACKING" : "ESCAPING"};
}

double parse_number(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw Error("trace line " + std::to_string(line) + ": bad number '" + s +
                "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {
      "t",        "x",          "y",           "theta",   "xdot",
      "ydot",     "thetadot",   "qw0",         "qw1",     "qw2",
      "tau_s0",   "tau_s1",     "tau_s2",      "dummy_s", "dummy_sdot",
      "bumper_defl", "Fx_true", "Fy_true",     "Fx_est",  "Fy_est",
      "px_est",   "py_est",     "mode"};
  return cols;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_trace(std::ostream& out, const SimTrace& trace) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  for (const TraceRow& r : trace.rows) {
    const auto fields = row_fields(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out << (i ? "," : "") << fields[i];
    }
    out << '\n';
  }
}

void write_trace(const std::string& path, const SimTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_trace(out, trace);
  if (!out) throw Error("failed writing " + path);
}

SimTrace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("trace: missing header");
  {
    std::ostringstream expected;
    const auto& cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      expected << (i ? "," : "") << cols[i];
    }
    if (line != expected.str()) throw Error("trace: unexpected header");
  }
  SimTrace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != trace_columns().size()) {
      throw Error("trace line " + std::to_string(lineno) +
                  ": wrong number of fields");
    }
    std::vector<double> v(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
      v[i] = parse_number(f[i], lineno);
    }
    TraceRow r;
    r.t = v[0];
    r.pose = Vec3(v[1], v[2], v[3]);
    r.velocity = Vec3(v[4], v[5], v[6]);
    r.wheel_angle = Vec3(v[7], v[8], v[9]);
    r.sensed_torque = Vec3(v[10], v[11], v[12]);
    r.dummy_s = v[13];
    r.dummy_sdot = v[14];
    r.bumper_deflection = v[15];
    r.force_true = Vec2(v[16], v[17]);
    r.force_est = Vec2(v[18], v[19]);
    r.point_est = Vec2(v[20], v[21]);
    if (f.back() == "TRACKING") {
      r.mode = 0;
    } else if (f.back() == "ESCAPING") {
      r.mode = 1;
    } else {
      throw Error("trace line " + std::to_string(lineno) + ": bad mode");
    }
    trace.rows.push_back(r);
  }
  return trace;
}

SimTrace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_trace(in);
}

std::vector<std::string> trace_column(const SimTrace& trace,
                                      const std::string& name) {
  const auto& cols = trace_columns();
  std::size_t idx = cols.size();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == name) idx = i;
  }
  if (idx == cols.size()) throw Error("unknown trace column '" + name + "'");
  std::vector<std::string> out;
  out.reserve(trace.rows.size());
  for (const TraceRow& r : trace.rows) out.push_back(row_fields(r)[idx]);
  return out;
}

}  // namespace omniforce
