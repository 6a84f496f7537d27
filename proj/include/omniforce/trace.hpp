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

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "omniforce/types.hpp"

namespace omniforce {

/// One control tick of a simulation run.
struct TraceRow {
  double t = 0.0;
  Vec3 pose = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 wheel_angle = Vec3::Zero();
  Vec3 sensed_torque = Vec3::Zero();
  double dummy_s = 0.0;
  double dummy_sdot = 0.0;
  double bumper_deflection = 0.0;
  Vec2 force_true = Vec2::Zero();
  Vec2 force_est = Vec2::Zero();
  Vec2 point_est = Vec2::Zero();
  int mode = 0;  // 0 tracking, 1 escaping
};

struct SimTrace {
  std::vector<TraceRow> rows;
};

/// Column names in file order.
const std::vector<std::string>& trace_columns();

void write_trace(std::ostream& out, const SimTrace& trace);
void write_trace(const std::string& path, const SimTrace& trace);

/// Throws Error on a malformed header or row.
SimTrace read_trace(std::istream& in);
SimTrace read_trace(const std::string& path);

/// Values of one named column as printed in the file. Throws Error for an
/// unknown column.
std::vector<std::string> trace_column(const SimTrace& trace,
                                      const std::string& name);

/// Formats a number with 12 significant digits.
std::string format_number(double v);

}  // namespace omniforce
