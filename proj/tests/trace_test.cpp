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


#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "omniforce/errors.hpp"
#include "omniforce/trace.hpp"

namespace omniforce {
namespace {

SimTrace sample_trace() {
  SimTrace t;
  for (int k = 0; k < 5; ++k) {
    TraceRow r;
    r.t = 1e-3 * k;
    r.pose = Vec3(0.1 * k, -0.2, 1.0 / 3.0);
    r.velocity = Vec3(1e-9, 2.5, -7.125);
    r.wheel_angle = Vec3(k, 2 * k, 3 * k);
    r.sensed_torque = Vec3(0.123456789012345, -1e-12, 40.0);
    r.dummy_s = 0.01 * k;
    r.dummy_sdot = -0.5;
    r.bumper_deflection = k == 2 ? 0.003 : 0.0;
    r.force_true = Vec2(-100.5, 0.0);
    r.force_est = Vec2(1.25, 2.5);
    r.point_est = k == 0 ? Vec2::Constant(std::nan("")) : Vec2(0.3, 0.1);
    r.mode = k > 2;
    t.rows.push_back(r);
  }
  return t;
}

std::string text_of(const SimTrace& t) {
  std::ostringstream out;
  write_trace(out, t);
  return out.str();
}

TEST(Trace, WriteReadWriteIsStable) {
  const std::string first = text_of(sample_trace());
  std::istringstream in(first);
  const SimTrace back = read_trace(in);
  ASSERT_EQ(back.rows.size(), 5u);
  EXPECT_EQ(text_of(back), first);
  EXPECT_EQ(back.rows[3].mode, 1);
  EXPECT_TRUE(std::isnan(back.rows[0].point_est.x()));
  EXPECT_DOUBLE_EQ(back.rows[1].force_true.x(), -100.5);
}

TEST(Trace, HeaderListsColumns) {
  const std::string text = text_of(sample_trace());
  const std::string header = text.substr(0, text.find('\n'));
  std::string expected;
  for (const auto& c : trace_columns()) expected += (expected.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expected);
}

TEST(Trace, ColumnLookup) {
  const SimTrace t = sample_trace();
  const auto col = trace_column(t, trace_columns().front());
  EXPECT_EQ(col.size(), 5u);
  EXPECT_THROW(trace_column(t, "no_such_column"), Error);
}

TEST(Trace, MalformedInputRejected) {
  std::istringstream bad_header("a,b,c\n1,2,3\n");
  EXPECT_THROW(read_trace(bad_header), Error);
  std::string text = text_of(sample_trace());
  text += "0.5,1,2\n";
  std::istringstream short_row(text);
  EXPECT_THROW(read_trace(short_row), Error);
  std::string garbled = text_of(sample_trace());
  garbled.replace(garbled.find('\n') + 1, 1, "x");
  std::istringstream bad_number(garbled);
  EXPECT_THROW(read_trace(bad_number), Error);
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-2.0), "-2");
}

}  // namespace
}  // namespace omniforce
