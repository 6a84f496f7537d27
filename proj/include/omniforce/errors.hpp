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

#include <stdexcept>
#include <string>

namespace omniforce {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A 3x3 map (usually the wheel Jacobian) could not be inverted reliably.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Residual force too small to define a line of action.
class DegenerateForceError : public Error {
 public:
  using Error::Error;
};

// The zero-moment line misses the body outline.
class NoIntersectionError : public Error {
 public:
  using Error::Error;
};

class FitDegenerateError : public Error {
 public:
  using Error::Error;
};

class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Invalid scenario configuration. `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace omniforce
