// Copyright 2026 The symqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace symqaoa {

/// Invalid configuration or physically inconsistent parameters
/// (non-CPTP channel, T2 > 2*T1, singular calibration, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation's precondition (index out of range,
/// dimension mismatch, unsupported gate).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Failure while running a simulation.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Postselection kept (numerically) nothing.
class EmptyPostselection : public SimulationError {
 public:
  explicit EmptyPostselection(double retention)
      : SimulationError("empty postselection (retention " +
                        std::to_string(retention) + ")"),
        retention_(retention) {}

  double retention() const noexcept { return retention_; }

 private:
  double retention_;
};

}  // namespace symqaoa
