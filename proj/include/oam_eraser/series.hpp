// Copyright 2026 The oam-eraser Authors
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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace oam_eraser {

/// p(theta) = offset + amplitude * cos(2 theta + phase)
struct FringeFit {
  double offset = 0;
  double amplitude = 0;
  double phase = 0;
  double residual_rms = 0;

  double evaluate(double theta) const;
};

enum class ScanVariable { theta, alpha };

inline const char *scan_variable_name(ScanVariable v) { return v == ScanVariable::theta ? "theta" : "alpha"; }

/// One parameter scan. `joint` and `conditional` are exact probabilities
/// per setting; `counts` is filled by simulate_counts.
struct ScanSeries {
  ScanVariable variable = ScanVariable::theta;
  double fixed_angle = 0;  // the angle not being scanned
  std::vector<double> settings;
  std::vector<double> joint;
  std::vector<double> conditional;
  std::optional<std::vector<std::int64_t>> counts;
  std::optional<FringeFit> fit;

  std::size_t size() const { return settings.size(); }
};

/// n evenly spaced values from start; stop is excluded when `endpoint` is false.
std::vector<double> linspace(double start, double stop, int n, bool endpoint = true);

}  // namespace oam_eraser
