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

// Experiment configuration documents (JSON).
//
//   {
//     "source":    {"kind": "spdc" | "generic_two_path", "L_max": 1,
//                   "spectrum": "flat" | "gaussian", "width": 1.0},
//     "arm_A":     [ element, ... ],          // application order
//     "arm_B":     [ element, ... ],
//     "analyzers": {"use_polarizer": true, "alpha": 0.0, "extinction": 0.0,
//                   "hologram": {"l": 1, "theta": 0.0, "mode": "ideal" | "binary"}},
//     "counting":  {"pair_rate": 1000, "integration_time": 5, "gate": 2.5e-08,
//                   "delay_m": 0, "singles_A": 0, "singles_B": 0, "seed": 1},
//     "scan":      {"variable": "theta" | "alpha" | "grid", "start": 0, "stop": 6.283..,
//                   "points": 36, "endpoint": false, "theta_points": 72,
//                   "alpha_start": 0, "alpha_stop": 3.14159.., "alpha_points": 64},
//     "oam_cap":   32
//   }
//
// Elements are tagged objects:
//
//   {"type": "qplate", "q": 0.5}
//   {"type": "waveplate", "kind": "quarter" | "half", "fast_axis": 0.785398..}
//   {"type": "polarizer", "alpha": 0.0, "extinction": 0.0}
//   {"type": "fiber", "l": 0}
//   {"type": "hologram", "l": 1, "theta": 0.0, "mode": "ideal"}
//   {"type": "delay", "extra_path": 2.3}
//
// All angles are radians. Every key is optional and defaults as shown
// (integration_time 5 s, gate 25 ns, extinction 0, mode ideal). Unknown
// keys are rejected. counting.delay_m is shorthand for a delay element on
// arm A; emitted documents always carry delays as elements.

#include <stdexcept>
#include <string>

#include "oam_eraser/experiment.hpp"

namespace oam_eraser {

enum class ScanKind { theta, alpha, grid };

struct ScanSpec {
  ScanKind variable = ScanKind::theta;
  double start = 0;
  double stop = 6.283185307179586;
  int points = 36;
  bool endpoint = false;
  int theta_points = 72;  // theta samples per alpha in an alpha scan
  double alpha_start = 0;
  double alpha_stop = 3.141592653589793;
  int alpha_points = 64;
};

struct ConfigDocument {
  ExperimentConfig experiment;
  ScanSpec scan;
};

/// Parse or validation failure. `where` is the JSON key path (e.g.
/// "arm_A[0].q") or "line N" for syntax errors.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(std::string where, const std::string &message);
  const std::string &where() const { return where_; }

 private:
  std::string where_;
};

ConfigDocument parse_config(const std::string &text);

/// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string emit_config(const ConfigDocument &document);

}  // namespace oam_eraser
