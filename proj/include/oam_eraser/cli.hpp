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

#include <ostream>
#include <string>
#include <vector>

namespace oam_eraser::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNullPipeline = 3,
  kIoError = 4,
};

/// Runs the command line `args` (args[0] is the program name).
///
/// Subcommands: scan-theta, scan-alpha, scan-grid, timeline,
/// render-pattern, fit.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace oam_eraser::cli
