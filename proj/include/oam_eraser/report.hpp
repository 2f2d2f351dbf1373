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

// CSV and SVG emission. Output is a pure function of its inputs.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oam_eraser/series.hpp"

namespace oam_eraser {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, printf %.12g.
std::string format_number(double x);

/// Header "setting_rad,p_joint,p_conditional,counts" and one row per point.
/// The counts field is empty when the series has no counts.
std::string scan_csv(const ScanSeries &series);

/// Rows of (column name, value) as a two-line CSV.
std::string summary_csv(const std::vector<std::pair<std::string, double>> &fields);

/// Generic table with a header row.
std::string table_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows);

/// Line plot of one or more curves over shared x values.
std::string svg_line_plot(const std::vector<double> &x, const std::vector<std::vector<double>> &curves,
                          const std::string &title, const std::string &x_label, const std::string &y_label);

/// Polar plot r(phi) of a pattern sampled on [0, 2 pi).
std::string svg_polar_plot(const Eigen::VectorXd &pattern, const std::string &title);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path &path, const std::string &content);

}  // namespace oam_eraser
