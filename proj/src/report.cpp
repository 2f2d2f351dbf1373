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

#include "oam_eraser/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace oam_eraser {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kMargin = 50;

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string scan_csv(const ScanSeries &series) {
  std::string out = "setting_rad,p_joint,p_conditional,counts\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += format_number(series.settings[i]) + "," + format_number(series.joint[i]) + "," +
           format_number(series.conditional[i]) + ",";
    if (series.counts) out += std::to_string((*series.counts)[i]);
    out += "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<std::pair<std::string, double>> &fields) {
  std::string header;
  std::string row;
  for (const auto &[name, value] : fields) {
    header += (header.empty() ? "" : ",") + name;
    row += (row.empty() ? "" : ",") + format_number(value);
  }
  return header + "\n" + row + "\n";
}

std::string table_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

std::string svg_line_plot(const std::vector<double> &x, const std::vector<std::vector<double>> &curves,
                          const std::string &title, const std::string &x_label, const std::string &y_label) {
  if (x.empty()) throw std::invalid_argument("empty series");
  const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  double xmin = *xmin_it, xmax = *xmax_it;
  double ymin = 0, ymax = 0;
  for (const auto &c : curves)
    for (double v : c) ymax = std::max(ymax, v);
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  ymax *= 1.05;

  auto px = [&](double v) { return kMargin + (v - xmin) / (xmax - xmin) * (kWidth - 2 * kMargin); };
  auto py = [&](double v) { return kHeight - kMargin - (v - ymin) / (ymax - ymin) * (kHeight - 2 * kMargin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(title)
     << "</text>\n";
  os << "<line x1=\"" << coord(kMargin) << "\" y1=\"" << coord(kHeight - kMargin) << "\" x2=\""
     << coord(kWidth - kMargin) << "\" y2=\"" << coord(kHeight - kMargin) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << coord(kMargin) << "\" y1=\"" << coord(kMargin) << "\" x2=\"" << coord(kMargin) << "\" y2=\""
     << coord(kHeight - kMargin) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << escape(x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
     << kHeight / 2 << ")\">" << escape(y_label) << "</text>\n";
  os << "<text x=\"" << coord(kMargin - 4) << "\" y=\"" << coord(py(ymax / 1.05)) << "\" text-anchor=\"end\" font-size=\"10\">"
     << format_number(ymax / 1.05) << "</text>\n";
  os << "<text x=\"" << coord(kMargin) << "\" y=\"" << coord(kHeight - kMargin + 14)
     << "\" text-anchor=\"middle\" font-size=\"10\">" << format_number(xmin) << "</text>\n";
  os << "<text x=\"" << coord(kWidth - kMargin) << "\" y=\"" << coord(kHeight - kMargin + 14)
     << "\" text-anchor=\"middle\" font-size=\"10\">" << format_number(xmax) << "</text>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < curves[k].size(); ++i)
      os << (i ? " " : "") << coord(px(x[i])) << "," << coord(py(curves[k][i]));
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_polar_plot(const Eigen::VectorXd &pattern, const std::string &title) {
  if (pattern.size() == 0) throw std::invalid_argument("empty pattern");
  const double size = 400;
  const double cx = size / 2, cy = size / 2 + 10, radius = size / 2 - 40;
  const double peak = pattern.maxCoeff() > 0 ? pattern.maxCoeff() : 1.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20
     << "\" viewBox=\"0 0 " << size << " " << size + 20 << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << cx << "\" y=\"20\" text-anchor=\"middle\" font-size=\"16\">" << escape(title) << "</text>\n";
  os << "<circle cx=\"" << coord(cx) << "\" cy=\"" << coord(cy) << "\" r=\"" << coord(radius)
     << "\" fill=\"none\" stroke=\"#bbbbbb\"/>\n";
  os << "<polygon fill=\"#1f77b4\" fill-opacity=\"0.35\" stroke=\"#1f77b4\" points=\"";
  const auto n = pattern.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    const double r = radius * pattern(i) / peak;
    os << (i ? " " : "") << coord(cx + r * std::cos(phi)) << "," << coord(cy - r * std::sin(phi));
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace oam_eraser
