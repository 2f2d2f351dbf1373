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

#include "oam_eraser/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace oam_eraser {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> series_values(const ScanSeries &series) {
  if (series.counts) return {series.counts->begin(), series.counts->end()};
  return series.joint;
}

}  // namespace

double FringeFit::evaluate(double theta) const { return offset + amplitude * std::cos(2 * theta + phase); }

std::vector<double> linspace(double start, double stop, int n, bool endpoint) {
  if (n < 1) throw std::invalid_argument("linspace needs n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = start;
    return out;
  }
  const double step = (stop - start) / (endpoint ? n - 1 : n);
  for (int i = 0; i < n; ++i) out[i] = start + i * step;
  return out;
}

FringeFit fit_sinusoid(std::span<const double> settings, std::span<const double> values) {
  if (settings.size() != values.size()) throw AnalysisError("settings and values differ in length");
  if (std::set<double>(settings.begin(), settings.end()).size() < 4)
    throw AnalysisError("sinusoid fit needs at least 4 distinct settings");

  const auto n = static_cast<Eigen::Index>(settings.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1;
    design(i, 1) = std::cos(2 * settings[i]);
    design(i, 2) = -std::sin(2 * settings[i]);
    y(i) = values[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw AnalysisError("rank-deficient sinusoid design");
  const Eigen::Vector3d x = qr.solve(y);

  FringeFit fit;
  fit.offset = x(0);
  fit.amplitude = std::hypot(x(1), x(2));
  fit.phase = fit.amplitude > 0 ? std::atan2(x(2), x(1)) : 0.0;
  fit.residual_rms = std::sqrt((design * x - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

FringeFit fit_sinusoid(const ScanSeries &series) {
  if (series.variable != ScanVariable::theta) throw AnalysisError("sinusoid fit expects a theta scan");
  const auto values = series_values(series);
  return fit_sinusoid(series.settings, values);
}

double visibility(const FringeFit &fit) {
  const double hi = std::max(fit.offset + fit.amplitude, 0.0);
  const double lo = std::max(fit.offset - fit.amplitude, 0.0);
  if (hi + lo <= 0) throw AnalysisError("no signal");
  return std::clamp((hi - lo) / (hi + lo), 0.0, 1.0);
}

double visibility(const ScanSeries &series) {
  if (series.size() < 2) throw AnalysisError("visibility needs at least 2 points");
  if (series.fit) return visibility(*series.fit);
  const auto values = series_values(series);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi + *lo <= 0) throw AnalysisError("no signal");
  return std::clamp((*hi - *lo) / (*hi + *lo), 0.0, 1.0);
}

double theoretical_visibility(double alpha) { return std::abs(std::sin(2 * alpha)); }

double distinguishability(const Ket &state, OamIndex l) {
  if (l == 0) throw AnalysisError("path index l must be nonzero");

  // Unnormalized marker states p_s rho_A|s, grouped by the arm-B
  // polarization that is traced out.
  std::set<BasisLabel> labels;
  for (const auto &[label, amp] : state.amplitudes()) {
    if (label.b.l != l && label.b.l != -l) throw AnalysisError("state is not confined to the +-l paths of arm B");
    labels.insert(BasisLabel::from(label, kArmA));
  }
  if (labels.empty()) throw AnalysisError("empty state");
  std::map<BasisLabel, Eigen::Index> index;
  for (const auto &b : labels) index.emplace(b, static_cast<Eigen::Index>(index.size()));

  const auto dim = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &[x, ax] : state.amplitudes())
    for (const auto &[y, ay] : state.amplitudes()) {
      if (x.b != y.b) continue;  // same path and same traced polarization
      const double sign = x.b.l == l ? 1.0 : -1.0;
      diff(index.at(BasisLabel::from(x, kArmA)), index.at(BasisLabel::from(y, kArmA))) += sign * ax * std::conj(ay);
    }
  return std::min(1.0, trace_norm<double>(diff) / state.squared_norm());
}

double path_coherence(const Ket &state, OamIndex l) {
  if (l == 0) throw AnalysisError("path index l must be nonzero");
  std::complex<double> cross = 0;
  double plus = 0;
  double minus = 0;
  for (const auto &[x, ax] : state.amplitudes()) {
    if (x.b.l == l) plus += std::norm(ax);
    if (x.b.l == -l) minus += std::norm(ax);
    if (x.b.l != l) continue;
    JointLabel partner = x;
    partner.b.l = -l;
    cross += ax * std::conj(state.amplitude(partner));
  }
  if (plus + minus <= 0) throw AnalysisError("no signal");
  return std::min(1.0, 2 * std::abs(cross) / (plus + minus));
}

ComplementarityRecord complementarity_check(double visibility, double distinguishability) {
  constexpr double kSlack = 1e-9;
  auto in_range = [](double x) { return std::isfinite(x) && x >= -kSlack && x <= 1 + kSlack; };
  if (!in_range(visibility) || !in_range(distinguishability))
    throw AnalysisError("visibility and distinguishability must be in [0, 1]");
  ComplementarityRecord record;
  record.visibility = std::clamp(visibility, 0.0, 1.0);
  record.distinguishability = std::clamp(distinguishability, 0.0, 1.0);
  record.sum_of_squares = record.visibility * record.visibility + record.distinguishability * record.distinguishability;
  record.violated = record.sum_of_squares > 1 + kSlack;
  return record;
}

Eigen::VectorXd render_azimuthal_pattern(OamIndex l, std::complex<double> c_plus, std::complex<double> c_minus,
                                         int grid_n, bool normalize) {
  if (grid_n < 4 * std::abs(l) + 1) throw AnalysisError("azimuthal grid is undersampled (need grid_n >= 4|l| + 1)");
  Eigen::VectorXd out(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double phi = 2 * kPi * i / grid_n;
    out(i) = std::norm(c_plus * std::polar(1.0, l * phi) + c_minus * std::polar(1.0, -l * phi));
  }
  if (normalize && out.maxCoeff() > 0) out /= out.maxCoeff();
  return out;
}

Eigen::VectorXd render_azimuthal_pattern(OamIndex l, double intermodal_phase, int grid_n, bool normalize) {
  const double s = 1 / std::sqrt(2.0);
  return render_azimuthal_pattern(l, {s, 0}, std::polar(s, intermodal_phase), grid_n, normalize);
}

int count_lobes(const Eigen::VectorXd &pattern, double flat_tolerance) {
  const Eigen::Index n = pattern.size();
  std::vector<int> signs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = pattern((i + 1) % n) - pattern(i);
    if (std::abs(d) > flat_tolerance) signs.push_back(d > 0 ? 1 : -1);
  }
  int lobes = 0;
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] > 0 && signs[(i + 1) % signs.size()] < 0) ++lobes;
  return lobes;
}

TwoPathModel TwoPathModel::with_overlap(std::complex<double> overlap, double relative_phase, Eigen::VectorXcd u1,
                                        Eigen::VectorXcd u2) {
  if (std::abs(overlap) > 1 + 1e-12) throw AnalysisError("marker overlap must satisfy |overlap| <= 1");
  TwoPathModel model;
  model.marker1 = pol::h();
  model.marker2 = PolVector<double>(overlap, std::sqrt(std::max(0.0, 1 - std::norm(overlap))));
  model.relative_phase = relative_phase;
  model.u1 = std::move(u1);
  model.u2 = std::move(u2);
  return model;
}

std::complex<double> TwoPathModel::marker_overlap() const { return marker1.dot(marker2); }

Eigen::VectorXd two_path_pattern(const TwoPathModel &model) {
  if (model.u1.size() != model.u2.size()) throw AnalysisError("envelopes differ in length");
  const std::complex<double> coherence = model.marker_overlap() * std::polar(1.0, model.relative_phase);
  Eigen::VectorXd out(model.u1.size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out(i) = std::norm(model.u1(i)) + std::norm(model.u2(i)) +
             2 * std::real(coherence * std::conj(model.u1(i)) * model.u2(i));
  return out;
}

Eigen::VectorXd two_path_pattern(const TwoPathModel &model, const PolVector<double> &eraser) {
  if (model.u1.size() != model.u2.size()) throw AnalysisError("envelopes differ in length");
  const std::complex<double> k1 = eraser.dot(model.marker1);
  const std::complex<double> k2 = eraser.dot(model.marker2) * std::polar(1.0, model.relative_phase);
  return (k1 * model.u1 + k2 * model.u2).cwiseAbs2();
}

}  // namespace oam_eraser
