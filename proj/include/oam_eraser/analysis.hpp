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

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "oam_eraser/elements.hpp"
#include "oam_eraser/series.hpp"

namespace oam_eraser {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit of offset + amplitude * cos(2 theta + phase). The model
/// is linear in (offset, a cos(phase), a sin(phase)), so it is solved
/// directly. Needs at least 4 distinct settings and a full-rank design.
FringeFit fit_sinusoid(std::span<const double> settings, std::span<const double> values);

/// Fits the series' counts when present, otherwise its joint probabilities.
FringeFit fit_sinusoid(const ScanSeries &series);

/// Michelson contrast (max - min)/(max + min). Uses the fitted extrema when
/// the series carries a fit, raw extrema otherwise.
double visibility(const ScanSeries &series);

/// Contrast of a fitted fringe; extrema are clamped at zero.
double visibility(const FringeFit &fit);

/// |sin 2 alpha|
double theoretical_visibility(double alpha);

/// Which-path distinguishability of the two OAM paths +-l on arm B, using
/// arm A as the marker:
///
///   D = || p_+ rho_A|+ - p_- rho_A|- ||_1
///
/// with p_+- the path probabilities and rho_A|+- the normalized marker
/// states conditioned on each path. Equal path weights reduce this to the
/// trace distance of the conditional markers. The state must live on
/// arm B's +-l subspace.
double distinguishability(const Ket &state, OamIndex l);

/// Fringe visibility of arm B's +-l subspace with arm A unanalysed:
/// 2|rho_B(+l,-l)| / (rho_B(+l,+l) + rho_B(-l,-l)).
double path_coherence(const Ket &state, OamIndex l);

struct ComplementarityRecord {
  double visibility = 0;
  double distinguishability = 0;
  double sum_of_squares = 0;
  bool violated = false;  // V^2 + D^2 > 1 + 1e-9
};

ComplementarityRecord complementarity_check(double visibility, double distinguishability);

/// I(phi) = |exp(i l phi) + exp(i(-l phi + phase))|^2 / 2 = 1 + cos(2 l phi - phase)
/// on grid_n points over [0, 2 pi). Requires grid_n >= 4|l| + 1.
Eigen::VectorXd render_azimuthal_pattern(OamIndex l, double intermodal_phase, int grid_n, bool normalize = false);

/// I(phi) = |c_plus exp(i l phi) + c_minus exp(-i l phi)|^2.
Eigen::VectorXd render_azimuthal_pattern(OamIndex l, std::complex<double> c_plus, std::complex<double> c_minus,
                                         int grid_n, bool normalize = false);

/// Local maxima of a periodic sampled curve, counted as +/- sign changes of
/// the discrete derivative (flat steps skipped). A flat curve has none.
int count_lobes(const Eigen::VectorXd &pattern, double flat_tolerance = 1e-12);

/// Two paths with envelopes u1, u2 marked by polarization states m1, m2.
struct TwoPathModel {
  PolVector<double> marker1 = pol::h();
  PolVector<double> marker2 = pol::v();
  double relative_phase = 0;
  Eigen::VectorXcd u1;
  Eigen::VectorXcd u2;

  /// Markers m1 = H, m2 = overlap H + sqrt(1 - |overlap|^2) V.
  static TwoPathModel with_overlap(std::complex<double> overlap, double relative_phase, Eigen::VectorXcd u1,
                                   Eigen::VectorXcd u2);

  /// <m1|m2>
  std::complex<double> marker_overlap() const;
};

/// I(x) = |u1|^2 + |u2|^2 + 2 Re(<m1|m2> u1* u2 exp(i phase)).
Eigen::VectorXd two_path_pattern(const TwoPathModel &model);

/// Pattern conditioned on projecting the marker onto `eraser`:
/// |<e|m1> u1 + <e|m2> u2 exp(i phase)|^2.
Eigen::VectorXd two_path_pattern(const TwoPathModel &model, const PolVector<double> &eraser);

}  // namespace oam_eraser
