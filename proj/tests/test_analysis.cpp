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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oam_eraser/analysis.hpp"
#include "oam_eraser/experiment.hpp"

using namespace oam_eraser;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Random pure state on (arm A polarization) x (arm B path +-l).
Ket random_qubit_pair(std::mt19937_64 &rng, int l) {
  std::normal_distribution<double> g;
  Ket::Amplitudes amps;
  for (Pol p : {Pol::H, Pol::V})
    for (int s : {1, -1}) amps[{{p, 0}, {Pol::H, s * l}}] = C(g(rng), g(rng));
  return Ket(std::move(amps)).normalized();
}

Eigen::VectorXcd gaussian_envelope(double centre, int n) {
  Eigen::VectorXcd u(n);
  for (int i = 0; i < n; ++i) {
    const double x = -3 + 6.0 * i / (n - 1);
    u(i) = std::polar(std::exp(-(x - centre) * (x - centre)), 4 * x);
  }
  return u;
}

}  // namespace

TEST_CASE("sinusoid fit recovers known parameters") {
  const auto x = linspace(0, 2 * kPi, 24, false);
  std::vector<double> y;
  for (double t : x) y.push_back(3 + 1.5 * std::cos(2 * t + 0.7));
  const FringeFit f = fit_sinusoid(x, y);
  CHECK(f.offset == doctest::Approx(3).epsilon(1e-13));
  CHECK(f.amplitude == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(f.phase == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(f.residual_rms < 1e-13);
  CHECK(visibility(f) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(f.evaluate(0.2) == doctest::Approx(3 + 1.5 * std::cos(0.4 + 0.7)).epsilon(1e-13));
}

TEST_CASE("sinusoid fit rejects degenerate scans") {
  const std::vector<double> three = {0, 1, 2};
  CHECK_THROWS_AS(fit_sinusoid(three, three), AnalysisError);
  // period-pi settings alias onto a single design row
  const std::vector<double> aliased = {0, kPi, 2 * kPi, 3 * kPi};
  CHECK_THROWS_WITH(fit_sinusoid(aliased, std::vector<double>{1, 1, 1, 1}), doctest::Contains("rank"));
}

TEST_CASE("visibility of an all-zero series") {
  ScanSeries s;
  s.settings = {0, 1, 2, 3};
  s.joint = {0, 0, 0, 0};
  s.conditional = s.joint;
  CHECK_THROWS_WITH(visibility(s), doctest::Contains("no signal"));
}

TEST_CASE("fitted visibility of the canonical scan is |sin 2 alpha|") {
  const ExperimentConfig config = canonical_config();
  const Ket psi = run_pipeline(config).state;
  for (double alpha : linspace(0, kPi / 4, 5)) {
    ScanSeries s = scan(psi, config, ScanVariable::theta, alpha, linspace(0, 2 * kPi, 72, false));
    s.fit = fit_sinusoid(s);
    CHECK(std::abs(visibility(s) - theoretical_visibility(alpha)) < 1e-10);
  }
}

TEST_CASE("complementarity saturates for pure states") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Ket psi = random_qubit_pair(rng, 1);
    const auto rec = complementarity_check(path_coherence(psi, 1), distinguishability(psi, 1));
    CHECK_FALSE(rec.violated);
    CHECK(rec.sum_of_squares == doctest::Approx(1).epsilon(1e-9));
  }
}

TEST_CASE("complementarity at the marked and erased extremes") {
  const Ket psi = run_pipeline(canonical_config()).state;
  // paths carry orthogonal markers H and V
  CHECK(distinguishability(psi, 1) == doctest::Approx(1).epsilon(1e-14));
  CHECK(path_coherence(psi, 1) < 1e-14);
  const double s = 1 / std::sqrt(2.0);
  const Ket unmarked(Ket::Amplitudes{{{{Pol::H, 0}, {Pol::H, 1}}, s}, {{{Pol::H, 0}, {Pol::H, -1}}, s}});
  CHECK(distinguishability(unmarked, 1) < 1e-14);
  CHECK(path_coherence(unmarked, 1) == doctest::Approx(1).epsilon(1e-14));
  CHECK_THROWS_AS(distinguishability(tensor(Local::basis(Pol::H, 0), Local::basis(Pol::H, 2)), 1), AnalysisError);
}

TEST_CASE("complementarity check flags a violation") {
  CHECK(complementarity_check(0.9, 0.9).violated);
  CHECK_FALSE(complementarity_check(0.6, 0.8).violated);
  CHECK_THROWS(complementarity_check(1.2, 0));
}

TEST_CASE("azimuthal lobes scale with 2|l|") {
  for (int l = 1; l <= 8; ++l) {
    CHECK(count_lobes(render_azimuthal_pattern(l, 0.3, 360)) == 2 * l);
    CHECK(count_lobes(render_azimuthal_pattern(-l, 1.1, 361)) == 2 * l);
  }
  CHECK(count_lobes(render_azimuthal_pattern(2, C(1), C(0), 100)) == 0);
  CHECK_THROWS(render_azimuthal_pattern(3, 0.0, 12));
  const Eigen::VectorXd p = render_azimuthal_pattern(1, 0.0, 8, true);
  CHECK(p.maxCoeff() == doctest::Approx(1));
  CHECK(p(0) == doctest::Approx(1));
}

TEST_CASE("two-path eraser patterns sum to the marked pattern") {
  const Eigen::VectorXcd u1 = gaussian_envelope(-0.5, 101);
  const Eigen::VectorXcd u2 = gaussian_envelope(0.5, 101);
  for (C overlap : {C(0), C(0.5, 0.2), C(0, 1)}) {
    const TwoPathModel m = TwoPathModel::with_overlap(overlap, 0.4, u1, u2);
    const Eigen::VectorXd sum = two_path_pattern(m, pol::d()) + two_path_pattern(m, pol::a());
    CHECK((sum - two_path_pattern(m)).cwiseAbs().maxCoeff() < 1e-12);
  }
  // orthogonal markers: the marked pattern has no cross term
  const TwoPathModel marked = TwoPathModel::with_overlap(0, 0.4, u1, u2);
  CHECK((two_path_pattern(marked) - (u1.cwiseAbs2() + u2.cwiseAbs2())).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(TwoPathModel::with_overlap(C(1.5), 0, u1, u2));
}
