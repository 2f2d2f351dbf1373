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

#include "oam_eraser/experiment.hpp"
#include "oam_eraser/report.hpp"

using namespace oam_eraser;

namespace {

constexpr double kPi = std::numbers::pi;

double coincidence_law(double alpha, double theta) {
  return 0.5 * (1 + std::sin(2 * alpha) * std::cos(2 * theta + kPi / 2));
}

}  // namespace

TEST_CASE("conditional coincidence probability at a reference point") {
  const auto p = coincidence_probability(canonical_config(), kPi / 8, -kPi / 4);
  CHECK(p.conditional == doctest::Approx(0.8535533905932737).epsilon(1e-14));
  CHECK(p.joint == doctest::Approx(0.8535533905932737 / 2).epsilon(1e-14));
}

TEST_CASE("coincidence law over a coarse grid") {
  const ExperimentConfig config = canonical_config();
  const Ket psi = run_pipeline(config).state;
  for (double alpha : linspace(0, kPi, 9))
    for (double theta : linspace(0, 2 * kPi, 13))
      CHECK(std::abs(coincidence_probability(psi, config, alpha, theta).conditional - coincidence_law(alpha, theta)) <
            1e-12);
}

TEST_CASE("gaussian spectrum weights") {
  const auto c = spectrum_coefficients({SourceKind::spdc, 2, SpectrumKind::gaussian, 1.0});
  REQUIRE(c.size() == 5);
  CHECK(c[0] * c[0] / (c[2] * c[2]) == doctest::Approx(std::exp(-4.0)).epsilon(1e-14));
  double norm = 0;
  for (double v : c) norm += v * v;
  CHECK(norm == doctest::Approx(1).epsilon(1e-14));

  ExperimentConfig config = canonical_config();
  config.source = {SourceKind::spdc, 2, SpectrumKind::gaussian, 1.0};
  // fiber keeps the l = +-1 pair weights: 2 e^{-1} / (1 + 2 e^{-1} + 2 e^{-4})
  const double e1 = std::exp(-1.0), e4 = std::exp(-4.0);
  CHECK(run_pipeline(config).cumulative_probability == doctest::Approx(e1 / (1 + 2 * e1 + 2 * e4)).epsilon(1e-13));
}

TEST_CASE("flat spectrum is anticorrelated in OAM") {
  const Ket psi = build_spdc_state({SourceKind::spdc, 3});
  CHECK(psi.size() == 7);
  for (const auto &[label, amp] : psi.amplitudes()) {
    CHECK(label.a.l == -label.b.l);
    CHECK(std::norm(amp) == doctest::Approx(1.0 / 7).epsilon(1e-14));
  }
}

TEST_CASE("generic two-path source") {
  ExperimentConfig config;
  config.source = {SourceKind::generic_two_path, 2};
  config.analyzer_b.l = 2;
  const Ket psi = run_pipeline(config).state;
  CHECK(psi.size() == 2);
  CHECK(psi.max_abs_oam() == 2);
  // D polarizer erases H/V marking: full visibility
  const double pmax = coincidence_probability(psi, config, kPi / 4, 0).conditional;
  CHECK(pmax == doctest::Approx(1).epsilon(1e-13));
  config.source.l_max = 0;
  CHECK_THROWS_AS(run_pipeline(config), ConfigError);
}

TEST_CASE("null pipeline names the element") {
  ExperimentConfig config = canonical_config();
  config.elements_a.insert(config.elements_a.begin() + 1, FiberSpec{Arm::A, 5});
  try {
    run_pipeline(config);
    FAIL("expected a null pipeline");
  } catch (const NullPipelineError &e) {
    CHECK(e.element() == "fiber(l=5) on arm A");
    CHECK(e.index() == 1);
    CHECK(e.arm() == Arm::A);
  }
}

TEST_CASE("config validation") {
  ExperimentConfig config = canonical_config();
  config.elements_a.push_back(HologramSpec{});  // arm B element in arm A list
  CHECK_THROWS_AS(validate(config), ConfigError);
  config = canonical_config();
  config.counting.gate = 0;
  CHECK_THROWS_AS(validate(config), ConfigError);
  config = canonical_config();
  config.elements_a.push_back(DelaySpec{1, Arm::A});
  config.elements_a.push_back(DelaySpec{2, Arm::A});
  CHECK_THROWS_AS(validate(config), ConfigError);
}

TEST_CASE("measurement order does not change the statistics") {
  const ExperimentConfig config = canonical_config();
  const Ket psi = run_pipeline(config).state;
  for (double alpha : linspace(0, kPi, 7, false))
    for (double theta : linspace(0, kPi, 7, false)) {
      const double a = causal_order_probability(psi, config, alpha, theta, CausalOrder::a_first);
      const double b = causal_order_probability(psi, config, alpha, theta, CausalOrder::b_first);
      CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("analyzer probability on arm A") {
  const ExperimentConfig config = canonical_config();
  const Ket psi = run_pipeline(config).state;
  for (double alpha : linspace(0, kPi, 5)) CHECK(analyzer_a_probability(psi, config, alpha) == doctest::Approx(0.5));
  ExperimentConfig open = config;
  open.analyzer_a.reset();
  CHECK(analyzer_a_probability(psi, open, 0.2) == 1.0);
  // marginal hologram statistic with arm A unanalysed is flat
  for (double theta : linspace(0, kPi, 5))
    CHECK(coincidence_probability(psi, open, 0, theta).joint == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("expected counts include the accidental floor") {
  CountingModel m;
  m.singles_rate_a = 1e4;
  m.singles_rate_b = 2e4;
  CHECK(expected_counts(m, 0.25) == doctest::Approx(1000 * 5 * 0.25 + 1e4 * 2e4 * 25e-9 * 5).epsilon(1e-14));
}

TEST_CASE("count sampling is deterministic and independent of thread count") {
  const ExperimentConfig config = canonical_config();
  const ScanSeries s = scan(config, ScanVariable::theta, kPi / 8, linspace(0, 2 * kPi, 37, false));
  const std::string one = scan_csv(simulate_counts(config, s, 4, 1));
  CHECK(scan_csv(simulate_counts(config, s, 4, 3)) == one);
  CHECK(scan_csv(simulate_counts(config, s, 4, 8)) == one);
  CHECK(scan_csv(simulate_counts(config, s, 5, 1)) != one);
}

TEST_CASE("count sample means follow the Poisson model") {
  const ExperimentConfig config = canonical_config();
  const ScanSeries s = scan(config, ScanVariable::theta, kPi / 8, linspace(0, kPi, 4, false));
  constexpr int kReps = 200;
  std::vector<double> sum(s.size(), 0.0);
  for (int rep = 0; rep < kReps; ++rep) {
    const ScanSeries c = simulate_counts(config, s, rep);
    for (std::size_t i = 0; i < s.size(); ++i) sum[i] += static_cast<double>((*c.counts)[i]);
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double mean = expected_counts(config.counting, s.joint[i]);
    CHECK(std::abs(sum[i] / kReps - mean) <= 3 * std::sqrt(mean / kReps));
  }
}

TEST_CASE("timeline delay and coincidences") {
  ExperimentConfig config = canonical_config();
  config.elements_a.push_back(DelaySpec{2.3, Arm::A});
  const TimelineResult r = simulate_timeline(config, kPi / 4, kPi / 4, 1.0);
  CHECK(std::abs(r.delay * 1e9 - 7.66) < 0.02);
  CHECK(r.coincidences == r.pairs_detected);
  CHECK(r.true_coincidences == r.pairs_detected);
  CHECK(r.events.size() == r.singles_a + r.singles_b);

  config.elements_a.back() = DelaySpec{30, Arm::A};
  const TimelineResult far = simulate_timeline(config, kPi / 4, kPi / 4, 1.0);
  CHECK(far.true_coincidences == 0);
  CHECK(far.pairs_detected == r.pairs_detected);
  CHECK_THROWS_AS(simulate_timeline(config, 0, 0, 0), ConfigError);
}
