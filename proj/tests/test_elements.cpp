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

#include "oam_eraser/elements.hpp"
#include "oam_eraser/experiment.hpp"

using namespace oam_eraser;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form mask overlap: each sector [a, b) contributes
// sign * (exp(i d b) - exp(i d a)) / (i d), or sign * (b - a) when d = 0.
C mask_overlap_exact(int n, double theta, int d) {
  const double w = 2 * kPi / n;
  C total = 0;
  for (int k = 0; k < n; ++k) {
    const double a = theta + k * w, b = a + w, sign = k % 2 ? -1.0 : 1.0;
    total += d == 0 ? C(sign * w) : sign * (std::polar(1.0, d * b) - std::polar(1.0, d * a)) / C(0, d);
  }
  return total / (2 * kPi);
}

Ket canonical_source() { return build_spdc_state(SourceSpec{}); }

}  // namespace

TEST_CASE("fiber keeps a third of the flat L=1 spectrum after the q-plate") {
  const Ket after_q = apply_element(QPlateSpec{0.5, Arm::A}, canonical_source()).state.value();
  const Filtered f = fiber_postselect({Arm::A, 0}, after_q);
  REQUIRE_FALSE(f.null_outcome());
  CHECK(f.probability == doctest::Approx(1.0 / 3).epsilon(1e-14));
  // (|L>|+1> + |R>|-1>)/sqrt2 with arm A at l = 0
  const double s = 1 / std::sqrt(2.0);
  const Ket expect = Ket(Ket::Amplitudes{
      {{{Pol::H, 0}, {Pol::H, 1}}, s * pol::l()(0)},
      {{{Pol::V, 0}, {Pol::H, 1}}, s * pol::l()(1)},
      {{{Pol::H, 0}, {Pol::H, -1}}, s * pol::r()(0)},
      {{{Pol::V, 0}, {Pol::H, -1}}, s * pol::r()(1)},
  });
  CHECK(overlap_magnitude(*f.state, expect) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("fiber rejects a state with no l = 0 component") {
  const Ket psi = tensor(Local::basis(Pol::H, 2), Local::basis(Pol::H, -2));
  CHECK(fiber_postselect({Arm::A, 0}, psi).null_outcome());
}

TEST_CASE("canonical state after the quarter-wave plate") {
  const PipelineResult r = run_pipeline(canonical_config());
  // e^{-i pi/4} (|H>|-1> + i |V>|+1>)/sqrt2
  const C global = std::polar(1.0, -kPi / 4) / std::sqrt(2.0);
  CHECK(std::abs(r.state.amplitude({{Pol::H, 0}, {Pol::H, -1}}) - global) < 1e-14);
  CHECK(std::abs(r.state.amplitude({{Pol::V, 0}, {Pol::H, 1}}) - global * C(0, 1)) < 1e-14);
  CHECK(r.state.size() == 2);
  CHECK(r.cumulative_probability == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("sector state has 2|l| lobes worth of phase") {
  const Local s = sector_state(2, kPi / 8);
  CHECK(s.is_normalized());
  CHECK(std::abs(s.amplitude({Pol::H, -2}) - std::polar(1 / std::sqrt(2.0), kPi / 4)) < 1e-15);
  CHECK_THROWS(sector_state(0, 0));
}

TEST_CASE("hologram projector is idempotent") {
  const Operator p = sector_projector({1, 0.4, HologramMode::ideal, Arm::B}, 3);
  const Operator pp = compose(p, p);
  for (const auto &[in, col] : p.columns())
    for (const auto &[out, amp] : col) CHECK(std::abs(pp.element(out, in) - amp) < 1e-15);
}

TEST_CASE("binary mask first-order coupling is 2/pi") {
  for (int l = 1; l <= 4; ++l) {
    const C c = binary_mask_overlap(2 * l, 0, l, 0);
    CHECK(std::abs(c - mask_overlap_exact(2 * l, 0, l)) < 1e-9);
    CHECK(std::abs(c) == doctest::Approx(2 / kPi).epsilon(1e-9));
    CHECK(binary_coupling(l) == doctest::Approx(2 / kPi).epsilon(1e-9));
    CHECK(binary_coupling(-l) == doctest::Approx(2 / kPi).epsilon(1e-9));
  }
}

TEST_CASE("rotating the mask shifts the coupling phase") {
  // four sectors, difference 2, rotated by pi/4: phase changes by exp(2i pi/4) = i
  const C c0 = binary_mask_overlap(4, 0, 2, 0);
  const C c1 = binary_mask_overlap(4, kPi / 4, 2, 0);
  CHECK(std::abs(c1 - c0 * std::polar(1.0, kPi / 2)) < 1e-9);
  CHECK(std::abs(std::arg(c1 / c0) - kPi / 2) < 1e-9);
  CHECK(std::abs(c1 - mask_overlap_exact(4, kPi / 4, 2)) < 1e-9);
}

TEST_CASE("binary mask kills parity-mismatched harmonics") {
  for (int l = 1; l <= 3; ++l) {
    CHECK(std::abs(binary_mask_overlap(2 * l, 0.3, 0, 0)) < 1e-9);
    CHECK(std::abs(binary_mask_overlap(2 * l, 0.3, 2 * l, 0)) < 1e-9);
    CHECK(std::abs(binary_mask_overlap(2 * l, 0.3, 4 * l, 0)) < 1e-9);
  }
  // third harmonic survives with 1/3 of the weight
  CHECK(std::abs(binary_mask_overlap(2, 0, 3, 0)) == doctest::Approx(2 / (3 * kPi)).epsilon(1e-9));
  CHECK_THROWS(binary_mask_overlap(3, 0, 1, 0));
}

TEST_CASE("q-plate charge must be a half-integer") {
  CHECK_THROWS_WITH(validate(ElementSpec{QPlateSpec{0.3, Arm::A}}), doctest::Contains("unphysical q-plate charge"));
  CHECK_NOTHROW(validate(ElementSpec{QPlateSpec{1.5, Arm::A}}));
  CHECK_THROWS(validate(ElementSpec{WavePlateSpec{WavePlateKind::half, kPi, Arm::A}}));
  CHECK_THROWS(validate(ElementSpec{PolarizerSpec{0, 1.5, Arm::A}}));
  CHECK_THROWS(validate(ElementSpec{HologramSpec{0, 0, HologramMode::ideal, Arm::B}}));
  CHECK_THROWS(validate(ElementSpec{DelaySpec{-1, Arm::A}}));
}

TEST_CASE("delay of 2.3 m is about 7.67 ns") {
  CHECK(delay_seconds({2.3, Arm::A}) * 1e9 == doctest::Approx(7.6719).epsilon(1e-4));
  CHECK(std::abs(delay_seconds({2.3, Arm::A}) * 1e9 - 7.66) < 0.02);
}

TEST_CASE("polarizer with leakage") {
  const Ket v = tensor(Local::basis(Pol::V, 0), Local::basis(Pol::H, 0));
  CHECK(polarizer_apply({0, 0.1, Arm::A}, v).probability == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(polarizer_apply({0, 0, Arm::A}, v).null_outcome());
}

TEST_CASE("element names identify the arm") {
  CHECK(element_name(FiberSpec{Arm::B, 0}) == "fiber(l=0) on arm B");
  CHECK(element_arm(HologramSpec{}) == Arm::B);
}
