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

#include "oam_eraser/elements.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oam_eraser/jones.hpp"
#include "oam_eraser/quadrature.hpp"

namespace oam_eraser {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

}  // namespace

Arm element_arm(const ElementSpec &spec) {
  return std::visit([](const auto &s) { return s.arm; }, spec);
}

std::string element_name(const ElementSpec &spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const QPlateSpec &s) { os << "qplate(q=" << s.q << ")"; },
                 [&](const WavePlateSpec &s) {
                   os << (s.kind == WavePlateKind::quarter ? "quarter" : "half") << "-wave plate(fast_axis=" << s.fast_axis
                      << ")";
                 },
                 [&](const PolarizerSpec &s) { os << "polarizer(alpha=" << s.alpha << ")"; },
                 [&](const FiberSpec &s) { os << "fiber(l=" << s.accepted_l << ")"; },
                 [&](const HologramSpec &s) { os << "hologram(l=" << s.l << ", theta=" << s.theta << ")"; },
                 [&](const DelaySpec &s) { os << "delay(" << s.extra_path << " m)"; },
             },
             spec);
  os << " on arm " << arm_name(element_arm(spec));
  return os.str();
}

void validate(const ElementSpec &spec) {
  std::visit(overloaded{
                 [](const QPlateSpec &s) {
                   if (!std::isfinite(s.q) || !is_integer(2 * s.q))
                     throw ElementError("unphysical q-plate charge: 2q must be an integer");
                 },
                 [](const WavePlateSpec &s) {
                   if (!(s.fast_axis >= 0 && s.fast_axis < kPi)) throw ElementError("wave plate fast_axis must be in [0, pi)");
                 },
                 [](const PolarizerSpec &s) {
                   if (!std::isfinite(s.alpha)) throw ElementError("polarizer angle must be finite");
                   if (!(s.extinction >= 0 && s.extinction <= 1)) throw ElementError("polarizer extinction must be in [0, 1]");
                 },
                 [](const FiberSpec &) {},
                 [](const HologramSpec &s) {
                   if (s.l == 0) throw ElementError("hologram l must be nonzero");
                   if (!std::isfinite(s.theta)) throw ElementError("hologram theta must be finite");
                 },
                 [](const DelaySpec &s) {
                   if (!(s.extra_path >= 0) || !std::isfinite(s.extra_path))
                     throw ElementError("delay extra_path must be >= 0");
                 },
             },
             spec);
}

Operator qplate_operator(const QPlateSpec &spec, OamIndex cap) {
  validate(spec);
  const auto shift = static_cast<OamIndex>(std::lround(2 * spec.q));
  const PolVector<double> r = pol::r();
  const PolVector<double> l = pol::l();
  // Q = sum_l |l+2q><l| (x) |L><R|  +  |l-2q><l| (x) |R><L|
  Operator::Columns cols;
  for (OamIndex ell = -cap; ell <= cap; ++ell) {
    for (int in = 0; in < 2; ++in) {
      const std::complex<double> from_r = std::conj(r(in));
      const std::complex<double> from_l = std::conj(l(in));
      Operator::Column col;
      for (int out = 0; out < 2; ++out) {
        col.emplace_back(LocalLabel{Pol(out), ell + shift}, l(out) * from_r);
        col.emplace_back(LocalLabel{Pol(out), ell - shift}, r(out) * from_l);
      }
      cols.emplace(LocalLabel{Pol(in), ell}, std::move(col));
    }
  }
  return Operator(std::move(cols), true);
}

Jones<double> waveplate_jones(const WavePlateSpec &spec) {
  validate(spec);
  return spec.kind == WavePlateKind::quarter ? jones::quarter_wave(spec.fast_axis) : jones::half_wave(spec.fast_axis);
}

Operator waveplate_operator(const WavePlateSpec &spec, OamIndex cap) {
  return Operator::from_jones(waveplate_jones(spec), cap, true);
}

Operator polarizer_operator(const PolarizerSpec &spec, OamIndex cap) {
  validate(spec);
  return Operator::from_jones(jones::polarizer(spec.alpha, spec.extinction), cap, false);
}

Filtered polarizer_apply(const PolarizerSpec &spec, const Ket &state, OamIndex cap) {
  return apply_filter(polarizer_operator(spec, cap), spec.arm, state, cap);
}

Filtered fiber_postselect(const FiberSpec &spec, const Ket &state, OamIndex cap) {
  validate(spec);
  Operator::Columns cols;
  for (OamIndex ell = -cap; ell <= cap; ++ell)
    for (Pol p : {Pol::H, Pol::V}) {
      Operator::Column col;
      if (ell == spec.accepted_l) col.emplace_back(LocalLabel{p, ell}, 1.0);
      cols.emplace(LocalLabel{p, ell}, std::move(col));
    }
  return apply_filter(Operator(std::move(cols), false), spec.arm, state, cap);
}

Local sector_state(OamIndex l, double theta, Pol p) {
  if (l == 0) throw ElementError("hologram l must be nonzero");
  const double s = 1 / std::sqrt(2.0);
  return Local::oam({{l, s}, {-l, std::polar(s, 2 * theta)}}, p);
}

Operator sector_projector(const HologramSpec &spec, OamIndex cap) {
  validate(spec);
  const double scale = spec.mode == HologramMode::binary ? binary_coupling(spec.l) : 1.0;
  Operator::Columns cols;
  for (Pol p : {Pol::H, Pol::V}) {
    const Local target = sector_state(spec.l, spec.theta, p);
    for (OamIndex ell = -cap; ell <= cap; ++ell) {
      const LocalLabel in{p, ell};
      Operator::Column col;
      const std::complex<double> bra = std::conj(target.amplitude(in));
      if (bra != 0.0)
        for (const auto &[out, amp] : target.amplitudes()) col.emplace_back(out, scale * amp * bra);
      cols.emplace(in, std::move(col));
    }
  }
  return Operator(std::move(cols), false);
}

Filtered hologram_apply(const HologramSpec &spec, const Ket &state, OamIndex cap) {
  return apply_filter(sector_projector(spec, cap), spec.arm, state, cap);
}

std::complex<double> binary_mask_overlap(int n_sectors, double theta, OamIndex l_in, OamIndex l_out) {
  if (n_sectors < 2 || n_sectors % 2 != 0) throw ElementError("binary mask needs an even number of sectors >= 2");
  const double dl = static_cast<double>(l_in - l_out);
  const double width = 2 * kPi / n_sectors;
  // The integrand is periodic, so integrate over [theta, theta + 2pi) where
  // sector k of the rotated mask starts at theta + k*width with sign (-1)^k.
  // Each sector is split further so the first Simpson estimate never sees a
  // full period of exp(i dl phi).
  constexpr int kPieces = 8;
  const double tol = 1e-11 / (n_sectors * kPieces);
  auto phase = [dl](double phi) { return std::polar(1.0, dl * phi); };
  std::complex<double> total = 0;
  for (int k = 0; k < n_sectors; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    for (int piece = 0; piece < kPieces; ++piece) {
      const double a = theta + k * width + piece * width / kPieces;
      total += sign * quadrature::adaptive_simpson(phase, a, a + width / kPieces, tol);
    }
  }
  return total / (2 * kPi);
}

double binary_coupling(OamIndex l) {
  if (l == 0) throw ElementError("hologram l must be nonzero");
  return std::abs(binary_mask_overlap(2 * std::abs(l), 0.0, l, 0));
}

double delay_seconds(const DelaySpec &spec) {
  validate(spec);
  return spec.extra_path / kSpeedOfLight;
}

Filtered apply_element(const ElementSpec &spec, const Ket &state, OamIndex cap) {
  validate(spec);
  return std::visit(overloaded{
                        [&](const QPlateSpec &s) {
                          return Filtered{apply_local(qplate_operator(s, cap), s.arm, state, cap), 1.0};
                        },
                        [&](const WavePlateSpec &s) {
                          return Filtered{apply_local(waveplate_operator(s, cap), s.arm, state, cap), 1.0};
                        },
                        [&](const PolarizerSpec &s) { return polarizer_apply(s, state, cap); },
                        [&](const FiberSpec &s) { return fiber_postselect(s, state, cap); },
                        [&](const HologramSpec &s) { return hologram_apply(s, state, cap); },
                        [&](const DelaySpec &) { return Filtered{state, 1.0}; },
                    },
                    spec);
}

}  // namespace oam_eraser
