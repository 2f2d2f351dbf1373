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

// Optical elements. Each element acts on one arm and compiles to a
// LocalOperator (unitary elements) or is applied as a filter that returns
// its success probability (polarizer, fiber, hologram).

#include <complex>
#include <string>
#include <variant>

#include "oam_eraser/hilbert.hpp"

namespace oam_eraser {

using Ket = JointKet<double>;
using Operator = LocalOperator<double>;
using Local = LocalState<double>;
using Filtered = FilterResult<double>;

/// Speed of light in vacuum, m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

class ElementError : public HilbertError {
 public:
  using HilbertError::HilbertError;
};

/// Spin-orbit plate: |l,R> -> |l+2q,L>, |l,L> -> |l-2q,R>.
struct QPlateSpec {
  double q = 0.5;
  Arm arm = Arm::A;
};

enum class WavePlateKind { quarter, half };

struct WavePlateSpec {
  WavePlateKind kind = WavePlateKind::quarter;
  double fast_axis = 0;  // radians from horizontal, in [0, pi)
  Arm arm = Arm::A;
};

/// Linear polarizer at `alpha`. `extinction` is the amplitude with which the
/// orthogonal component leaks through; 0 is ideal.
struct PolarizerSpec {
  double alpha = 0;
  double extinction = 0;
  Arm arm = Arm::A;
};

/// Single-mode fiber: keeps only l == accepted_l on its arm.
struct FiberSpec {
  Arm arm = Arm::A;
  OamIndex accepted_l = 0;
};

enum class HologramMode { ideal, binary };

/// Rotated sector mask measuring (|l> + exp(2i theta)|-l>)/sqrt2.
struct HologramSpec {
  OamIndex l = 1;
  double theta = 0;
  HologramMode mode = HologramMode::ideal;
  Arm arm = Arm::B;
};

/// Extra free-space path. Only affects detection timing.
struct DelaySpec {
  double extra_path = 0;  // meters
  Arm arm = Arm::A;
};

using ElementSpec = std::variant<QPlateSpec, WavePlateSpec, PolarizerSpec, FiberSpec, HologramSpec, DelaySpec>;

Arm element_arm(const ElementSpec &spec);
std::string element_name(const ElementSpec &spec);

/// Throws ElementError when a spec violates its invariants.
void validate(const ElementSpec &spec);

Operator qplate_operator(const QPlateSpec &spec, OamIndex cap = kDefaultOamCap);

Jones<double> waveplate_jones(const WavePlateSpec &spec);
Operator waveplate_operator(const WavePlateSpec &spec, OamIndex cap = kDefaultOamCap);

Operator polarizer_operator(const PolarizerSpec &spec, OamIndex cap = kDefaultOamCap);
Filtered polarizer_apply(const PolarizerSpec &spec, const Ket &state, OamIndex cap = kDefaultOamCap);

Filtered fiber_postselect(const FiberSpec &spec, const Ket &state, OamIndex cap = kDefaultOamCap);

/// (|l> + exp(2i theta)|-l>)/sqrt2 with polarization `p`.
Local sector_state(OamIndex l, double theta, Pol p = Pol::H);

/// |theta><theta| on the OAM of the hologram's arm (identity on
/// polarization). In binary mode the projector is scaled by the first-order
/// coupling amplitude of the binary mask.
Operator sector_projector(const HologramSpec &spec, OamIndex cap = kDefaultOamCap);
Filtered hologram_apply(const HologramSpec &spec, const Ket &state, OamIndex cap = kDefaultOamCap);

/// Coupling amplitude of an n-sector binary (+1/-1) angular mask rotated by
/// theta between OAM modes l_in and l_out:
///
///   c = 1/(2 pi) * int_0^{2 pi} m(phi - theta) exp(i (l_in - l_out) phi) dphi
///
/// evaluated by adaptive quadrature to 1e-9 absolute.
std::complex<double> binary_mask_overlap(int n_sectors, double theta, OamIndex l_in, OamIndex l_out);

/// |c| for the mask with 2|l| sectors coupling +-l into l = 0 (2/pi).
double binary_coupling(OamIndex l);

double delay_seconds(const DelaySpec &spec);

/// Applies any element. Unitary elements report probability 1.
Filtered apply_element(const ElementSpec &spec, const Ket &state, OamIndex cap = kDefaultOamCap);

}  // namespace oam_eraser
