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

// Jones matrices in the (H, V) basis.
//
// A retarder with fast axis f = (cos t, sin t) and slow axis
// s = (-sin t, cos t) delays the slow component by the retardance G:
//
//   J(t, G) = |f><f| + exp(-iG) |s><s|
//
// so the quarter-wave plate at t = pi/4 is
//
//   QWP(pi/4) = exp(-i pi/4)/sqrt2 * [[1, i], [i, 1]]
//
// which sends R -> exp(-i pi/4) H and L -> exp(i pi/4) V.

#include <cmath>
#include <numbers>

#include "oam_eraser/hilbert.hpp"

namespace oam_eraser::jones {

template <typename Scalar = double>
Jones<Scalar> retarder(Scalar fast_axis, Scalar retardance) {
  const PolVector<Scalar> f = pol::linear<Scalar>(fast_axis);
  const PolVector<Scalar> s = pol::linear<Scalar>(fast_axis + std::numbers::pi_v<Scalar> / 2);
  const Complex<Scalar> lag = std::polar(Scalar(1), -retardance);
  return f * f.adjoint() + lag * (s * s.adjoint());
}

template <typename Scalar = double>
Jones<Scalar> quarter_wave(Scalar fast_axis) {
  return retarder<Scalar>(fast_axis, std::numbers::pi_v<Scalar> / 2);
}

template <typename Scalar = double>
Jones<Scalar> half_wave(Scalar fast_axis) {
  return retarder<Scalar>(fast_axis, std::numbers::pi_v<Scalar>);
}

/// |a><a| + leak |a_perp><a_perp|; leak = 0 is the ideal polarizer.
template <typename Scalar = double>
Jones<Scalar> polarizer(Scalar angle, Scalar leak = Scalar(0)) {
  const PolVector<Scalar> pass = pol::linear<Scalar>(angle);
  const PolVector<Scalar> block = pol::linear<Scalar>(angle + std::numbers::pi_v<Scalar> / 2);
  return pass * pass.adjoint() + Complex<Scalar>(leak) * (block * block.adjoint());
}

}  // namespace oam_eraser::jones
