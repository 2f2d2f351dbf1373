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

// Sparse two-photon states over (polarization x OAM) per arm.
//
// A photon's local basis is |pol, l> with pol in {H, V} and integer l. All
// other polarizations are superpositions in this basis:
//
//   D = (H + V)/sqrt2    A = (H - V)/sqrt2
//   R = (H - iV)/sqrt2   L = (H + iV)/sqrt2
//
// States are immutable values. Every operation returns a new state.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oam_eraser {

enum class Arm : std::uint8_t { A, B };
enum class Pol : std::uint8_t { H, V };

using OamIndex = int;

inline constexpr OamIndex kDefaultOamCap = 32;

/// Squared magnitudes below this are treated as an extinguished state.
inline constexpr double kNullProbability = 1e-14;
/// Amplitudes below this magnitude are dropped from sparse maps.
inline constexpr double kPruneThreshold = 1e-15;

class HilbertError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char *arm_name(Arm arm) { return arm == Arm::A ? "A" : "B"; }
inline const char *pol_name(Pol pol) { return pol == Pol::H ? "H" : "V"; }

struct LocalLabel {
  Pol pol = Pol::H;
  OamIndex l = 0;
  auto operator<=>(const LocalLabel &) const = default;
};

struct JointLabel {
  LocalLabel a;
  LocalLabel b;
  auto operator<=>(const JointLabel &) const = default;

  const LocalLabel &on(Arm arm) const { return arm == Arm::A ? a : b; }
  LocalLabel &on(Arm arm) { return arm == Arm::A ? a : b; }
};

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Polarization vector in the (H, V) basis.
template <typename Scalar>
using PolVector = Eigen::Matrix<Complex<Scalar>, 2, 1>;

/// 2x2 Jones matrix in the (H, V) basis.
template <typename Scalar>
using Jones = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

namespace pol {

template <typename Scalar = double>
PolVector<Scalar> h() {
  return PolVector<Scalar>(1, 0);
}
template <typename Scalar = double>
PolVector<Scalar> v() {
  return PolVector<Scalar>(0, 1);
}
template <typename Scalar = double>
PolVector<Scalar> d() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return PolVector<Scalar>(s, s);
}
template <typename Scalar = double>
PolVector<Scalar> a() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return PolVector<Scalar>(s, -s);
}
template <typename Scalar = double>
PolVector<Scalar> r() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return PolVector<Scalar>(Complex<Scalar>(s, 0), Complex<Scalar>(0, -s));
}
template <typename Scalar = double>
PolVector<Scalar> l() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  return PolVector<Scalar>(Complex<Scalar>(s, 0), Complex<Scalar>(0, s));
}
/// cos(angle)|H> + sin(angle)|V>
template <typename Scalar = double>
PolVector<Scalar> linear(Scalar angle) {
  return PolVector<Scalar>(std::cos(angle), std::sin(angle));
}

}  // namespace pol

namespace detail {

template <typename Scalar>
bool finite(const Complex<Scalar> &z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <typename Label, typename Scalar>
void prune(std::map<Label, Complex<Scalar>> &amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (!finite(it->second)) throw HilbertError("non-finite amplitude");
    if (std::abs(it->second) < Scalar(kPruneThreshold))
      it = amps.erase(it);
    else
      ++it;
  }
}

template <typename Label, typename Scalar>
Scalar squared_norm(const std::map<Label, Complex<Scalar>> &amps) {
  Scalar total = 0;
  for (const auto &[label, amp] : amps) total += std::norm(amp);
  return total;
}

}  // namespace detail

/// Single-photon state over |pol, l>.
template <typename Scalar>
class LocalState {
 public:
  using Amplitudes = std::map<LocalLabel, Complex<Scalar>>;

  LocalState() = default;
  explicit LocalState(Amplitudes amps) : amps_(std::move(amps)) { detail::prune(amps_); }

  static LocalState basis(Pol p, OamIndex l) { return LocalState(Amplitudes{{{p, l}, Complex<Scalar>(1)}}); }

  /// Polarization vector carried by a single OAM mode.
  static LocalState polarized(const PolVector<Scalar> &pv, OamIndex l = 0) {
    return LocalState(Amplitudes{{{Pol::H, l}, pv(0)}, {{Pol::V, l}, pv(1)}});
  }

  /// OAM superposition sum_l c_l |l> with a fixed polarization.
  static LocalState oam(const std::map<OamIndex, Complex<Scalar>> &coeffs, Pol p = Pol::H) {
    Amplitudes amps;
    for (const auto &[l, c] : coeffs) amps[{p, l}] += c;
    return LocalState(std::move(amps));
  }

  const Amplitudes &amplitudes() const { return amps_; }
  Complex<Scalar> amplitude(const LocalLabel &label) const {
    auto it = amps_.find(label);
    return it == amps_.end() ? Complex<Scalar>(0) : it->second;
  }
  Scalar squared_norm() const { return detail::squared_norm(amps_); }
  bool is_normalized(Scalar tol = Scalar(1e-12)) const { return std::abs(squared_norm() - 1) <= tol; }

  LocalState normalized() const {
    const Scalar n = std::sqrt(squared_norm());
    if (n <= Scalar(0)) throw HilbertError("cannot normalize a zero state");
    Amplitudes out;
    for (const auto &[label, amp] : amps_) out.emplace(label, amp / n);
    return LocalState(std::move(out));
  }

 private:
  Amplitudes amps_;
};

/// Two-photon state. `norm_tracked` is the product of the success
/// probabilities of all non-unitary steps applied so far.
template <typename Scalar>
class JointKet {
 public:
  using Amplitudes = std::map<JointLabel, Complex<Scalar>>;

  JointKet() = default;
  explicit JointKet(Amplitudes amps, Scalar norm_tracked = Scalar(1))
      : amps_(std::move(amps)), norm_tracked_(norm_tracked) {
    detail::prune(amps_);
    if (!(norm_tracked_ >= Scalar(0) && norm_tracked_ <= Scalar(1) + Scalar(1e-12)))
      throw HilbertError("norm_tracked out of [0, 1]");
    norm_tracked_ = std::min(norm_tracked_, Scalar(1));
  }

  const Amplitudes &amplitudes() const { return amps_; }
  std::size_t size() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }
  Scalar norm_tracked() const { return norm_tracked_; }

  Complex<Scalar> amplitude(const JointLabel &label) const {
    auto it = amps_.find(label);
    return it == amps_.end() ? Complex<Scalar>(0) : it->second;
  }

  Scalar squared_norm() const { return detail::squared_norm(amps_); }
  bool is_normalized(Scalar tol = Scalar(1e-12)) const { return std::abs(squared_norm() - 1) <= tol; }

  JointKet normalized() const {
    const Scalar n = std::sqrt(squared_norm());
    if (n <= Scalar(0)) throw HilbertError("cannot normalize a zero state");
    Amplitudes out;
    for (const auto &[label, amp] : amps_) out.emplace(label, amp / n);
    return JointKet(std::move(out), norm_tracked_);
  }

  JointKet with_norm_tracked(Scalar value) const { return JointKet(amps_, value); }

  /// Largest |l| on either arm.
  OamIndex max_abs_oam() const {
    OamIndex m = 0;
    for (const auto &[label, amp] : amps_) m = std::max({m, std::abs(label.a.l), std::abs(label.b.l)});
    return m;
  }

 private:
  Amplitudes amps_;
  Scalar norm_tracked_ = 1;
};

/// <lhs|rhs>
template <typename Scalar>
Complex<Scalar> inner(const JointKet<Scalar> &lhs, const JointKet<Scalar> &rhs) {
  Complex<Scalar> acc(0);
  for (const auto &[label, amp] : lhs.amplitudes()) acc += std::conj(amp) * rhs.amplitude(label);
  return acc;
}

/// |<lhs|rhs>| for normalized states; 1 means equal up to a global phase.
template <typename Scalar>
Scalar overlap_magnitude(const JointKet<Scalar> &lhs, const JointKet<Scalar> &rhs) {
  return std::abs(inner(lhs, rhs));
}

template <typename Scalar>
JointKet<Scalar> tensor(const LocalState<Scalar> &ket_a, const LocalState<Scalar> &ket_b) {
  if (!ket_a.is_normalized() || !ket_b.is_normalized()) throw HilbertError("unnormalized factor");
  typename JointKet<Scalar>::Amplitudes amps;
  for (const auto &[la, aa] : ket_a.amplitudes())
    for (const auto &[lb, ab] : ket_b.amplitudes()) amps.emplace(JointLabel{la, lb}, aa * ab);
  return JointKet<Scalar>(std::move(amps));
}

/// Sparse operator on one photon. Stored by column: for every input label
/// in the declared support, the list of (output label, matrix element).
/// A declared input with an empty column maps to zero. Inputs outside the
/// support are not covered and applying the operator to them is an error.
template <typename Scalar>
class LocalOperator {
 public:
  using Column = std::vector<std::pair<LocalLabel, Complex<Scalar>>>;
  using Columns = std::map<LocalLabel, Column>;

  LocalOperator() = default;
  LocalOperator(Columns columns, bool unitary) : columns_(std::move(columns)), unitary_(unitary) {
    for (auto &[in, col] : columns_) {
      std::map<LocalLabel, Complex<Scalar>> merged;
      for (const auto &[out, amp] : col) merged[out] += amp;
      col.clear();
      for (const auto &[out, amp] : merged) {
        if (!detail::finite(amp)) throw HilbertError("non-finite operator entry");
        if (amp != Complex<Scalar>(0)) col.emplace_back(out, amp);
      }
    }
  }

  /// Identity on every label with |l| <= cap.
  static LocalOperator identity(OamIndex cap = kDefaultOamCap) {
    return from_jones(Jones<Scalar>::Identity(), cap, true);
  }

  /// Polarization-only operator `m`, identity on l, declared for |l| <= cap.
  static LocalOperator from_jones(const Jones<Scalar> &m, OamIndex cap, bool unitary) {
    Columns cols;
    for (OamIndex l = -cap; l <= cap; ++l) {
      for (int in = 0; in < 2; ++in) {
        Column col;
        for (int out = 0; out < 2; ++out)
          if (m(out, in) != Complex<Scalar>(0)) col.emplace_back(LocalLabel{Pol(out), l}, m(out, in));
        cols.emplace(LocalLabel{Pol(in), l}, std::move(col));
      }
    }
    return LocalOperator(std::move(cols), unitary);
  }

  /// Rank-1 projector |t><t| declared on `support` plus the labels of t.
  static LocalOperator projector(const LocalState<Scalar> &target, std::vector<LocalLabel> support) {
    for (const auto &[label, amp] : target.amplitudes()) support.push_back(label);
    Columns cols;
    for (const auto &in : support) {
      Column col;
      const Complex<Scalar> bra = std::conj(target.amplitude(in));
      if (bra != Complex<Scalar>(0))
        for (const auto &[out, amp] : target.amplitudes()) col.emplace_back(out, amp * bra);
      cols[in] = std::move(col);
    }
    return LocalOperator(std::move(cols), false);
  }

  const Columns &columns() const { return columns_; }
  bool unitary() const { return unitary_; }
  bool covers(const LocalLabel &in) const { return columns_.count(in) != 0; }

  const Column &column(const LocalLabel &in) const {
    auto it = columns_.find(in);
    if (it == columns_.end())
      throw HilbertError("operator support does not cover |" + std::string(pol_name(in.pol)) + "," +
                         std::to_string(in.l) + ">");
    return it->second;
  }

  Complex<Scalar> element(const LocalLabel &out, const LocalLabel &in) const {
    auto it = columns_.find(in);
    if (it == columns_.end()) return Complex<Scalar>(0);
    for (const auto &[o, amp] : it->second)
      if (o == out) return amp;
    return Complex<Scalar>(0);
  }

  /// Scales every matrix element; the result is no longer flagged unitary
  /// unless |factor| == 1.
  LocalOperator scaled(Complex<Scalar> factor) const {
    Columns cols = columns_;
    for (auto &[in, col] : cols)
      for (auto &entry : col) entry.second *= factor;
    return LocalOperator(std::move(cols), unitary_ && std::abs(std::abs(factor) - 1) < Scalar(1e-15));
  }

 private:
  Columns columns_;
  bool unitary_ = false;
};

/// after * before. Inputs are those of `before`; every intermediate label
/// must be covered by `after`.
template <typename Scalar>
LocalOperator<Scalar> compose(const LocalOperator<Scalar> &after, const LocalOperator<Scalar> &before) {
  typename LocalOperator<Scalar>::Columns cols;
  for (const auto &[in, col] : before.columns()) {
    typename LocalOperator<Scalar>::Column out_col;
    for (const auto &[mid, amp] : col)
      for (const auto &[out, amp2] : after.column(mid)) out_col.emplace_back(out, amp2 * amp);
    cols.emplace(in, std::move(out_col));
  }
  return LocalOperator<Scalar>(std::move(cols), after.unitary() && before.unitary());
}

/// max |(O^dagger O - I)_{ij}| over the declared support.
template <typename Scalar>
Scalar unitarity_defect(const LocalOperator<Scalar> &op) {
  std::vector<const typename LocalOperator<Scalar>::Column *> cols;
  for (const auto &[in, col] : op.columns()) cols.push_back(&col);
  Scalar worst = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::map<LocalLabel, Complex<Scalar>> ci(cols[i]->begin(), cols[i]->end());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Complex<Scalar> acc(0);
      for (const auto &[out, amp] : *cols[j]) {
        auto it = ci.find(out);
        if (it != ci.end()) acc += std::conj(it->second) * amp;
      }
      if (i == j) acc -= Scalar(1);
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

/// Applies `op` to one arm without renormalizing.
template <typename Scalar>
JointKet<Scalar> apply_local(const LocalOperator<Scalar> &op, Arm arm, const JointKet<Scalar> &state,
                             OamIndex cap = kDefaultOamCap) {
  typename JointKet<Scalar>::Amplitudes out;
  for (const auto &[label, amp] : state.amplitudes()) {
    for (const auto &[local_out, element] : op.column(label.on(arm))) {
      if (std::abs(local_out.l) > cap)
        throw HilbertError("OAM support overflow: |l| = " + std::to_string(std::abs(local_out.l)) + " exceeds cap " +
                           std::to_string(cap));
      JointLabel next = label;
      next.on(arm) = local_out;
      out[next] += element * amp;
    }
  }
  return JointKet<Scalar>(std::move(out), state.norm_tracked());
}

/// Outcome of a filtering step. `state` is empty on a null outcome.
template <typename Scalar>
struct FilterResult {
  std::optional<JointKet<Scalar>> state;
  Scalar probability = 0;

  bool null_outcome() const { return !state.has_value(); }
};

/// Applies a non-unitary `op` (projector, lossy element) to one arm,
/// renormalizes and multiplies norm_tracked by the success probability.
template <typename Scalar>
FilterResult<Scalar> apply_filter(const LocalOperator<Scalar> &op, Arm arm, const JointKet<Scalar> &state,
                                  OamIndex cap = kDefaultOamCap) {
  const Scalar before = state.squared_norm();
  if (before <= Scalar(0)) return {};
  const JointKet<Scalar> raw = apply_local(op, arm, state, cap);
  const Scalar p = raw.squared_norm() / before;
  if (p < Scalar(kNullProbability)) return {std::nullopt, Scalar(0)};
  const JointKet<Scalar> kept = raw.normalized();
  return {kept.with_norm_tracked(state.norm_tracked() * std::min(p, Scalar(1))), p};
}

/// Born-rule projection of one arm onto `target`.
template <typename Scalar>
FilterResult<Scalar> project(const JointKet<Scalar> &state, Arm arm, const LocalState<Scalar> &target) {
  if (!target.is_normalized()) throw HilbertError("projection target is not normalized");
  std::vector<LocalLabel> support;
  for (const auto &[label, amp] : state.amplitudes()) support.push_back(label.on(arm));
  const auto op = LocalOperator<Scalar>::projector(target, std::move(support));
  return apply_filter(op, arm, state, std::numeric_limits<OamIndex>::max());
}

// --- density matrices -------------------------------------------------------

/// Degrees of freedom kept by a partial trace.
enum Dof : unsigned {
  kPolA = 1u << 0,
  kOamA = 1u << 1,
  kPolB = 1u << 2,
  kOamB = 1u << 3,
  kArmA = kPolA | kOamA,
  kArmB = kPolB | kOamB,
  kAll = kArmA | kArmB,
};

/// Basis label of a (possibly reduced) density matrix. Only the fields
/// selected by `mask` are meaningful; the rest are zero.
struct BasisLabel {
  unsigned mask = kAll;
  std::array<int, 4> code{};  // polA, lA, polB, lB

  auto operator<=>(const BasisLabel &) const = default;

  static BasisLabel from(const JointLabel &j, unsigned mask) {
    BasisLabel b;
    b.mask = mask;
    if (mask & kPolA) b.code[0] = static_cast<int>(j.a.pol);
    if (mask & kOamA) b.code[1] = j.a.l;
    if (mask & kPolB) b.code[2] = static_cast<int>(j.b.pol);
    if (mask & kOamB) b.code[3] = j.b.l;
    return b;
  }

  std::string str() const {
    std::string s;
    auto add = [&](const std::string &part) { s += (s.empty() ? "" : ",") + part; };
    if (mask & kPolA) add(std::string("A:") + pol_name(Pol(code[0])));
    if (mask & kOamA) add("A:l=" + std::to_string(code[1]));
    if (mask & kPolB) add(std::string("B:") + pol_name(Pol(code[2])));
    if (mask & kOamB) add("B:l=" + std::to_string(code[3]));
    return s;
  }
};

template <typename Scalar>
struct DensityMatrix {
  std::vector<BasisLabel> basis;
  ComplexMatrix<Scalar> rho;

  Eigen::Index dim() const { return rho.rows(); }
  Complex<Scalar> trace() const { return rho.trace(); }
  Scalar purity() const { return (rho * rho).trace().real(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  Scalar hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

  bool is_valid(Scalar tol = Scalar(1e-12), Scalar psd_tol = Scalar(1e-10)) const {
    if (dim() == 0) return false;
    if (hermiticity_defect() > tol) return false;
    if (std::abs(trace() - Complex<Scalar>(1)) > tol) return false;
    return eigenvalues().minCoeff() >= -psd_tol;
  }

  /// Same operator written on a superset basis (zero padding).
  DensityMatrix embedded(const std::vector<BasisLabel> &target) const {
    std::map<BasisLabel, Eigen::Index> index;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(target.size()); ++i) index[target[i]] = i;
    std::vector<Eigen::Index> pos;
    for (const auto &b : basis) {
      auto it = index.find(b);
      if (it == index.end()) throw HilbertError("embedding basis does not contain " + b.str());
      pos.push_back(it->second);
    }
    DensityMatrix out{target, ComplexMatrix<Scalar>::Zero(target.size(), target.size())};
    for (std::size_t i = 0; i < pos.size(); ++i)
      for (std::size_t j = 0; j < pos.size(); ++j) out.rho(pos[i], pos[j]) = rho(i, j);
    return out;
  }
};

/// Sorted union of the two bases.
inline std::vector<BasisLabel> merged_basis(const std::vector<BasisLabel> &x, const std::vector<BasisLabel> &y) {
  std::vector<BasisLabel> out(x);
  out.insert(out.end(), y.begin(), y.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Partial trace of |psi><psi| keeping the degrees of freedom in `keep`.
/// The result is normalized to unit trace.
template <typename Scalar>
DensityMatrix<Scalar> reduced_density(const JointKet<Scalar> &state, unsigned keep) {
  if ((keep & kAll) == 0) throw HilbertError("empty subsystem selector");
  keep &= kAll;
  const unsigned traced = kAll & ~keep;

  std::vector<BasisLabel> basis;
  for (const auto &[label, amp] : state.amplitudes()) basis.push_back(BasisLabel::from(label, keep));
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  std::map<BasisLabel, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<Eigen::Index>(i);

  // Group amplitudes by the traced-out label; only equal traced labels mix.
  std::map<BasisLabel, std::vector<std::pair<Eigen::Index, Complex<Scalar>>>> groups;
  for (const auto &[label, amp] : state.amplitudes())
    groups[BasisLabel::from(label, traced)].emplace_back(index.at(BasisLabel::from(label, keep)), amp);

  ComplexMatrix<Scalar> rho = ComplexMatrix<Scalar>::Zero(basis.size(), basis.size());
  for (const auto &[env, members] : groups)
    for (const auto &[i, ai] : members)
      for (const auto &[j, aj] : members) rho(i, j) += ai * std::conj(aj);

  const Scalar tr = rho.trace().real();
  if (tr <= Scalar(0)) throw HilbertError("reduced density of a zero state");
  return {std::move(basis), rho / tr};
}

/// |psi><psi| over the state's own support (sorted labels).
template <typename Scalar>
DensityMatrix<Scalar> density(const JointKet<Scalar> &state) {
  return reduced_density(state, kAll);
}

/// (1/2) * sum |eigenvalues of (rho1 - rho2)|. Bases must match exactly.
template <typename Scalar>
Scalar trace_distance(const DensityMatrix<Scalar> &rho1, const DensityMatrix<Scalar> &rho2) {
  if (rho1.basis != rho2.basis || rho1.dim() != rho2.dim()) throw HilbertError("dimension mismatch");
  const ComplexMatrix<Scalar> diff = rho1.rho - rho2.rho;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(diff, Eigen::EigenvaluesOnly);
  return Scalar(0.5) * solver.eigenvalues().cwiseAbs().sum();
}

/// Trace norm of a Hermitian matrix.
template <typename Scalar>
Scalar trace_norm(const ComplexMatrix<Scalar> &m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

/// Quantum operation rho -> M rho M^dagger / Tr(...). Returns the success
/// probability alongside; nullopt when it is below kNullProbability.
template <typename Scalar>
std::pair<std::optional<DensityMatrix<Scalar>>, Scalar> evolve(const DensityMatrix<Scalar> &rho,
                                                               const ComplexMatrix<Scalar> &kraus) {
  if (kraus.rows() != rho.dim() || kraus.cols() != rho.dim()) throw HilbertError("dimension mismatch");
  ComplexMatrix<Scalar> next = kraus * rho.rho * kraus.adjoint();
  const Scalar p = next.trace().real() / rho.trace().real();
  if (p < Scalar(kNullProbability)) return {std::nullopt, Scalar(0)};
  next /= next.trace().real();
  return {DensityMatrix<Scalar>{rho.basis, std::move(next)}, p};
}

/// Column vector of `state` on `basis` (all labels with mask kAll).
template <typename Scalar>
ComplexVector<Scalar> to_vector(const JointKet<Scalar> &state, const std::vector<BasisLabel> &basis) {
  std::map<BasisLabel, Eigen::Index> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<Eigen::Index>(i);
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(basis.size());
  for (const auto &[label, amp] : state.amplitudes()) {
    auto it = index.find(BasisLabel::from(label, kAll));
    if (it == index.end()) throw HilbertError("state label outside basis");
    v(it->second) = amp;
  }
  return v;
}

}  // namespace oam_eraser
