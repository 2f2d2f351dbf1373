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

// Source + per-arm element chains + analyzers, exact coincidence
// probabilities, Poisson count sampling and an event-level timeline model
// of the coincidence electronics.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oam_eraser/elements.hpp"
#include "oam_eraser/series.hpp"

namespace oam_eraser {

enum class SourceKind { spdc, generic_two_path };
enum class SpectrumKind { flat, gaussian };

/// spdc: sum_l c_|l| |l>_A |-l>_B |H>_A |H>_B over -l_max..l_max with
/// c_|l| flat or proportional to exp(-l^2 / (2 width^2)).
/// generic_two_path: (|H,0>_A |l_max>_B + |V,0>_A |-l_max>_B)/sqrt2.
struct SourceSpec {
  SourceKind kind = SourceKind::spdc;
  int l_max = 1;
  SpectrumKind spectrum = SpectrumKind::flat;
  double width = 1.0;
};

/// Detector efficiency is folded into pair_rate.
struct CountingModel {
  double pair_rate = 1000.0;     // detected pairs / s reaching the analyzers
  double integration_time = 5.0;  // s
  double gate = 25e-9;            // s
  double singles_rate_a = 0.0;    // uncorrelated counts / s
  double singles_rate_b = 0.0;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  SourceSpec source;
  std::vector<ElementSpec> elements_a;
  std::vector<ElementSpec> elements_b;
  std::optional<PolarizerSpec> analyzer_a = PolarizerSpec{};  // nullopt: arm A detected without analysis
  HologramSpec analyzer_b;
  CountingModel counting;
  OamIndex oam_cap = kDefaultOamCap;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a post-selecting element removes the whole state.
class NullPipelineError : public std::runtime_error {
 public:
  NullPipelineError(std::string element, Arm arm, std::size_t index);

  const std::string &element() const { return element_; }
  Arm arm() const { return arm_; }
  std::size_t index() const { return index_; }

 private:
  std::string element_;
  Arm arm_;
  std::size_t index_;
};

/// Throws ConfigError on invariant violations.
void validate(const ExperimentConfig &config);

/// q = 1/2 plate, fiber and quarter-wave plate at pi/4 on arm A; ideal
/// polarizer at 0 on A and an l = 1 sector hologram on B.
ExperimentConfig canonical_config();

/// c_|l| for l = -l_max..l_max (index l + l_max), unit 2-norm.
std::vector<double> spectrum_coefficients(const SourceSpec &source);

Ket build_spdc_state(const SourceSpec &source, OamIndex cap = kDefaultOamCap);
Ket build_source_state(const SourceSpec &source, OamIndex cap = kDefaultOamCap);

struct PipelineResult {
  Ket state;
  double cumulative_probability = 1;
};

/// Source, then arm A's elements in order, then arm B's. Elements on
/// different arms commute, so the interleaving does not matter.
PipelineResult run_pipeline(const ExperimentConfig &config);

struct CoincidenceProbability {
  double joint = 0;        // |<theta|_B <alpha|_A psi>|^2 for the post-pipeline state
  double conditional = 0;  // joint / P(arm A passes its analyzer)
};

CoincidenceProbability coincidence_probability(const ExperimentConfig &config, double alpha, double theta);
CoincidenceProbability coincidence_probability(const Ket &state, const ExperimentConfig &config, double alpha,
                                               double theta);

/// Probability of arm A passing its analyzer alone (1 when unanalysed).
double analyzer_a_probability(const Ket &state, const ExperimentConfig &config, double alpha);

enum class CausalOrder { a_first, b_first };

/// Conditional coincidence probability with the two analyzer projections
/// applied in the given order.
double causal_order_probability(const ExperimentConfig &config, double alpha, double theta, CausalOrder order);
double causal_order_probability(const Ket &state, const ExperimentConfig &config, double alpha, double theta,
                                CausalOrder order);

/// Exact probabilities for a scan over theta (alpha fixed) or alpha
/// (theta fixed).
ScanSeries scan(const ExperimentConfig &config, ScanVariable variable, double fixed_angle,
                const std::vector<double> &settings);
ScanSeries scan(const Ket &state, const ExperimentConfig &config, ScanVariable variable, double fixed_angle,
                const std::vector<double> &settings);

/// Mean coincidences for a joint probability: rate * T * p + S_A * S_B * gate * T.
double expected_counts(const CountingModel &counting, double joint_probability);

/// Independent generator for (seed, point, repetition). Results do not
/// depend on evaluation order.
std::mt19937_64 counter_stream(std::uint64_t seed, std::uint64_t point, std::uint64_t repetition);

/// Poisson counts for every point of `series`. `threads` > 1 evaluates
/// points concurrently; the output is identical for any thread count.
ScanSeries simulate_counts(const ExperimentConfig &config, ScanSeries series, std::uint64_t repetition = 0,
                           unsigned threads = 1);

/// Extra path of the arm's DelaySpec, in seconds (0 when absent).
double arm_delay_seconds(const ExperimentConfig &config, Arm arm);

enum class EventTag { true_pair, accidental };

struct EventRecord {
  Arm arm = Arm::A;
  double timestamp = 0;
  EventTag tag = EventTag::accidental;
  std::uint64_t pair = 0;  // emission index for true_pair events
};

struct TimelineResult {
  std::vector<EventRecord> events;  // arm A stream then arm B stream, each time-ordered
  std::uint64_t pairs_emitted = 0;
  std::uint64_t pairs_detected = 0;
  std::uint64_t singles_a = 0;  // all arm A detections
  std::uint64_t singles_b = 0;
  std::uint64_t coincidences = 0;
  std::uint64_t true_coincidences = 0;  // both events from the same pair
  double delay = 0;                     // arm A minus arm B, seconds
  double duration = 0;
  double joint_probability = 0;

  /// Expected accidental coincidences for the observed singles rates.
  double accidental_floor(double gate) const;
};

/// Event-level simulation. Pairs are emitted as a Poisson process at
/// pair_rate; each is detected on both arms with the joint coincidence
/// probability, arm A shifted by its path delay. Uncorrelated singles are
/// added on each arm. Events coincide when |t_A - t_B| <= gate/2, matched
/// greedily in time order.
TimelineResult simulate_timeline(const ExperimentConfig &config, double alpha, double theta, double duration,
                                 std::uint64_t repetition = 0);

}  // namespace oam_eraser
