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

#include "oam_eraser/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace oam_eraser {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_rate(double value, const char *name) {
  if (!(value >= 0) || !std::isfinite(value)) throw ConfigError(std::string(name) + " must be a finite value >= 0");
}

PolarizerSpec analyzer_at(const ExperimentConfig &config, double alpha) {
  PolarizerSpec spec = *config.analyzer_a;
  spec.alpha = alpha;
  return spec;
}

HologramSpec hologram_at(const ExperimentConfig &config, double theta) {
  HologramSpec spec = config.analyzer_b;
  spec.theta = theta;
  return spec;
}

/// Poisson process arrival times on [0, duration).
std::vector<double> poisson_arrivals(std::mt19937_64 &rng, double rate, double duration) {
  std::vector<double> times;
  if (rate <= 0) return times;
  std::exponential_distribution<double> gap(rate);
  for (double t = gap(rng); t < duration; t += gap(rng)) times.push_back(t);
  return times;
}

}  // namespace

NullPipelineError::NullPipelineError(std::string element, Arm arm, std::size_t index)
    : std::runtime_error("null pipeline: state extinguished by element " + std::to_string(index) + " (" + element +
                         ")"),
      element_(std::move(element)),
      arm_(arm),
      index_(index) {}

void validate(const ExperimentConfig &config) {
  const auto &src = config.source;
  if (config.oam_cap < 1) throw ConfigError("oam_cap must be >= 1");
  if (src.l_max < 0) throw ConfigError("source.L_max must be >= 0");
  if (src.l_max > config.oam_cap) throw ConfigError("source.L_max exceeds the OAM cap");
  if (src.kind == SourceKind::generic_two_path && src.l_max < 1)
    throw ConfigError("generic_two_path source needs L_max >= 1");
  if (src.spectrum == SpectrumKind::gaussian && !(src.width > 0)) throw ConfigError("spectrum width must be > 0");

  for (Arm arm : {Arm::A, Arm::B}) {
    const auto &list = arm == Arm::A ? config.elements_a : config.elements_b;
    int delays = 0;
    for (const auto &element : list) {
      if (element_arm(element) != arm)
        throw ConfigError(element_name(element) + " listed under arm " + arm_name(arm));
      try {
        validate(element);
      } catch (const ElementError &e) {
        throw ConfigError(e.what());
      }
      if (std::holds_alternative<DelaySpec>(element)) ++delays;
    }
    if (delays > 1) throw ConfigError(std::string("at most one delay per arm (arm ") + arm_name(arm) + ")");
  }

  try {
    if (config.analyzer_a) {
      if (config.analyzer_a->arm != Arm::A) throw ConfigError("analyzer_A must act on arm A");
      validate(ElementSpec{*config.analyzer_a});
    }
    if (config.analyzer_b.arm != Arm::B) throw ConfigError("analyzer_B must act on arm B");
    validate(ElementSpec{config.analyzer_b});
  } catch (const ElementError &e) {
    throw ConfigError(e.what());
  }

  const auto &c = config.counting;
  check_rate(c.pair_rate, "pair_rate");
  check_rate(c.integration_time, "integration_time");
  check_rate(c.singles_rate_a, "singles_A");
  check_rate(c.singles_rate_b, "singles_B");
  if (!(c.gate > 0) || !std::isfinite(c.gate)) throw ConfigError("gate must be > 0");
}

ExperimentConfig canonical_config() {
  ExperimentConfig config;
  config.elements_a = {
      QPlateSpec{0.5, Arm::A},
      FiberSpec{Arm::A, 0},
      WavePlateSpec{WavePlateKind::quarter, std::numbers::pi / 4, Arm::A},
  };
  config.analyzer_a = PolarizerSpec{0.0, 0.0, Arm::A};
  config.analyzer_b = HologramSpec{1, 0.0, HologramMode::ideal, Arm::B};
  return config;
}

std::vector<double> spectrum_coefficients(const SourceSpec &source) {
  if (source.l_max < 0) throw ConfigError("source.L_max must be >= 0");
  std::vector<double> c(2 * source.l_max + 1);
  for (int l = -source.l_max; l <= source.l_max; ++l) {
    const double x = static_cast<double>(l);
    c[l + source.l_max] =
        source.spectrum == SpectrumKind::flat ? 1.0 : std::exp(-x * x / (2 * source.width * source.width));
  }
  double norm = 0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  for (double &v : c) v /= norm;
  return c;
}

Ket build_spdc_state(const SourceSpec &source, OamIndex cap) {
  if (source.kind != SourceKind::spdc) throw ConfigError("source kind is not spdc");
  if (source.l_max > cap) throw ConfigError("source.L_max exceeds the OAM cap");
  const auto c = spectrum_coefficients(source);
  Ket::Amplitudes amps;
  for (int l = -source.l_max; l <= source.l_max; ++l)
    amps.emplace(JointLabel{{Pol::H, l}, {Pol::H, -l}}, c[l + source.l_max]);
  return Ket(std::move(amps));
}

Ket build_source_state(const SourceSpec &source, OamIndex cap) {
  if (source.kind == SourceKind::spdc) return build_spdc_state(source, cap);
  if (source.l_max < 1 || source.l_max > cap) throw ConfigError("generic_two_path source needs 1 <= L_max <= cap");
  const double s = 1 / std::sqrt(2.0);
  return Ket(Ket::Amplitudes{
      {JointLabel{{Pol::H, 0}, {Pol::H, source.l_max}}, s},
      {JointLabel{{Pol::V, 0}, {Pol::H, -source.l_max}}, s},
  });
}

PipelineResult run_pipeline(const ExperimentConfig &config) {
  validate(config);
  PipelineResult result{build_source_state(config.source, config.oam_cap), 1.0};
  for (Arm arm : {Arm::A, Arm::B}) {
    const auto &list = arm == Arm::A ? config.elements_a : config.elements_b;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Filtered step = apply_element(list[i], result.state, config.oam_cap);
      if (step.null_outcome()) throw NullPipelineError(element_name(list[i]), arm, i);
      result.state = std::move(*step.state);
      result.cumulative_probability *= step.probability;
    }
  }
  return result;
}

double analyzer_a_probability(const Ket &state, const ExperimentConfig &config, double alpha) {
  if (!config.analyzer_a) return 1.0;
  return polarizer_apply(analyzer_at(config, alpha), state, config.oam_cap).probability;
}

CoincidenceProbability coincidence_probability(const Ket &state, const ExperimentConfig &config, double alpha,
                                               double theta) {
  double p_a = 1.0;
  Ket after_a = state;
  if (config.analyzer_a) {
    Filtered a = polarizer_apply(analyzer_at(config, alpha), state, config.oam_cap);
    if (a.null_outcome()) return {0.0, 0.0};
    p_a = a.probability;
    after_a = std::move(*a.state);
  }
  const double p_b_given_a = hologram_apply(hologram_at(config, theta), after_a, config.oam_cap).probability;
  return {p_a * p_b_given_a, p_b_given_a};
}

CoincidenceProbability coincidence_probability(const ExperimentConfig &config, double alpha, double theta) {
  return coincidence_probability(run_pipeline(config).state, config, alpha, theta);
}

double causal_order_probability(const Ket &state, const ExperimentConfig &config, double alpha, double theta,
                                CausalOrder order) {
  if (order == CausalOrder::a_first) return coincidence_probability(state, config, alpha, theta).conditional;

  const double p_a = analyzer_a_probability(state, config, alpha);
  if (p_a < kNullProbability) return 0.0;
  Filtered b = hologram_apply(hologram_at(config, theta), state, config.oam_cap);
  if (b.null_outcome()) return 0.0;
  const double p_a_given_b =
      config.analyzer_a ? polarizer_apply(analyzer_at(config, alpha), *b.state, config.oam_cap).probability : 1.0;
  return b.probability * p_a_given_b / p_a;
}

double causal_order_probability(const ExperimentConfig &config, double alpha, double theta, CausalOrder order) {
  return causal_order_probability(run_pipeline(config).state, config, alpha, theta, order);
}

ScanSeries scan(const Ket &state, const ExperimentConfig &config, ScanVariable variable, double fixed_angle,
                const std::vector<double> &settings) {
  ScanSeries series;
  series.variable = variable;
  series.fixed_angle = fixed_angle;
  series.settings = settings;
  series.joint.reserve(settings.size());
  series.conditional.reserve(settings.size());
  for (double x : settings) {
    const auto p = variable == ScanVariable::theta ? coincidence_probability(state, config, fixed_angle, x)
                                                   : coincidence_probability(state, config, x, fixed_angle);
    series.joint.push_back(p.joint);
    series.conditional.push_back(p.conditional);
  }
  return series;
}

ScanSeries scan(const ExperimentConfig &config, ScanVariable variable, double fixed_angle,
                const std::vector<double> &settings) {
  return scan(run_pipeline(config).state, config, variable, fixed_angle, settings);
}

double expected_counts(const CountingModel &counting, double joint_probability) {
  return counting.pair_rate * counting.integration_time * joint_probability +
         counting.singles_rate_a * counting.singles_rate_b * counting.gate * counting.integration_time;
}

std::mt19937_64 counter_stream(std::uint64_t seed, std::uint64_t point, std::uint64_t repetition) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ point) ^ repetition);
  return std::mt19937_64(key);
}

ScanSeries simulate_counts(const ExperimentConfig &config, ScanSeries series, std::uint64_t repetition,
                           unsigned threads) {
  const std::size_t n = series.size();
  std::vector<std::int64_t> counts(n, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double mean = expected_counts(config.counting, series.joint[i]);
      if (mean <= 0) continue;
      auto rng = counter_stream(config.counting.seed, i, repetition);
      counts[i] = std::poisson_distribution<std::int64_t>(mean)(rng);
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }
  series.counts = std::move(counts);
  return series;
}

double arm_delay_seconds(const ExperimentConfig &config, Arm arm) {
  const auto &list = arm == Arm::A ? config.elements_a : config.elements_b;
  for (const auto &element : list)
    if (const auto *d = std::get_if<DelaySpec>(&element)) return delay_seconds(*d);
  return 0.0;
}

double TimelineResult::accidental_floor(double gate) const {
  if (duration <= 0) return 0;
  return static_cast<double>(singles_a) / duration * static_cast<double>(singles_b) / duration * gate * duration;
}

TimelineResult simulate_timeline(const ExperimentConfig &config, double alpha, double theta, double duration,
                                 std::uint64_t repetition) {
  if (!(duration > 0)) throw ConfigError("timeline duration must be > 0");
  const PipelineResult pipeline = run_pipeline(config);
  const auto &counting = config.counting;

  TimelineResult result;
  result.duration = duration;
  result.delay = arm_delay_seconds(config, Arm::A) - arm_delay_seconds(config, Arm::B);
  result.joint_probability = coincidence_probability(pipeline.state, config, alpha, theta).joint;

  // Separate streams per process so that changing the delay never changes
  // which pairs are emitted or detected.
  auto emission = counter_stream(counting.seed, 0, repetition);
  auto detection = counter_stream(counting.seed, 1, repetition);
  auto noise_a = counter_stream(counting.seed, 2, repetition);
  auto noise_b = counter_stream(counting.seed, 3, repetition);

  std::vector<EventRecord> stream_a;
  std::vector<EventRecord> stream_b;
  const auto pair_times = poisson_arrivals(emission, counting.pair_rate, duration);
  result.pairs_emitted = pair_times.size();
  std::bernoulli_distribution detected(std::clamp(result.joint_probability, 0.0, 1.0));
  const double shift_a = arm_delay_seconds(config, Arm::A);
  const double shift_b = arm_delay_seconds(config, Arm::B);
  for (std::size_t k = 0; k < pair_times.size(); ++k) {
    if (!detected(detection)) continue;
    ++result.pairs_detected;
    stream_a.push_back({Arm::A, pair_times[k] + shift_a, EventTag::true_pair, k});
    stream_b.push_back({Arm::B, pair_times[k] + shift_b, EventTag::true_pair, k});
  }
  for (double t : poisson_arrivals(noise_a, counting.singles_rate_a, duration))
    stream_a.push_back({Arm::A, t, EventTag::accidental, 0});
  for (double t : poisson_arrivals(noise_b, counting.singles_rate_b, duration))
    stream_b.push_back({Arm::B, t, EventTag::accidental, 0});

  auto by_time = [](const EventRecord &x, const EventRecord &y) { return x.timestamp < y.timestamp; };
  std::stable_sort(stream_a.begin(), stream_a.end(), by_time);
  std::stable_sort(stream_b.begin(), stream_b.end(), by_time);
  result.singles_a = stream_a.size();
  result.singles_b = stream_b.size();

  // Greedy time-ordered matching within a window of total width `gate`.
  const double half = counting.gate / 2;
  std::size_t ia = 0;
  for (const auto &b : stream_b) {
    while (ia < stream_a.size() && stream_a[ia].timestamp < b.timestamp - half) ++ia;
    if (ia < stream_a.size() && stream_a[ia].timestamp <= b.timestamp + half) {
      ++result.coincidences;
      if (stream_a[ia].tag == EventTag::true_pair && b.tag == EventTag::true_pair && stream_a[ia].pair == b.pair)
        ++result.true_coincidences;
      ++ia;
    }
  }

  result.events = std::move(stream_a);
  result.events.insert(result.events.end(), stream_b.begin(), stream_b.end());
  return result;
}

}  // namespace oam_eraser
