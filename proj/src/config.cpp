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

#include "oam_eraser/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace oam_eraser {

using nlohmann::json;

namespace {

/// Reads keys from one JSON object and rejects whatever was not read.
class ObjectReader {
 public:
  ObjectReader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigParseError(path_, "expected an object");
  }

  std::string at(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

  const json *find(const std::string &key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string &key, double fallback) {
    const json *v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigParseError(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigParseError(at(key), "must be finite");
    return x;
  }

  double non_negative(const std::string &key, double fallback) {
    const double x = number(key, fallback);
    if (x < 0) throw ConfigParseError(at(key), "must be >= 0");
    return x;
  }

  long long integer(const std::string &key, long long fallback) {
    const json *v = find(key);
    if (!v) return fallback;
    if (v->is_number_integer()) return v->get<long long>();
    if (v->is_number_float()) {
      const double x = v->get<double>();
      if (std::isfinite(x) && x == std::round(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
    }
    throw ConfigParseError(at(key), "expected an integer");
  }

  std::uint64_t unsigned_integer(const std::string &key, std::uint64_t fallback) {
    const json *v = find(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    throw ConfigParseError(at(key), "expected a non-negative integer");
  }

  bool boolean(const std::string &key, bool fallback) {
    const json *v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigParseError(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string choice(const std::string &key, const std::string &fallback, std::initializer_list<const char *> allowed) {
    const json *v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigParseError(at(key), "expected a string");
    const auto s = v->get<std::string>();
    for (const char *a : allowed)
      if (s == a) return s;
    std::string list;
    for (const char *a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw ConfigParseError(at(key), "unknown value \"" + s + "\" (expected one of: " + list + ")");
  }

  void finish() const {
    for (const auto &[key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigParseError(at(key), "unknown key");
  }

 private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_element(const ElementSpec &spec, const std::string &where) {
  try {
    validate(spec);
  } catch (const ElementError &e) {
    throw ConfigParseError(where, e.what());
  }
}

int checked_int(long long x, const std::string &where) {
  if (x < -1000000 || x > 1000000) throw ConfigParseError(where, "integer out of range");
  return static_cast<int>(x);
}

ElementSpec parse_element(const json &j, const std::string &path, Arm arm) {
  ObjectReader r(j, path);
  const std::string type = r.choice("type", "", {"qplate", "waveplate", "polarizer", "fiber", "hologram", "delay"});
  ElementSpec spec;
  std::string where = path;
  if (type == "qplate") {
    spec = QPlateSpec{r.number("q", 0.5), arm};
    where = r.at("q");
  } else if (type == "waveplate") {
    const auto kind = r.choice("kind", "quarter", {"quarter", "half"});
    spec = WavePlateSpec{kind == "quarter" ? WavePlateKind::quarter : WavePlateKind::half, r.number("fast_axis", 0), arm};
    where = r.at("fast_axis");
  } else if (type == "polarizer") {
    spec = PolarizerSpec{r.number("alpha", 0), r.number("extinction", 0), arm};
  } else if (type == "fiber") {
    spec = FiberSpec{arm, checked_int(r.integer("l", 0), r.at("l"))};
  } else if (type == "hologram") {
    const int l = checked_int(r.integer("l", 1), r.at("l"));
    const double theta = r.number("theta", 0);
    const auto mode = r.choice("mode", "ideal", {"ideal", "binary"});
    spec = HologramSpec{l, theta, mode == "ideal" ? HologramMode::ideal : HologramMode::binary, arm};
  } else if (type == "delay") {
    spec = DelaySpec{r.number("extra_path", 0), arm};
    where = r.at("extra_path");
  } else {
    throw ConfigParseError(r.at("type"), "missing element type");
  }
  r.finish();
  check_element(spec, where);
  return spec;
}

json emit_element(const ElementSpec &spec) {
  if (const auto *s = std::get_if<QPlateSpec>(&spec)) return {{"type", "qplate"}, {"q", s->q}};
  if (const auto *s = std::get_if<WavePlateSpec>(&spec))
    return {{"type", "waveplate"},
            {"kind", s->kind == WavePlateKind::quarter ? "quarter" : "half"},
            {"fast_axis", s->fast_axis}};
  if (const auto *s = std::get_if<PolarizerSpec>(&spec))
    return {{"type", "polarizer"}, {"alpha", s->alpha}, {"extinction", s->extinction}};
  if (const auto *s = std::get_if<FiberSpec>(&spec)) return {{"type", "fiber"}, {"l", s->accepted_l}};
  if (const auto *s = std::get_if<HologramSpec>(&spec))
    return {{"type", "hologram"},
            {"l", s->l},
            {"theta", s->theta},
            {"mode", s->mode == HologramMode::ideal ? "ideal" : "binary"}};
  const auto &d = std::get<DelaySpec>(spec);
  return {{"type", "delay"}, {"extra_path", d.extra_path}};
}

const char *scan_kind_name(ScanKind k) {
  switch (k) {
    case ScanKind::theta:
      return "theta";
    case ScanKind::alpha:
      return "alpha";
    case ScanKind::grid:
      return "grid";
  }
  return "theta";
}

}  // namespace

ConfigParseError::ConfigParseError(std::string where, const std::string &message)
    : std::runtime_error(where + ": " + message), where_(std::move(where)) {}

ConfigDocument parse_config(const std::string &text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error &e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigParseError("line " + std::to_string(line), "malformed document");
  }

  ConfigDocument doc;
  ExperimentConfig &cfg = doc.experiment;
  ObjectReader top(root, "");

  if (const json *j = top.find("source")) {
    ObjectReader r(*j, "source");
    const auto kind = r.choice("kind", "spdc", {"spdc", "generic_two_path"});
    cfg.source.kind = kind == "spdc" ? SourceKind::spdc : SourceKind::generic_two_path;
    cfg.source.l_max = checked_int(r.integer("L_max", 1), r.at("L_max"));
    const auto spectrum = r.choice("spectrum", "flat", {"flat", "gaussian"});
    cfg.source.spectrum = spectrum == "flat" ? SpectrumKind::flat : SpectrumKind::gaussian;
    cfg.source.width = r.number("width", 1.0);
    if (cfg.source.l_max < 0) throw ConfigParseError(r.at("L_max"), "must be >= 0");
    if (!(cfg.source.width > 0)) throw ConfigParseError(r.at("width"), "must be > 0");
    r.finish();
  }

  cfg.oam_cap = checked_int(top.integer("oam_cap", kDefaultOamCap), "oam_cap");
  if (cfg.oam_cap < 1) throw ConfigParseError("oam_cap", "must be >= 1");
  if (cfg.source.l_max > cfg.oam_cap) throw ConfigParseError("source.L_max", "exceeds oam_cap");

  for (Arm arm : {Arm::A, Arm::B}) {
    const std::string key = arm == Arm::A ? "arm_A" : "arm_B";
    auto &list = arm == Arm::A ? cfg.elements_a : cfg.elements_b;
    if (const json *j = top.find(key)) {
      if (!j->is_array()) throw ConfigParseError(key, "expected a list of elements");
      for (std::size_t i = 0; i < j->size(); ++i)
        list.push_back(parse_element((*j)[i], key + "[" + std::to_string(i) + "]", arm));
      if (std::count_if(list.begin(), list.end(), [](const auto &e) { return std::holds_alternative<DelaySpec>(e); }) > 1)
        throw ConfigParseError(key, "at most one delay element per arm");
    }
  }

  if (const json *j = top.find("analyzers")) {
    ObjectReader r(*j, "analyzers");
    const bool use = r.boolean("use_polarizer", true);
    PolarizerSpec pol{r.number("alpha", 0), r.number("extinction", 0), Arm::A};
    check_element(pol, r.at("extinction"));
    cfg.analyzer_a = use ? std::optional<PolarizerSpec>(pol) : std::nullopt;
    if (const json *h = r.find("hologram")) {
      ObjectReader hr(*h, r.at("hologram"));
      cfg.analyzer_b.l = checked_int(hr.integer("l", 1), hr.at("l"));
      cfg.analyzer_b.theta = hr.number("theta", 0);
      cfg.analyzer_b.mode = hr.choice("mode", "ideal", {"ideal", "binary"}) == "ideal" ? HologramMode::ideal
                                                                                        : HologramMode::binary;
      hr.finish();
      check_element(cfg.analyzer_b, hr.at("l"));
    }
    r.finish();
  }

  if (const json *j = top.find("counting")) {
    ObjectReader r(*j, "counting");
    auto &c = cfg.counting;
    c.pair_rate = r.non_negative("pair_rate", c.pair_rate);
    c.integration_time = r.non_negative("integration_time", c.integration_time);
    c.gate = r.number("gate", c.gate);
    if (!(c.gate > 0)) throw ConfigParseError(r.at("gate"), "must be > 0");
    const double delay = r.non_negative("delay_m", 0);
    c.singles_rate_a = r.non_negative("singles_A", 0);
    c.singles_rate_b = r.non_negative("singles_B", 0);
    c.seed = r.unsigned_integer("seed", c.seed);
    r.finish();
    if (delay > 0) {
      if (std::any_of(cfg.elements_a.begin(), cfg.elements_a.end(),
                      [](const auto &e) { return std::holds_alternative<DelaySpec>(e); }))
        throw ConfigParseError(r.at("delay_m"), "arm_A already has a delay element");
      cfg.elements_a.push_back(DelaySpec{delay, Arm::A});
    }
  }

  if (const json *j = top.find("scan")) {
    ObjectReader r(*j, "scan");
    auto &s = doc.scan;
    const auto var = r.choice("variable", "theta", {"theta", "alpha", "grid"});
    s.variable = var == "theta" ? ScanKind::theta : var == "alpha" ? ScanKind::alpha : ScanKind::grid;
    s.start = r.number("start", s.start);
    s.stop = r.number("stop", s.stop);
    s.points = checked_int(r.integer("points", s.points), r.at("points"));
    s.endpoint = r.boolean("endpoint", s.endpoint);
    s.theta_points = checked_int(r.integer("theta_points", s.theta_points), r.at("theta_points"));
    s.alpha_start = r.number("alpha_start", s.alpha_start);
    s.alpha_stop = r.number("alpha_stop", s.alpha_stop);
    s.alpha_points = checked_int(r.integer("alpha_points", s.alpha_points), r.at("alpha_points"));
    if (s.points < 1) throw ConfigParseError(r.at("points"), "must be >= 1");
    if (s.theta_points < 4) throw ConfigParseError(r.at("theta_points"), "must be >= 4");
    if (s.alpha_points < 1) throw ConfigParseError(r.at("alpha_points"), "must be >= 1");
    r.finish();
  }

  top.finish();
  try {
    validate(cfg);
  } catch (const ConfigError &e) {
    throw ConfigParseError("config", e.what());
  }
  return doc;
}

std::string emit_config(const ConfigDocument &document) {
  const ExperimentConfig &cfg = document.experiment;
  json root;
  root["source"] = {
      {"kind", cfg.source.kind == SourceKind::spdc ? "spdc" : "generic_two_path"},
      {"L_max", cfg.source.l_max},
      {"spectrum", cfg.source.spectrum == SpectrumKind::flat ? "flat" : "gaussian"},
      {"width", cfg.source.width},
  };
  root["arm_A"] = json::array();
  for (const auto &e : cfg.elements_a) root["arm_A"].push_back(emit_element(e));
  root["arm_B"] = json::array();
  for (const auto &e : cfg.elements_b) root["arm_B"].push_back(emit_element(e));

  const PolarizerSpec pol = cfg.analyzer_a.value_or(PolarizerSpec{});
  root["analyzers"] = {
      {"use_polarizer", cfg.analyzer_a.has_value()},
      {"alpha", pol.alpha},
      {"extinction", pol.extinction},
      {"hologram",
       {{"l", cfg.analyzer_b.l},
        {"theta", cfg.analyzer_b.theta},
        {"mode", cfg.analyzer_b.mode == HologramMode::ideal ? "ideal" : "binary"}}},
  };
  const auto &c = cfg.counting;
  root["counting"] = {
      {"pair_rate", c.pair_rate},     {"integration_time", c.integration_time},
      {"gate", c.gate},               {"delay_m", 0.0},
      {"singles_A", c.singles_rate_a}, {"singles_B", c.singles_rate_b},
      {"seed", c.seed},
  };
  const auto &s = document.scan;
  root["scan"] = {
      {"variable", scan_kind_name(s.variable)},
      {"start", s.start},
      {"stop", s.stop},
      {"points", s.points},
      {"endpoint", s.endpoint},
      {"theta_points", s.theta_points},
      {"alpha_start", s.alpha_start},
      {"alpha_stop", s.alpha_stop},
      {"alpha_points", s.alpha_points},
  };
  root["oam_cap"] = cfg.oam_cap;
  return root.dump(2) + "\n";
}

}  // namespace oam_eraser
