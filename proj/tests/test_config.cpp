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

#include <numbers>

#include "oam_eraser/config.hpp"

using namespace oam_eraser;

namespace {

const char *const kCanonical = R"({
  "source": {"kind": "spdc", "L_max": 1},
  "arm_A": [
    {"type": "qplate", "q": 0.5},
    {"type": "fiber", "l": 0},
    {"type": "waveplate", "kind": "quarter", "fast_axis": 0.7853981633974483}
  ],
  "analyzers": {"alpha": 0.39269908169872414, "hologram": {"l": 1, "mode": "binary"}},
  "counting": {"pair_rate": 2000, "delay_m": 2.3, "singles_A": 10, "seed": 42},
  "scan": {"variable": "alpha", "points": 9, "endpoint": true, "stop": 0.7853981633974483}
})";

std::string where_of(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigParseError &e) {
    return e.where();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a full document") {
  const ConfigDocument doc = parse_config(kCanonical);
  const ExperimentConfig &c = doc.experiment;
  REQUIRE(c.elements_a.size() == 4);  // delay_m appended as an element
  CHECK(std::get<DelaySpec>(c.elements_a.back()).extra_path == 2.3);
  CHECK(std::get<WavePlateSpec>(c.elements_a[2]).fast_axis == std::numbers::pi / 4);
  REQUIRE(c.analyzer_a);
  CHECK(c.analyzer_a->alpha == std::numbers::pi / 8);
  CHECK(c.analyzer_b.mode == HologramMode::binary);
  CHECK(c.counting.pair_rate == 2000);
  CHECK(c.counting.integration_time == 5);
  CHECK(c.counting.gate == 25e-9);
  CHECK(c.counting.singles_rate_a == 10);
  CHECK(c.counting.seed == 42);
  CHECK(doc.scan.variable == ScanKind::alpha);
  CHECK(doc.scan.points == 9);
  CHECK(doc.scan.endpoint);
}

TEST_CASE("empty document takes the defaults") {
  const ConfigDocument doc = parse_config("{}");
  CHECK(doc.experiment.elements_a.empty());
  CHECK(doc.experiment.analyzer_a.has_value());
  CHECK(doc.scan.points == 36);
  CHECK(doc.experiment.oam_cap == kDefaultOamCap);
}

TEST_CASE("emit and parse round trip") {
  const ConfigDocument doc = parse_config(kCanonical);
  const std::string once = emit_config(doc);
  const std::string twice = emit_config(parse_config(once));
  CHECK(once == twice);
  CHECK(once.back() == '\n');
  CHECK(once.find("\"delay\"") != std::string::npos);
}

TEST_CASE("use_polarizer false leaves arm A unanalysed") {
  const ConfigDocument doc = parse_config(R"({"analyzers": {"use_polarizer": false}})");
  CHECK_FALSE(doc.experiment.analyzer_a);
  CHECK(emit_config(parse_config(emit_config(doc))) == emit_config(doc));
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(where_of(R"({"sauce": {}})") == "sauce");
  CHECK(where_of(R"({"arm_A": [{"type": "qplate", "charge": 1}]})") == "arm_A[0].charge");
  CHECK(where_of(R"({"analyzers": {"hologram": {"ell": 1}}})") == "analyzers.hologram.ell");
}

TEST_CASE("invalid values are rejected") {
  CHECK(where_of(R"({"arm_A": [{"type": "qplate", "q": 0.3}]})") == "arm_A[0].q");
  try {
    parse_config(R"({"arm_A": [{"type": "qplate", "q": 0.3}]})");
  } catch (const ConfigParseError &e) {
    CHECK(std::string(e.what()).find("unphysical q-plate charge") != std::string::npos);
  }
  CHECK(where_of(R"({"arm_B": [{"type": "laser"}]})") == "arm_B[0].type");
  CHECK(where_of(R"({"counting": {"gate": 0}})") == "counting.gate");
  CHECK(where_of(R"({"counting": {"pair_rate": "fast"}})") == "counting.pair_rate");
  CHECK(where_of(R"({"source": {"L_max": 1.5}})") == "source.L_max");
  CHECK(where_of(R"({"arm_A": [{"type": "delay", "extra_path": 1}], "counting": {"delay_m": 2}})") ==
        "counting.delay_m");
  CHECK_FALSE(where_of(R"({"source": {"L_max": 40}})").empty());
}

TEST_CASE("syntax errors report the line") {
  CHECK(where_of("{\n  \"source\": {\n    \"L_max\": ,\n  }\n}") == "line 3");
  CHECK(where_of("") == "line 1");
}
