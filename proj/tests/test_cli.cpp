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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oam_eraser/cli.hpp"

namespace fs = std::filesystem;
using oam_eraser::cli::run;

namespace {

const std::string kSource = OAM_ERASER_SOURCE_DIR;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "oam-eraser");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("oam_eraser_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

const std::string kCanonical = kSource + "/configs/canonical.json";

}  // namespace

TEST_CASE("scan-theta writes the scan and summary") {
  const fs::path dir = scratch("theta");
  const Invocation r = invoke({"scan-theta", kCanonical, "--out-dir", dir.string(), "--svg"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("visibility 0.707106781") != std::string::npos);
  const std::string csv = slurp(dir / "scan_theta.csv");
  CHECK(csv.rfind("setting_rad,p_joint,p_conditional,counts\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 37);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "scan_theta.svg"));
}

TEST_CASE("counts are byte-identical across thread counts") {
  const fs::path a = scratch("threads1"), b = scratch("threads4");
  REQUIRE(invoke({"scan-theta", kCanonical, "--out-dir", a.string(), "--counts", "--seed", "9"}).code == 0);
  REQUIRE(invoke({"scan-theta", kCanonical, "--out-dir", b.string(), "--counts", "--seed", "9", "--threads", "4"})
              .code == 0);
  CHECK(slurp(a / "scan_theta.csv") == slurp(b / "scan_theta.csv"));
  REQUIRE(invoke({"scan-theta", kCanonical, "--out-dir", b.string(), "--counts", "--seed", "10"}).code == 0);
  CHECK(slurp(a / "scan_theta.csv") != slurp(b / "scan_theta.csv"));
}

TEST_CASE("scan-alpha, scan-grid and timeline") {
  const fs::path dir = scratch("other");
  CHECK(invoke({"scan-alpha", kCanonical, "--out-dir", dir.string()}).code == 0);
  CHECK(slurp(dir / "scan_alpha.csv").rfind("setting_rad,visibility", 0) == 0);
  CHECK(invoke({"scan-grid", kCanonical, "--out-dir", dir.string()}).code == 0);
  CHECK(fs::exists(dir / "scan_grid.csv"));
  const Invocation t = invoke({"timeline", kCanonical, "--out-dir", dir.string(), "--duration", "0.5", "--events"});
  CHECK(t.code == 0);
  CHECK(fs::exists(dir / "events.csv"));
  CHECK(invoke({"timeline", kCanonical, "--out-dir", dir.string(), "--duration", "0"}).code == 2);
}

TEST_CASE("render-pattern counts lobes") {
  const fs::path dir = scratch("pattern");
  const Invocation r = invoke({"render-pattern", "--l", "3", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "lobes 6\n");
  CHECK(fs::exists(dir / "pattern.svg"));
  CHECK(invoke({"render-pattern", "--l", "3", "--grid", "8", "--out-dir", dir.string()}).code == 2);
}

TEST_CASE("fit reads back a scan") {
  const fs::path dir = scratch("fit");
  REQUIRE(invoke({"scan-theta", kCanonical, "--out-dir", dir.string()}).code == 0);
  const Invocation r = invoke({"fit", (dir / "scan_theta.csv").string(), "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("visibility 0.707106781") != std::string::npos);
  CHECK(invoke({"fit", (dir / "scan_theta.csv").string(), "--column", "nope"}).code == 2);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"scan-theta"}).code == 2);
  CHECK(invoke({"scan-theta", kCanonical, "--threads", "0"}).code == 2);
  const Invocation bad = invoke({"scan-theta", kSource + "/tests/data/bad_qplate.json", "--out-dir", dir.string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("arm_A[0].q") != std::string::npos);
  const Invocation null = invoke({"scan-theta", kSource + "/tests/data/null_pipeline.json", "--out-dir", dir.string()});
  CHECK(null.code == 3);
  CHECK(null.err.find("fiber(l=5) on arm A") != std::string::npos);
  CHECK(invoke({"scan-theta", kSource + "/missing.json"}).code == 4);
  // a regular file where the output directory should be
  std::ofstream(dir.string() + "_file") << "x";
  CHECK(invoke({"scan-theta", kCanonical, "--out-dir", dir.string() + "_file"}).code == 4);
  CHECK(invoke({"--help"}).code == 0);
}
