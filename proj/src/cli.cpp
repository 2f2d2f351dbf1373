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

#include "oam_eraser/cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "oam_eraser/analysis.hpp"
#include "oam_eraser/config.hpp"
#include "oam_eraser/experiment.hpp"
#include "oam_eraser/report.hpp"

namespace oam_eraser::cli {

namespace {

constexpr double kPi = std::numbers::pi;

/// Input that cannot be used as given (maps to exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool counts = false;
  bool svg = false;
  unsigned threads = 1;
  // timeline
  double duration = 1.0;
  bool events = false;
  // render-pattern
  int l = 1;
  double phase = 0;
  int grid = 360;
  bool normalize = false;
  // fit
  std::string column;
};

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ConfigDocument load(const Options &opt) {
  if (opt.config_path.empty()) throw UsageError("a config file is required");
  ConfigDocument doc = parse_config(read_text_file(opt.config_path));
  if (opt.seed) doc.experiment.counting.seed = *opt.seed;
  return doc;
}

std::filesystem::path out_path(const Options &opt, const std::string &name) {
  return std::filesystem::path(opt.out_dir) / name;
}

double analyzer_alpha(const ExperimentConfig &cfg) { return cfg.analyzer_a ? cfg.analyzer_a->alpha : 0.0; }

std::vector<double> theta_axis(const ScanSpec &s, ScanKind expected, int default_points) {
  if (s.variable == expected) return linspace(s.start, s.stop, s.points, s.endpoint);
  return linspace(0, 2 * kPi, default_points, false);
}

FringeFit fit_or_usage(const ScanSeries &series) {
  try {
    return fit_sinusoid(series);
  } catch (const AnalysisError &e) {
    throw UsageError(std::string("scan cannot be fitted: ") + e.what());
  }
}

int scan_theta(const Options &opt, std::ostream &out) {
  const ConfigDocument doc = load(opt);
  const ExperimentConfig &cfg = doc.experiment;
  const PipelineResult pipeline = run_pipeline(cfg);
  const double alpha = analyzer_alpha(cfg);

  ScanSeries series = scan(pipeline.state, cfg, ScanVariable::theta, alpha, theta_axis(doc.scan, ScanKind::theta, 36));
  const FringeFit exact = fit_or_usage(series);
  const double v_exact = visibility(exact);
  if (opt.counts) series = simulate_counts(cfg, std::move(series), 0, opt.threads);
  series.fit = opt.counts ? fit_or_usage(series) : exact;
  const double v = visibility(series);

  write_text_file(out_path(opt, "scan_theta.csv"), scan_csv(series));
  write_text_file(out_path(opt, "summary.csv"), summary_csv({
                                                    {"alpha_rad", alpha},
                                                    {"visibility_exact", v_exact},
                                                    {"visibility", v},
                                                    {"offset", series.fit->offset},
                                                    {"amplitude", series.fit->amplitude},
                                                    {"phase_rad", series.fit->phase},
                                                    {"residual_rms", series.fit->residual_rms},
                                                    {"visibility_theory", theoretical_visibility(alpha)},
                                                    {"pipeline_probability", pipeline.cumulative_probability},
                                                }));
  if (opt.svg)
    write_text_file(out_path(opt, "scan_theta.svg"),
                    svg_line_plot(series.settings, {series.conditional, series.joint}, "coincidence probability",
                                  "theta (rad)", "probability"));
  out << "visibility " << format_number(v) << "\n";
  return kOk;
}

int scan_alpha(const Options &opt, std::ostream &out) {
  const ConfigDocument doc = load(opt);
  const ExperimentConfig &cfg = doc.experiment;
  const PipelineResult pipeline = run_pipeline(cfg);
  const auto &s = doc.scan;
  const auto alphas = s.variable == ScanKind::alpha ? linspace(s.start, s.stop, s.points, s.endpoint)
                                                    : linspace(0, kPi / 4, 9, true);
  const auto thetas = linspace(0, 2 * kPi, s.theta_points, false);

  std::vector<std::vector<double>> rows;
  std::vector<double> vis, theory;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ScanSeries series = scan(pipeline.state, cfg, ScanVariable::theta, alphas[i], thetas);
    if (opt.counts) series = simulate_counts(cfg, std::move(series), i, opt.threads);
    series.fit = fit_or_usage(series);
    const double v = visibility(series);
    vis.push_back(v);
    theory.push_back(theoretical_visibility(alphas[i]));
    rows.push_back({alphas[i], v, theory.back(), series.fit->offset, series.fit->amplitude, series.fit->phase,
                    series.fit->residual_rms});
  }
  write_text_file(out_path(opt, "scan_alpha.csv"),
                  table_csv({"setting_rad", "visibility", "visibility_theory", "offset", "amplitude", "phase_rad",
                             "residual_rms"},
                            rows));
  if (opt.svg)
    write_text_file(out_path(opt, "scan_alpha.svg"),
                    svg_line_plot(alphas, {vis, theory}, "fringe visibility", "alpha (rad)", "visibility"));
  out << "points " << alphas.size() << "\n";
  return kOk;
}

int scan_grid(const Options &opt, std::ostream &out) {
  const ConfigDocument doc = load(opt);
  const ExperimentConfig &cfg = doc.experiment;
  const PipelineResult pipeline = run_pipeline(cfg);
  const auto &s = doc.scan;
  const auto thetas = theta_axis(s, ScanKind::grid, 64);
  const auto alphas = linspace(s.alpha_start, s.alpha_stop, s.alpha_points, s.endpoint);

  std::string csv = "alpha_rad,theta_rad,p_joint,p_conditional,counts\n";
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ScanSeries series = scan(pipeline.state, cfg, ScanVariable::theta, alphas[i], thetas);
    if (opt.counts) series = simulate_counts(cfg, std::move(series), i, opt.threads);
    for (std::size_t k = 0; k < series.size(); ++k) {
      csv += format_number(alphas[i]) + "," + format_number(series.settings[k]) + "," + format_number(series.joint[k]) +
             "," + format_number(series.conditional[k]) + ",";
      if (series.counts) csv += std::to_string((*series.counts)[k]);
      csv += "\n";
    }
  }
  write_text_file(out_path(opt, "scan_grid.csv"), csv);
  out << "points " << alphas.size() * thetas.size() << "\n";
  return kOk;
}

int timeline(const Options &opt, std::ostream &out) {
  const ConfigDocument doc = load(opt);
  const ExperimentConfig &cfg = doc.experiment;
  if (!(opt.duration > 0)) throw UsageError("--duration must be > 0");
  const TimelineResult r = simulate_timeline(cfg, analyzer_alpha(cfg), cfg.analyzer_b.theta, opt.duration);
  const double floor = r.accidental_floor(cfg.counting.gate);
  write_text_file(out_path(opt, "timeline.csv"), summary_csv({
                                                     {"delay_ns", r.delay * 1e9},
                                                     {"duration_s", r.duration},
                                                     {"joint_probability", r.joint_probability},
                                                     {"pairs_emitted", double(r.pairs_emitted)},
                                                     {"pairs_detected", double(r.pairs_detected)},
                                                     {"singles_A", double(r.singles_a)},
                                                     {"singles_B", double(r.singles_b)},
                                                     {"coincidences", double(r.coincidences)},
                                                     {"true_coincidences", double(r.true_coincidences)},
                                                     {"accidental_floor", floor},
                                                 }));
  if (opt.events) {
    std::string csv = "arm,timestamp_s,tag,pair\n";
    for (const auto &e : r.events)
      csv += std::string(arm_name(e.arm)) + "," + format_number(e.timestamp) + "," +
             (e.tag == EventTag::true_pair ? "true_pair" : "accidental") + "," +
             (e.tag == EventTag::true_pair ? std::to_string(e.pair) : std::string()) + "\n";
    write_text_file(out_path(opt, "events.csv"), csv);
  }
  out << "delay_ns " << format_number(r.delay * 1e9) << "\ncoincidences " << r.coincidences << "\n";
  return kOk;
}

int render_pattern(const Options &opt, std::ostream &out) {
  Eigen::VectorXd pattern;
  try {
    pattern = render_azimuthal_pattern(opt.l, opt.phase, opt.grid, opt.normalize);
  } catch (const AnalysisError &e) {
    throw UsageError(e.what());
  }
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < pattern.size(); ++i) rows.push_back({2 * kPi * double(i) / double(opt.grid), pattern(i)});
  write_text_file(out_path(opt, "pattern.csv"), table_csv({"phi_rad", "intensity"}, rows));
  write_text_file(out_path(opt, "pattern.svg"),
                  svg_polar_plot(pattern, "azimuthal pattern, l = " + std::to_string(opt.l)));
  out << "lobes " << count_lobes(pattern) << "\n";
  return kOk;
}

int fit(const Options &opt, std::ostream &out) {
  if (opt.config_path.empty()) throw UsageError("a CSV file is required");
  std::istringstream in(read_text_file(opt.config_path));
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty CSV");
  std::vector<std::string> header;
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  auto column_of = [&](const std::string &name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto xcol = column_of("setting_rad");
  if (!xcol) throw UsageError("CSV has no setting_rad column");

  std::vector<std::vector<std::string>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::istringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    cells.push_back(std::move(row));
  }

  std::string name = opt.column;
  if (name.empty()) {
    const auto counts = column_of("counts");
    const bool have_counts = counts && !cells.empty() && cells[0].size() > *counts && !cells[0][*counts].empty();
    name = have_counts ? "counts" : "p_joint";
  }
  const auto ycol = column_of(name);
  if (!ycol) throw UsageError("CSV has no column " + name);

  std::vector<double> x, y;
  for (const auto &row : cells) {
    if (row.size() <= std::max(*xcol, *ycol) || row[*ycol].empty()) throw UsageError("CSV row is missing values");
    try {
      x.push_back(std::stod(row[*xcol]));
      y.push_back(std::stod(row[*ycol]));
    } catch (const std::exception &) {
      throw UsageError("CSV value is not a number");
    }
  }
  FringeFit f;
  try {
    f = fit_sinusoid(x, y);
  } catch (const AnalysisError &e) {
    throw UsageError(std::string("scan cannot be fitted: ") + e.what());
  }
  const double v = visibility(f);
  write_text_file(out_path(opt, "fit.csv"), summary_csv({
                                                {"visibility", v},
                                                {"offset", f.offset},
                                                {"amplitude", f.amplitude},
                                                {"phase_rad", f.phase},
                                                {"residual_rms", f.residual_rms},
                                            }));
  out << "visibility " << format_number(v) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Simulator for the OAM quantum eraser with polarization-OAM hybrid entanglement", "oam-eraser"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App *sub, bool config_required) {
    auto *pos = sub->add_option("config", opt.config_path, "experiment config (JSON)");
    if (config_required) pos->required();
    sub->add_option("--seed", opt.seed, "override counting.seed");
    sub->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--counts,!--no-counts", opt.counts, "sample Poisson counts (default: off)");
    sub->add_flag("--svg", opt.svg, "also write SVG plots");
    sub->add_option("--threads", opt.threads, "worker threads for count sampling")->check(CLI::Range(1u, 256u));
  };

  auto *theta = app.add_subcommand("scan-theta", "hologram scan at the configured polarizer angle");
  common(theta, true);
  auto *alpha = app.add_subcommand("scan-alpha", "fringe visibility versus polarizer angle");
  common(alpha, true);
  auto *grid = app.add_subcommand("scan-grid", "coincidence probabilities on an (alpha, theta) grid");
  common(grid, true);
  auto *tl = app.add_subcommand("timeline", "event-level coincidence timeline");
  common(tl, true);
  tl->add_option("--duration", opt.duration, "simulated time in seconds")->capture_default_str();
  tl->add_flag("--events", opt.events, "write every detection event to events.csv");
  auto *pattern = app.add_subcommand("render-pattern", "azimuthal intensity of a +-l superposition");
  pattern->add_option("--l", opt.l, "OAM index")->capture_default_str();
  pattern->add_option("--phase", opt.phase, "intermodal phase (rad)")->capture_default_str();
  pattern->add_option("--grid", opt.grid, "azimuthal samples")->capture_default_str();
  pattern->add_flag("--normalize", opt.normalize, "scale the peak to 1");
  pattern->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();
  auto *fitcmd = app.add_subcommand("fit", "fit a fringe to a scan CSV");
  fitcmd->add_option("csv", opt.config_path, "scan CSV (setting_rad column required)")->required();
  fitcmd->add_option("--column", opt.column, "value column (default: counts if present, else p_joint)");
  fitcmd->add_option("--out-dir", opt.out_dir, "output directory")->capture_default_str();

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (theta->parsed()) return scan_theta(opt, out);
    if (alpha->parsed()) return scan_alpha(opt, out);
    if (grid->parsed()) return scan_grid(opt, out);
    if (tl->parsed()) return timeline(opt, out);
    if (pattern->parsed()) return render_pattern(opt, out);
    if (fitcmd->parsed()) return fit(opt, out);
  } catch (const ConfigParseError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NullPipelineError &e) {
    err << "null pipeline: state extinguished by " << e.element() << "\n";
    return kNullPipeline;
  } catch (const IoError &e) {
    err << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace oam_eraser::cli
