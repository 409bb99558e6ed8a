#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgd/fgd.hpp"

namespace fs = std::filesystem;

namespace {

// Flag values; unset ones leave the config file (or default) untouched.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> fs_hz;

  std::optional<std::string> input, output, out_dir, corpus, report, diagnostics, drift_spec, reference, events;
  std::optional<std::string> method;
  std::optional<std::vector<std::string>> methods;
  std::optional<std::size_t> n_scenarios;
  std::optional<double> noise_std, blink_rate;
  std::optional<int> poly_order, wavelet_level;
  std::optional<double> cutoff_hz;
  std::optional<std::string> wavelet_family, boundary;
  bool remove_blinks = false;
  bool include_center = false;
  std::optional<std::string> train_input, train_reference;
  std::optional<std::string> blinks_out;
};

fgd::ToolkitConfig effective_config(const Overrides& o) {
  fgd::ToolkitConfig c;
  if (o.config_path) c = fgd::load_config(*o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.fs_hz) c.fs_hz = *o.fs_hz;
  if (o.input) c.io.input = *o.input;
  if (o.output) c.io.output = *o.output;
  if (o.out_dir) c.io.out_dir = *o.out_dir;
  if (o.corpus) c.io.corpus_dir = *o.corpus;
  if (o.report) c.io.report = *o.report;
  if (o.diagnostics) c.io.diagnostics_dir = *o.diagnostics;
  if (o.drift_spec) c.io.drift_spec = *o.drift_spec;
  if (o.reference) c.io.reference = *o.reference;
  if (o.events) c.io.events = *o.events;
  if (o.blinks_out) c.io.blinks_out = *o.blinks_out;
  if (o.train_input) c.io.train_input = *o.train_input;
  if (o.train_reference) c.io.train_reference = *o.train_reference;
  if (o.method) c.io.method = *o.method;
  if (o.methods) c.io.methods = *o.methods;
  if (o.n_scenarios) c.synth.n_scenarios = *o.n_scenarios;
  if (o.noise_std) c.synth.noise_std_v = *o.noise_std;
  if (o.blink_rate) c.synth.blink_rate_hz = *o.blink_rate;
  if (o.poly_order) c.methods.poly_order = *o.poly_order;
  if (o.cutoff_hz) c.methods.cutoff_hz = *o.cutoff_hz;
  if (o.wavelet_level) c.fgd.wavelet_level = *o.wavelet_level;
  if (o.wavelet_family) c.fgd.family = fgd::parse_wavelet_family(*o.wavelet_family);
  if (o.boundary) c.fgd.mode = fgd::parse_boundary_mode(*o.boundary);
  if (o.remove_blinks) c.eval.remove_blinks = true;
  if (o.include_center) c.eval.include_center = true;
  c.blink.validate();
  c.fgd.detect.validate();
  c.fgd.reconstruct.validate();
  return c;
}

const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) throw std::invalid_argument(std::string("missing required ") + flag);
  return value;
}

fs::path parent_dir(const fs::path& file) {
  const fs::path p = file.parent_path();
  return p.empty() ? fs::path(".") : p;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw fgd::io_error("cannot create directory '" + dir.string() + "'");
}

void echo_config(const fs::path& dir, const fgd::ToolkitConfig& c) {
  ensure_dir(dir);
  fgd::write_text(dir / "effective_config.json", fgd::dump(fgd::to_json(c)));
}

fgd::SampledSignal load_signal(const std::string& path, const Overrides& o) {
  if (!fs::exists(path)) throw std::invalid_argument("input file '" + path + "' does not exist");
  return fgd::read_signal_csv(path, o.fs_hz);
}

void warn_band(const fgd::ToolkitConfig& c, double fs_hz) {
  const double edge = fgd::approx_band_upper_hz(fs_hz, c.fgd.wavelet_level);
  if (edge > 1.0) {
    std::fprintf(stderr,
                 "warning: approximation band reaches %.3g Hz at level %d and %.6g Hz; consider a deeper level\n",
                 edge, c.fgd.wavelet_level, fs_hz);
  }
}

std::string scenario_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scenario_%03zu", i);
  return buf;
}

// ---- commands ----

int cmd_synth(const fgd::ToolkitConfig& c) {
  const fs::path out = require(c.io.out_dir, "--out-dir");
  if (c.synth.n_scenarios < 1) throw std::invalid_argument("--n-scenarios must be at least 1");
  const auto specs = fgd::corpus_drift_specs(c);
  echo_config(out, c);
  std::size_t total = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const fgd::GroundTruth g = fgd::make_scenario(c, i, specs);
    const fs::path dir = out / scenario_name(i);
    ensure_dir(dir);
    fgd::write_signal_csv(dir / "raw.csv", g.raw);
    fgd::write_signal_csv(dir / "clean.csv", g.clean);
    fgd::write_signal_csv(dir / "drift.csv", g.drift);
    fgd::write_signal_csv(dir / "noise.csv", g.noise);
    fgd::write_signal_csv(dir / "gaze.csv", g.gaze);
    fgd::write_true_events_csv(dir / "events.csv", g.events);
    fgd::write_blinks_csv(dir / "blinks.csv", g.blinks);
    const fgd::json meta{{"scenario", i},
                         {"trial_seed", fgd::scenario_seed(c.seed, i)},
                         {"fs_hz", c.fs_hz},
                         {"n_samples", g.raw.size()},
                         {"n_saccades", g.events.size()},
                         {"n_blinks", g.blinks.size()},
                         {"noise_std_v", c.synth.noise_std_v},
                         {"drift_model", "linear slope plus sinusoid mixture"},
                         {"drift", fgd::to_json(specs[i])}};
    fgd::write_text(dir / "meta.json", fgd::dump(meta));
    echo_config(dir, c);
    total += g.events.size();
  }
  std::printf("wrote %zu scenarios (%zu saccades) to %s\n", specs.size(), total, out.string().c_str());
  return 0;
}

int cmd_inject_drift(const fgd::ToolkitConfig& c, const Overrides& o) {
  const fgd::SampledSignal in = load_signal(require(c.io.input, "--input"), o);
  const fs::path out = require(c.io.output, "--output");
  fgd::DriftSpec spec;
  if (!c.io.drift_spec.empty()) {
    spec = fgd::drift_spec_from_json(fgd::parse_json_text(fgd::read_text(c.io.drift_spec), c.io.drift_spec));
  } else {
    const fgd::DriftRanges d = fgd::default_drift_ranges(c.trial_script());
    spec = fgd::random_drift_scenarios(1, c.seed, c.synth.drift_amplitude_v.value_or(d.amplitude_v),
                                       c.synth.drift_slope_v_per_s.value_or(d.slope_v_per_s))
               .front();
  }
  const std::vector<double> d = fgd::drift_samples(spec, in.size(), in.fs_hz());
  std::vector<double> y(in.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = in[k] + d[k];
  echo_config(parent_dir(out), c);
  fgd::write_signal_csv(out, in.with_samples(std::move(y)));
  fgd::write_signal_csv(parent_dir(out) / (out.stem().string() + "_drift.csv"), in.with_samples(d));
  fgd::write_text(parent_dir(out) / (out.stem().string() + "_drift.json"), fgd::dump(fgd::to_json(spec)));
  return 0;
}

int cmd_blink_remove(const fgd::ToolkitConfig& c, const Overrides& o) {
  const fgd::SampledSignal in = load_signal(require(c.io.input, "--input"), o);
  const fs::path out = require(c.io.output, "--output");
  const auto blinks = fgd::detect_blinks(in, c.blink);
  echo_config(parent_dir(out), c);
  fgd::write_signal_csv(out, fgd::remove_blinks(in, blinks));
  const fs::path events =
      c.io.blinks_out.empty() ? parent_dir(out) / (out.stem().string() + "_blinks.csv") : fs::path(c.io.blinks_out);
  fgd::write_blinks_csv(events, blinks);
  std::printf("removed %zu blinks\n", blinks.size());
  return 0;
}

int cmd_detect(const fgd::ToolkitConfig& c, const Overrides& o) {
  fgd::SampledSignal in = load_signal(require(c.io.input, "--input"), o);
  const fs::path out = require(c.io.output, "--output");
  if (c.eval.remove_blinks) in = fgd::remove_blinks(in, fgd::detect_blinks(in, c.blink));
  const auto events = fgd::detect_saccades(fgd::differentiate(in, c.fgd.detect.lag_n), c.fgd.detect);
  echo_config(parent_dir(out), c);
  fgd::write_events_csv(out, events);
  std::printf("detected %zu saccades\n", events.size());
  return 0;
}

int cmd_dedrift(const fgd::ToolkitConfig& c, const Overrides& o) {
  fgd::SampledSignal in = load_signal(require(c.io.input, "--input"), o);
  const fs::path out = require(c.io.output, "--output");
  const fgd::MethodId method = fgd::parse_method(c.io.method);
  if (c.eval.remove_blinks) in = fgd::remove_blinks(in, fgd::detect_blinks(in, c.blink));
  if (method == fgd::MethodId::fgd || method == fgd::MethodId::wavelet) warn_band(c, in.fs_hz());

  echo_config(parent_dir(out), c);
  if (method == fgd::MethodId::fgd) {
    const fgd::FgdResult r = fgd::fgd_pipeline(in, c.fgd);
    for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    fgd::write_signal_csv(out, r.dedrifted);
    if (!c.io.diagnostics_dir.empty()) {
      const fs::path d = c.io.diagnostics_dir;
      echo_config(d, c);
      fgd::write_signal_csv(d / "trend.csv", r.trend);
      fgd::write_signal_csv(d / "baseline.csv", r.baseline);
      fgd::write_signal_csv(d / "saccadic.csv", r.saccadic);
      fgd::write_events_csv(d / "events.csv", r.events);
      fgd::write_segments_csv(d / "segments.csv", r.segments);
    }
  } else {
    const fgd::MethodResult r = fgd::run_method(method, in, c.methods, c.fgd);
    fgd::write_signal_csv(out, r.dedrifted);
    if (!c.io.diagnostics_dir.empty()) {
      const fs::path d = c.io.diagnostics_dir;
      echo_config(d, c);
      fgd::write_signal_csv(d / "trend.csv", r.trend);
    }
  }
  return 0;
}

std::vector<fgd::Scenario> load_corpus(const fs::path& dir, const Overrides& o) {
  if (!fs::is_directory(dir)) throw std::invalid_argument("corpus directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && e.path().filename().string().rfind("scenario_", 0) == 0) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::invalid_argument("corpus '" + dir.string() + "' has no scenario_* directories");
  std::vector<fgd::Scenario> out;
  for (const auto& d : dirs) {
    for (const char* f : {"raw.csv", "gaze.csv", "events.csv"}) {
      if (!fs::exists(d / f)) throw std::invalid_argument("corpus layout: missing " + (d / f).string());
    }
    fgd::Scenario s{fgd::read_signal_csv(d / "raw.csv", o.fs_hz), fgd::read_signal_csv(d / "gaze.csv", o.fs_hz),
                    fgd::read_true_events_csv(d / "events.csv")};
    fgd::require_same_grid(s.raw, s.gaze, ("corpus layout: " + d.string()).c_str());
    out.push_back(std::move(s));
  }
  return out;
}

fs::path text_report_path(const fs::path& json_path) {
  fs::path p = json_path;
  p.replace_extension(".txt");
  return p;
}

int cmd_compare(const fgd::ToolkitConfig& c, const Overrides& o) {
  const auto scenarios = load_corpus(require(c.io.corpus_dir, "--corpus"), o);
  const fs::path report = require(c.io.report, "--report");
  if (c.io.methods.empty()) throw std::invalid_argument("--methods is empty");
  std::vector<fgd::MethodId> methods;
  for (const auto& m : c.io.methods) methods.push_back(fgd::parse_method(m));
  for (auto m : methods) {
    if (m == fgd::MethodId::fgd || m == fgd::MethodId::wavelet) {
      warn_band(c, scenarios.front().raw.fs_hz());
      break;
    }
  }

  std::vector<fgd::EvalReport> reports;
  fgd::json arr = fgd::json::array();
  for (auto m : methods) {
    const fgd::MethodComparison r = fgd::compare_method(m, scenarios, c);
    reports.push_back(r.report);
    arr.push_back({{"report", fgd::to_json(r.report)}, {"regression", fgd::to_json(r.regression)}});
  }
  const std::string table = fgd::format_table(reports);
  const fgd::json doc{{"scenarios", scenarios.size()},
                      {"train_scenario", c.eval.train_scenario},
                      {"include_center", c.eval.include_center},
                      {"methods", arr}};
  echo_config(parent_dir(report), c);
  fgd::write_text(report, fgd::dump(doc));
  fgd::write_text(text_report_path(report), table);
  std::fputs(table.c_str(), stdout);
  return 0;
}

int cmd_evaluate(const fgd::ToolkitConfig& c, const Overrides& o) {
  const fgd::SampledSignal in = load_signal(require(c.io.input, "--input"), o);
  const fgd::SampledSignal ref = load_signal(require(c.io.reference, "--reference"), o);
  const auto truth = fgd::read_true_events_csv(require(c.io.events, "--events"));
  const fs::path report = require(c.io.report, "--report");
  fgd::require_same_grid(in, ref, "evaluate");

  fgd::GazeRegression reg;
  if (!c.io.train_input.empty() || !c.io.train_reference.empty()) {
    reg = fgd::fit_regression(load_signal(require(c.io.train_input, "--train-input"), o),
                              load_signal(require(c.io.train_reference, "--train-reference"), o));
  } else {
    reg = fgd::fit_regression(in, ref);
  }
  const auto errs = fgd::saccade_errors(fgd::predict_gaze(in, reg), ref, fgd::as_saccade_events(truth), c.eval.window);
  std::vector<std::string> targets;
  for (const auto& t : truth) targets.push_back(t.target_id);
  const fgd::EvalReport r = fgd::build_report(errs.errors, targets, c.io.method, c.eval.include_center,
                                              errs.skipped.size());
  fgd::json per = fgd::json::array();
  for (const auto& e : errs.errors) per.push_back({{"event_idx", e.event_idx}, {"epsilon_deg", e.epsilon_deg}});
  const fgd::json doc{{"report", fgd::to_json(r)},
                      {"regression", fgd::to_json(reg)},
                      {"errors", per},
                      {"skipped_events", errs.skipped}};
  echo_config(parent_dir(report), c);
  fgd::write_text(report, fgd::dump(doc));
  const std::string table = fgd::format_table({r});
  fgd::write_text(text_report_path(report), table);
  std::fputs(table.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature-guided de-drifting toolkit for EOG signals"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--fs-hz", o.fs_hz, "sampling rate in Hz")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "generate a synthetic drift benchmark corpus");
  synth->add_option("--out-dir", o.out_dir, "output directory");
  synth->add_option("--n-scenarios", o.n_scenarios, "number of drift scenarios");
  synth->add_option("--noise-std", o.noise_std, "white noise std in volts");
  synth->add_option("--blink-rate", o.blink_rate, "blink rate in Hz");

  auto* inject = app.add_subcommand("inject-drift", "add low-frequency drift to a signal");
  inject->add_option("--input", o.input, "input signal CSV");
  inject->add_option("--output", o.output, "output signal CSV");
  inject->add_option("--drift-spec", o.drift_spec, "drift spec JSON (random when absent)");

  auto* blink = app.add_subcommand("blink-remove", "detect and interpolate out blinks");
  blink->add_option("--input", o.input, "input signal CSV");
  blink->add_option("--output", o.output, "output signal CSV");
  blink->add_option("--blinks-out", o.blinks_out, "blink events CSV");

  auto* detect = app.add_subcommand("detect", "detect saccades");
  detect->add_option("--input", o.input, "input signal CSV");
  detect->add_option("--output", o.output, "events CSV");
  detect->add_flag("--remove-blinks", o.remove_blinks, "remove blinks first");

  auto* dedrift = app.add_subcommand("dedrift", "remove baseline drift");
  dedrift->add_option("--input", o.input, "input signal CSV");
  dedrift->add_option("--output", o.output, "de-drifted signal CSV");
  dedrift->add_option("--method", o.method, "fgd, poly, highpass or wavelet");
  dedrift->add_option("--poly-order", o.poly_order, "polynomial order");
  dedrift->add_option("--cutoff-hz", o.cutoff_hz, "high-pass cutoff in Hz");
  dedrift->add_option("--wavelet-level", o.wavelet_level, "wavelet decomposition level");
  dedrift->add_option("--wavelet-family", o.wavelet_family, "haar, db4 or db8");
  dedrift->add_option("--boundary", o.boundary, "symmetric, periodic or zero");
  dedrift->add_option("--diagnostics", o.diagnostics, "directory for trend/baseline/events CSVs");
  dedrift->add_flag("--remove-blinks", o.remove_blinks, "remove blinks first");

  auto* compare = app.add_subcommand("compare", "compare methods over a corpus");
  compare->add_option("--corpus", o.corpus, "corpus directory from synth");
  compare->add_option("--report", o.report, "report JSON path (text table next to it)");
  compare->add_option("--methods", o.methods, "methods to compare")->delimiter(',');
  compare->add_option("--poly-order", o.poly_order, "polynomial order");
  compare->add_option("--cutoff-hz", o.cutoff_hz, "high-pass cutoff in Hz");
  compare->add_option("--wavelet-level", o.wavelet_level, "wavelet decomposition level");
  compare->add_option("--wavelet-family", o.wavelet_family, "haar, db4 or db8");
  compare->add_option("--boundary", o.boundary, "symmetric, periodic or zero");
  compare->add_flag("--remove-blinks", o.remove_blinks, "remove blinks first");
  compare->add_flag("--include-center", o.include_center, "count returns to centre");

  auto* evaluate = app.add_subcommand("evaluate", "per-saccade gaze error of a de-drifted signal");
  evaluate->add_option("--input", o.input, "de-drifted signal CSV");
  evaluate->add_option("--reference", o.reference, "reference gaze CSV (degrees)");
  evaluate->add_option("--events", o.events, "ground-truth events CSV");
  evaluate->add_option("--report", o.report, "report JSON path");
  evaluate->add_option("--method", o.method, "label for the report");
  evaluate->add_option("--train-input", o.train_input, "de-drifted signal to fit the regression on");
  evaluate->add_option("--train-reference", o.train_reference, "reference gaze for the training signal");
  evaluate->add_flag("--include-center", o.include_center, "count returns to centre");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const fgd::ToolkitConfig c = effective_config(o);
    if (synth->parsed()) return cmd_synth(c);
    if (inject->parsed()) return cmd_inject_drift(c, o);
    if (blink->parsed()) return cmd_blink_remove(c, o);
    if (detect->parsed()) return cmd_detect(c, o);
    if (dedrift->parsed()) return cmd_dedrift(c, o);
    if (compare->parsed()) return cmd_compare(c, o);
    if (evaluate->parsed()) return cmd_evaluate(c, o);
    return 2;
  } catch (const fgd::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const fgd::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}
