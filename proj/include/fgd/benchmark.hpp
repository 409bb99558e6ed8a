#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/blink.hpp"
#include "fgd/config.hpp"
#include "fgd/gaze_eval.hpp"
#include "fgd/methods.hpp"
#include "fgd/simulate.hpp"

namespace fgd {

// Trial seed for scenario i, decorrelated from the drift-spec stream.
inline std::uint64_t scenario_seed(std::uint64_t seed, std::size_t i) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::vector<DriftSpec> corpus_drift_specs(const ToolkitConfig& cfg) {
  const DriftRanges defaults = default_drift_ranges(cfg.trial_script());
  return random_drift_scenarios(cfg.synth.n_scenarios, cfg.seed,
                                cfg.synth.drift_amplitude_v.value_or(defaults.amplitude_v),
                                cfg.synth.drift_slope_v_per_s.value_or(defaults.slope_v_per_s));
}

// Scenario i of the synthetic benchmark described by cfg.
inline GroundTruth make_scenario(const ToolkitConfig& cfg, std::size_t i, const std::vector<DriftSpec>& specs) {
  if (i >= specs.size()) throw std::invalid_argument("scenario index out of range");
  const GroundTruth base = synthesize(cfg.trial_script(), cfg.fs_hz, cfg.synth.noise_std_v, cfg.synth.blink_rate_hz,
                                     scenario_seed(cfg.seed, i));
  return inject_drift(base, specs[i]);
}

inline std::vector<GroundTruth> make_corpus(const ToolkitConfig& cfg) {
  if (cfg.synth.n_scenarios < 1) throw std::invalid_argument("n_scenarios must be >= 1");
  const auto specs = corpus_drift_specs(cfg);
  std::vector<GroundTruth> out;
  for (std::size_t i = 0; i < specs.size(); ++i) out.push_back(make_scenario(cfg, i, specs));
  return out;
}

// What compare needs from one scenario.
struct Scenario {
  SampledSignal raw;
  SampledSignal gaze;
  std::vector<TrueSaccade> events;
};

struct MethodComparison {
  EvalReport report;
  GazeRegression regression;
  std::vector<SaccadeError> errors;         // event_idx runs over the concatenated scenarios
  std::vector<std::string> event_targets;   // parallel to all events of all scenarios
};

inline SampledSignal prepare_input(const SampledSignal& raw, const ToolkitConfig& cfg) {
  return cfg.eval.remove_blinks ? remove_blinks(raw, detect_blinks(raw, cfg.blink)) : raw;
}

// Regression fitted on the training scenario, applied to every scenario;
// errors measured after each ground-truth saccade.
inline MethodComparison compare_method(MethodId method, const std::vector<Scenario>& scenarios,
                                       const ToolkitConfig& cfg) {
  if (scenarios.empty()) throw std::invalid_argument("no scenarios to compare");
  if (cfg.eval.train_scenario >= scenarios.size()) throw std::invalid_argument("train_scenario out of range");
  std::vector<SampledSignal> dedrifted;
  dedrifted.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    dedrifted.push_back(run_method(method, prepare_input(sc.raw, cfg), cfg.methods, cfg.fgd).dedrifted);
  }
  MethodComparison out;
  out.regression = fit_regression(dedrifted[cfg.eval.train_scenario], scenarios[cfg.eval.train_scenario].gaze);
  std::size_t offset = 0;
  std::size_t skipped = 0;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const SampledSignal pred = predict_gaze(dedrifted[s], out.regression);
    const SaccadeErrors errs =
        saccade_errors(pred, scenarios[s].gaze, as_saccade_events(scenarios[s].events), cfg.eval.window);
    for (const auto& e : errs.errors) out.errors.push_back({e.event_idx + offset, e.epsilon_deg});
    for (const auto& ev : scenarios[s].events) out.event_targets.push_back(ev.target_id);
    skipped += errs.skipped.size();
    offset += scenarios[s].events.size();
  }
  out.report = build_report(out.errors, out.event_targets, to_string(method), cfg.eval.include_center, skipped);
  return out;
}

}  // namespace fgd
