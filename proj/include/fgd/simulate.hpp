#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/blink.hpp"
#include "fgd/signal.hpp"

namespace fgd {

struct Fixation {
  std::string target_id;
  double duration_s = 0.0;

  friend bool operator==(const Fixation&, const Fixation&) = default;
};

struct TrialScript {
  std::vector<Fixation> fixations;
  std::map<std::string, double> targets;  // id -> gaze angle, degrees
  double saccade_duration_s = 0.05;
  double amplitude_scale_v_per_deg = 20e-6;
  double gain = 300.0;

  double volts_per_deg() const { return amplitude_scale_v_per_deg * gain; }

  double total_duration_s() const {
    double t = 0.0;
    for (const auto& f : fixations) t += f.duration_s;
    return t;
  }

  // Largest |angle change| between consecutive fixations, degrees.
  double largest_step_deg() const {
    double big = 0.0;
    for (std::size_t i = 1; i < fixations.size(); ++i) {
      big = std::max(big, std::abs(targets.at(fixations[i].target_id) - targets.at(fixations[i - 1].target_id)));
    }
    return big;
  }

  void validate() const {
    if (fixations.empty()) throw std::invalid_argument("trial script has no fixations");
    for (const auto& [id, angle] : targets) {
      if (!(std::abs(angle) <= 30.0)) {
        throw std::invalid_argument("target " + id + " lies outside the +/-30 degree linear range");
      }
    }
    for (const auto& f : fixations) {
      if (!targets.contains(f.target_id)) throw std::invalid_argument("unknown target '" + f.target_id + "'");
      if (!(f.duration_s > 0.0)) throw std::invalid_argument("fixation durations must be positive");
      if (!(saccade_duration_s < f.duration_s)) {
        throw std::invalid_argument("saccade duration must be shorter than every fixation");
      }
    }
    if (!(saccade_duration_s > 0.0)) throw std::invalid_argument("saccade duration must be positive");
    if (!(amplitude_scale_v_per_deg > 0.0) || !(gain > 0.0)) {
      throw std::invalid_argument("amplitude scale and gain must be positive");
    }
  }
};

struct Sinusoid {
  double amplitude_v = 0.0;
  double freq_hz = 0.0;
  double phase_rad = 0.0;

  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

struct DriftSpec {
  double linear_slope_v_per_s = 0.0;
  std::vector<Sinusoid> sinusoids;
  std::uint64_t seed = 0;

  friend bool operator==(const DriftSpec&, const DriftSpec&) = default;

  void validate() const {
    if (!std::isfinite(linear_slope_v_per_s)) throw std::invalid_argument("drift slope must be finite");
    for (const auto& s : sinusoids) {
      if (!(s.freq_hz >= 0.0 && s.freq_hz < 0.1)) {
        throw std::invalid_argument("drift frequency " + std::to_string(s.freq_hz) + " Hz is not below 0.1 Hz");
      }
      if (!std::isfinite(s.amplitude_v) || !std::isfinite(s.phase_rad)) {
        throw std::invalid_argument("drift amplitude and phase must be finite");
      }
    }
  }
};

struct TrueSaccade {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  double from_deg = 0.0;
  double to_deg = 0.0;
  std::string target_id;

  friend bool operator==(const TrueSaccade&, const TrueSaccade&) = default;
};

struct GroundTruth {
  SampledSignal clean;  // includes any blink pulses
  SampledSignal drift;
  SampledSignal noise;
  SampledSignal raw;    // clean + drift + noise
  SampledSignal gaze;   // degrees
  std::vector<TrueSaccade> events;
  std::vector<BlinkEvent> blinks;
};

inline std::map<std::string, double> default_target_guide() {
  constexpr double distance_m = 0.44;
  std::map<std::string, double> t{{"C", 0.0}};
  for (int k = 1; k <= 4; ++k) {
    const double a = std::atan(0.05 * k / distance_m) * 180.0 / std::numbers::pi;
    t["L" + std::to_string(k)] = -a;
    t["R" + std::to_string(k)] = a;
  }
  return t;
}

inline TrialScript default_trial_script() {
  TrialScript s;
  s.targets = default_target_guide();
  s.fixations.push_back({"C", 5.0});
  for (const char* side : {"L", "R"}) {
    for (int k = 1; k <= 4; ++k) {
      s.fixations.push_back({side + std::to_string(k), 2.0});
      s.fixations.push_back({"C", 2.0});
    }
  }
  return s;
}

namespace detail {

inline std::size_t samples_for(double seconds, double fs_hz) {
  return static_cast<std::size_t>(std::llround(seconds * fs_hz));
}

}  // namespace detail

inline GroundTruth synthesize(const TrialScript& script, double fs_hz, double noise_std_v = 0.0,
                              double blink_rate_hz = 0.0, std::uint64_t seed = 0) {
  script.validate();
  if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) throw std::invalid_argument("sampling rate must be positive");
  if (!(noise_std_v >= 0.0)) throw std::invalid_argument("noise std must be >= 0");
  if (!(blink_rate_hz >= 0.0)) throw std::invalid_argument("blink rate must be >= 0");

  std::size_t n = 0;
  for (const auto& f : script.fixations) n += detail::samples_for(f.duration_s, fs_hz);
  if (n == 0) throw std::invalid_argument("trial is shorter than one sample");

  const std::size_t ramp = std::max<std::size_t>(1, detail::samples_for(script.saccade_duration_s, fs_hz));
  std::vector<double> gaze(n, 0.0);
  std::vector<TrueSaccade> events;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < script.fixations.size(); ++i) {
    const auto& fix = script.fixations[i];
    const std::size_t count = detail::samples_for(fix.duration_s, fs_hz);
    const double angle = script.targets.at(fix.target_id);
    for (std::size_t k = pos; k < std::min(n, pos + count); ++k) gaze[k] = angle;
    if (i > 0 && pos < n) {
      const double from = script.targets.at(script.fixations[i - 1].target_id);
      for (std::size_t k = 0; k <= ramp && pos + k < n; ++k) {
        const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(ramp)));
        gaze[pos + k] = from + (angle - from) * w;
      }
      events.push_back({pos, std::min(pos + ramp, n - 1), from, angle, fix.target_id});
    }
    pos += count;
  }

  const double vpd = script.volts_per_deg();
  std::vector<double> clean(n);
  for (std::size_t k = 0; k < n; ++k) clean[k] = gaze[k] * vpd;

  std::mt19937_64 rng(seed);
  std::vector<double> noise(n, 0.0);
  if (noise_std_v > 0.0) {
    std::normal_distribution<double> normal(0.0, noise_std_v);
    for (auto& v : noise) v = normal(rng);
  }

  std::vector<BlinkEvent> blinks;
  if (blink_rate_hz > 0.0) {
    double ref = script.largest_step_deg() * vpd;
    if (!(ref > 0.0)) ref = 10.0 * vpd;  // no saccades: size blinks against a 10 degree step
    std::exponential_distribution<double> gap(blink_rate_hz);
    std::uniform_real_distribution<double> dur(0.15, 0.3);
    std::uniform_real_distribution<double> amp(5.0, 10.0);
    const std::size_t saccade_margin = detail::samples_for(0.3, fs_hz);
    const std::size_t blink_gap = detail::samples_for(0.2, fs_hz);
    const double total_s = static_cast<double>(n) / fs_hz;
    for (double t = gap(rng); t < total_s; t += gap(rng)) {
      const double d = dur(rng);
      const double a = amp(rng) * ref;
      const auto s = static_cast<std::size_t>(t * fs_hz);
      const auto len = std::max<std::size_t>(2, static_cast<std::size_t>(d * fs_hz));
      if (s == 0 || s + len + 1 >= n) continue;
      const bool clear_of_saccades = std::all_of(events.begin(), events.end(), [&](const TrueSaccade& e) {
        return s + len + saccade_margin < e.start_idx || s > e.end_idx + saccade_margin;
      });
      const bool clear_of_blinks = blinks.empty() || s > blinks.back().end_idx + blink_gap;
      if (!clear_of_saccades || !clear_of_blinks) continue;
      for (std::size_t k = 0; k <= len; ++k) {
        clean[s + k] += a * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len)));
      }
      blinks.push_back({s, s + len, s + len / 2});
    }
  }

  std::vector<double> raw(n);
  for (std::size_t k = 0; k < n; ++k) raw[k] = clean[k] + noise[k];
  return {SampledSignal(fs_hz, std::move(clean)), SampledSignal(fs_hz, std::vector<double>(n, 0.0)),
          SampledSignal(fs_hz, std::move(noise)), SampledSignal(fs_hz, std::move(raw)),
          SampledSignal(fs_hz, std::move(gaze)), std::move(events), std::move(blinks)};
}

inline std::vector<double> drift_samples(const DriftSpec& spec, std::size_t n, double fs_hz) {
  spec.validate();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / fs_hz;
    double v = spec.linear_slope_v_per_s * t;
    for (const auto& s : spec.sinusoids) v += s.amplitude_v * std::sin(2.0 * std::numbers::pi * s.freq_hz * t + s.phase_rad);
    d[k] = v;
  }
  return d;
}

// Replaces any previous drift; raw is rebuilt as clean + drift + noise.
inline GroundTruth inject_drift(const GroundTruth& truth, const DriftSpec& spec) {
  const std::size_t n = truth.clean.size();
  std::vector<double> d = drift_samples(spec, n, truth.clean.fs_hz());
  std::vector<double> raw(n);
  for (std::size_t k = 0; k < n; ++k) raw[k] = truth.clean[k] + d[k] + truth.noise[k];
  GroundTruth out = truth;
  out.drift = truth.clean.with_samples(std::move(d));
  out.raw = truth.clean.with_samples(std::move(raw));
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Range&, const Range&) = default;
};

struct DriftRanges {
  Range amplitude_v;
  Range slope_v_per_s;

  friend bool operator==(const DriftRanges&, const DriftRanges&) = default;
};

// Per-sinusoid amplitude 0.05-0.2x the largest step, slope up to 0.25x the
// largest step per trial duration in either direction.
inline DriftRanges default_drift_ranges(const TrialScript& script) {
  const double big = script.largest_step_deg() * script.volts_per_deg();
  const double slope = 0.25 * big / script.total_duration_s();
  return {{0.05 * big, 0.2 * big}, {-slope, slope}};
}

inline std::vector<DriftSpec> random_drift_scenarios(std::size_t n, std::uint64_t rng_seed, Range amplitude_range,
                                                     Range slope_range) {
  if (n < 1) throw std::invalid_argument("need at least one drift scenario");
  if (!(amplitude_range.lo <= amplitude_range.hi) || !(slope_range.lo <= slope_range.hi)) {
    throw std::invalid_argument("drift ranges must satisfy lo <= hi");
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> slope(slope_range.lo, slope_range.hi);
  std::uniform_real_distribution<double> amp(amplitude_range.lo, amplitude_range.hi);
  std::uniform_real_distribution<double> freq(0.005, 0.1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<DriftSpec> specs;
  for (std::size_t i = 0; i < n; ++i) {
    DriftSpec s;
    s.seed = rng_seed + i;
    s.linear_slope_v_per_s = slope(rng);
    const int c = count(rng);
    for (int j = 0; j < c; ++j) {
      Sinusoid sin;
      sin.amplitude_v = amp(rng);
      sin.freq_hz = std::min(freq(rng), std::nextafter(0.1, 0.0));
      sin.phase_rad = phase(rng);
      s.sinusoids.push_back(sin);
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace fgd
