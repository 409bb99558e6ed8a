#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/signal.hpp"

namespace fgd {

struct SaccadeEvent {
  std::size_t peak_idx = 0;
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  int polarity = 1;  // sign of the derivative at the peak

  friend bool operator==(const SaccadeEvent&, const SaccadeEvent&) = default;
};

struct DetectConfig {
  double k_peak = 3.0;          // s_p = k_peak * std(derivative)
  double k_window = 0.4;        // s_i = k_window * std(derivative)
  double group_window_s = 0.5;  // super-threshold samples within this span form one peak
  std::size_t lag_n = 3;
  // > 0: s_i uses the derivative std over +/- local_window_s around each peak
  // instead of the whole record.
  double local_window_s = 0.0;

  void validate() const {
    if (!(k_peak > 0.0) || !(k_window > 0.0) || !(group_window_s > 0.0) || lag_n == 0) {
      throw std::invalid_argument("detect config: k_peak, k_window, group_window_s and lag_n must be positive");
    }
    if (!(local_window_s >= 0.0)) throw std::invalid_argument("detect config: local_window_s must be >= 0");
  }
};

inline double peak_threshold(const SampledSignal& deriv, const DetectConfig& cfg) {
  return cfg.k_peak * stats(deriv).std_dev;
}

inline double window_threshold(const SampledSignal& deriv, std::size_t peak_idx, const DetectConfig& cfg) {
  if (cfg.local_window_s <= 0.0) return cfg.k_window * stats(deriv).std_dev;
  const auto half = static_cast<std::size_t>(std::llround(cfg.local_window_s * deriv.fs_hz()));
  const std::size_t lo = peak_idx > half ? peak_idx - half : 0;
  const std::size_t hi = std::min(deriv.size() - 1, peak_idx + half);
  return cfg.k_window * stats(deriv.samples().subspan(lo, hi - lo + 1)).std_dev;
}

// Earliest super-threshold index of every peak group. A group collects the
// samples with |d| >= s_p lying within group_window_s of its first member.
inline std::vector<std::size_t> detect_peaks(const SampledSignal& deriv, const DetectConfig& cfg) {
  cfg.validate();
  const double s_p = peak_threshold(deriv, cfg);
  std::vector<std::size_t> peaks;
  if (!(s_p > 0.0)) return peaks;  // flat derivative: nothing stands out
  const double group_samples = cfg.group_window_s * deriv.fs_hz();
  bool open = false;
  std::size_t first = 0;
  for (std::size_t k = 0; k < deriv.size(); ++k) {
    if (std::abs(deriv[k]) < s_p) continue;
    if (!open || static_cast<double>(k - first) > group_samples + 1e-9) {
      peaks.push_back(k);
      first = k;
      open = true;
    }
  }
  return peaks;
}

// Saccade window around a peak: nearest sub-threshold sample on each side,
// clamped to the signal boundary when none exists.
inline SaccadeEvent detect_window(const SampledSignal& deriv, std::size_t peak_idx, const DetectConfig& cfg) {
  cfg.validate();
  if (peak_idx >= deriv.size()) throw std::invalid_argument("peak index out of range");
  const double s_i = window_threshold(deriv, peak_idx, cfg);
  if (std::abs(deriv[peak_idx]) < s_i) {
    throw std::invalid_argument("sample " + std::to_string(peak_idx) + " is below the window threshold");
  }
  SaccadeEvent ev;
  ev.peak_idx = peak_idx;
  ev.polarity = deriv[peak_idx] < 0.0 ? -1 : 1;

  ev.start_idx = 0;
  for (std::size_t k = peak_idx; k-- > 0;) {
    if (std::abs(deriv[k]) < s_i) {
      ev.start_idx = k;
      break;
    }
  }
  ev.end_idx = deriv.size() - 1;
  for (std::size_t k = peak_idx + 1; k < deriv.size(); ++k) {
    if (std::abs(deriv[k]) < s_i) {
      ev.end_idx = k;
      break;
    }
  }
  return ev;
}

// Throws unless events are sorted, pairwise disjoint and inside [0, n).
inline void validate_events(const std::vector<SaccadeEvent>& events, std::size_t n) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    if (ev.start_idx > ev.peak_idx || ev.peak_idx > ev.end_idx || ev.end_idx >= n) {
      throw std::invalid_argument("saccade event " + std::to_string(i) + " is malformed or out of range");
    }
    if (i > 0 && events[i - 1].end_idx >= ev.start_idx) {
      throw std::invalid_argument("saccade events " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " overlap or are unsorted");
    }
  }
}

// Peaks -> windows, merging windows that touch or overlap. A merged event
// keeps the earliest start, the latest end and the stronger peak.
inline std::vector<SaccadeEvent> detect_saccades(const SampledSignal& deriv, const DetectConfig& cfg) {
  std::vector<SaccadeEvent> events;
  for (std::size_t peak : detect_peaks(deriv, cfg)) {
    if (std::abs(deriv[peak]) < window_threshold(deriv, peak, cfg)) continue;
    SaccadeEvent ev = detect_window(deriv, peak, cfg);
    if (!events.empty() && ev.start_idx <= events.back().end_idx) {
      SaccadeEvent& last = events.back();
      last.start_idx = std::min(last.start_idx, ev.start_idx);
      last.end_idx = std::max(last.end_idx, ev.end_idx);
      if (std::abs(deriv[ev.peak_idx]) > std::abs(deriv[last.peak_idx])) {
        last.peak_idx = ev.peak_idx;
        last.polarity = ev.polarity;
      }
    } else {
      events.push_back(ev);
    }
  }
  return events;
}

// Saccadic component: E inside every [start, end], zero elsewhere.
inline SampledSignal extract_saccades(const SampledSignal& signal, const std::vector<SaccadeEvent>& events) {
  validate_events(events, signal.size());
  std::vector<double> out(signal.size(), 0.0);
  for (const auto& ev : events) {
    for (std::size_t k = ev.start_idx; k <= ev.end_idx; ++k) out[k] = signal[k];
  }
  return signal.with_samples(std::move(out));
}

inline SampledSignal exclude_saccades(const SampledSignal& signal, const SampledSignal& saccadic) {
  return subtract(signal, saccadic, "exclude_saccades");
}

}  // namespace fgd
