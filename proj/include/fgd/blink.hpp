#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/signal.hpp"

namespace fgd {

struct BlinkConfig {
  double k_blink = 3.0;
  double blink_max_duration_s = 0.4;
  double return_tolerance_frac = 0.25;  // of the pulse excursion
  bool bipolar = false;                 // also accept negative-first pulses
  std::size_t lag_n = 3;

  void validate() const {
    if (!(k_blink > 0.0) || !(blink_max_duration_s > 0.0) || !(return_tolerance_frac >= 0.0) || lag_n == 0) {
      throw std::invalid_argument("blink config: thresholds, duration and lag must be positive");
    }
  }
};

struct BlinkEvent {
  std::size_t start_idx = 0;
  std::size_t end_idx = 0;
  std::size_t peak_idx = 0;

  friend bool operator==(const BlinkEvent&, const BlinkEvent&) = default;
};

namespace detail {

inline double level_before(std::span<const double> x, std::size_t s, std::size_t count) {
  if (s == 0) return x[0];
  const std::size_t lo = s > count ? s - count : 0;
  return mean_of(x.subspan(lo, s - lo));
}

inline double level_after(std::span<const double> x, std::size_t e, std::size_t count) {
  if (e + 1 >= x.size()) return x[e];
  return mean_of(x.subspan(e + 1, std::min(count, x.size() - e - 1)));
}

// Positive pulse search on x with derivative d (sign-flipped by the caller for
// the negative polarity).
inline std::vector<BlinkEvent> find_pulses(std::span<const double> x, std::span<const double> d, double thr,
                                           double fs, const BlinkConfig& cfg) {
  constexpr std::size_t level_count = 10;
  const std::size_t n = x.size();
  const auto max_len = static_cast<std::size_t>(cfg.blink_max_duration_s * fs);
  std::vector<BlinkEvent> out;
  std::size_t i = 0;
  while (i < n) {
    if (d[i] < thr) {
      ++i;
      continue;
    }
    const std::size_t rise = i;
    std::size_t j = i;
    while (j < n && d[j] >= thr) ++j;
    const std::size_t limit = std::min(n, rise + max_len);
    std::size_t fall = j;
    while (fall < limit && d[fall] > -thr) ++fall;
    if (fall < limit) {
      std::size_t s = rise;
      while (s > 0 && d[s - 1] > 0.0) --s;
      s = s > cfg.lag_n ? s - cfg.lag_n : 0;
      std::size_t e = fall;
      while (e < n && d[e] <= -thr) ++e;
      while (e < n - 1 && d[e] < 0.0) ++e;
      e = std::min(e, n - 1);

      const double pre = level_before(x, s, level_count);
      const double post = level_after(x, e, level_count);
      const auto top = std::max_element(x.begin() + static_cast<std::ptrdiff_t>(s),
                                        x.begin() + static_cast<std::ptrdiff_t>(e) + 1);
      const double excursion = *top - pre;
      const auto peak = static_cast<std::size_t>(top - x.begin());
      const bool short_enough = static_cast<double>(e - s) / fs <= cfg.blink_max_duration_s;
      if (short_enough && excursion > 0.0 && std::abs(post - pre) <= cfg.return_tolerance_frac * excursion &&
          s < peak && peak < e) {
        out.push_back({s, e, peak});
        i = e + 1;
        continue;
      }
    }
    i = j;
  }
  return out;
}

}  // namespace detail

// Blink = positive derivative surge followed within blink_max_duration_s by a
// negative one, with the signal returning near its pre-pulse level.
inline std::vector<BlinkEvent> detect_blinks(const SampledSignal& raw, const BlinkConfig& cfg = {}) {
  cfg.validate();
  if (raw.size() <= cfg.lag_n) return {};
  const SampledSignal deriv = differentiate(raw, cfg.lag_n);
  const double thr = cfg.k_blink * stats(deriv).std_dev;
  if (!(thr > 0.0)) return {};

  auto events = detail::find_pulses(raw.samples(), deriv.samples(), thr, raw.fs_hz(), cfg);
  if (cfg.bipolar) {
    std::vector<double> xn(raw.size()), dn(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
      xn[k] = -raw[k];
      dn[k] = -deriv[k];
    }
    auto negative = detail::find_pulses(xn, dn, thr, raw.fs_hz(), cfg);
    std::vector<BlinkEvent> merged;
    std::merge(events.begin(), events.end(), negative.begin(), negative.end(), std::back_inserter(merged),
               [](const BlinkEvent& a, const BlinkEvent& b) { return a.start_idx < b.start_idx; });
    events.clear();
    for (const auto& ev : merged) {
      if (events.empty() || ev.start_idx > events.back().end_idx) events.push_back(ev);
    }
  }
  return events;
}

// Linear interpolation across each [start, end]; samples outside are untouched.
inline SampledSignal remove_blinks(const SampledSignal& raw, const std::vector<BlinkEvent>& blinks) {
  for (std::size_t i = 0; i < blinks.size(); ++i) {
    const auto& b = blinks[i];
    if (b.start_idx > b.end_idx || b.end_idx >= raw.size()) {
      throw std::invalid_argument("blink " + std::to_string(i) + " is out of range");
    }
    if (i > 0 && blinks[i - 1].end_idx >= b.start_idx) {
      throw std::invalid_argument("blinks " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                  " overlap or are unsorted");
    }
  }
  std::vector<double> out = raw.values();
  for (const auto& b : blinks) {
    const double a = raw[b.start_idx];
    const double z = raw[b.end_idx];
    const double len = static_cast<double>(b.end_idx - b.start_idx);
    for (std::size_t k = b.start_idx + 1; k < b.end_idx; ++k) {
      out[k] = a + (z - a) * static_cast<double>(k - b.start_idx) / len;
    }
  }
  return raw.with_samples(std::move(out));
}

}  // namespace fgd
