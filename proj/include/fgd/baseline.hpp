#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/saccade.hpp"
#include "fgd/signal.hpp"

namespace fgd {

struct FloatingSegment {
  std::size_t seg_start_idx = 0;  // end of the saccade that opens the segment
  std::size_t seg_end_idx = 0;    // start of the next saccade, or the last sample
  double delta = 0.0;

  friend bool operator==(const FloatingSegment&, const FloatingSegment&) = default;
};

enum class GapFill { linear, zero };

inline const char* to_string(GapFill g) { return g == GapFill::linear ? "linear" : "zero"; }

inline GapFill parse_gap_fill(const std::string& s) {
  if (s == "linear") return GapFill::linear;
  if (s == "zero") return GapFill::zero;
  throw std::invalid_argument("unknown gap fill '" + s + "' (expected linear or zero)");
}

struct ReconstructConfig {
  std::size_t m_samples = 15;
  double calibration_s = 5.0;  // metadata only; the first delta already anchors to raw
  GapFill gap_fill = GapFill::linear;

  void validate() const {
    if (m_samples < 1) throw std::invalid_argument("reconstruct config: m_samples must be >= 1");
    if (!(calibration_s >= 0.0)) throw std::invalid_argument("reconstruct config: calibration_s must be >= 0");
  }
};

struct DeltaResult {
  double delta = 0.0;
  bool degenerate = false;  // fewer than m samples were available on a side
};

inline std::vector<FloatingSegment> segment(const std::vector<SaccadeEvent>& events, std::size_t signal_len) {
  validate_events(events, signal_len);
  std::vector<FloatingSegment> segs;
  segs.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::size_t end = i + 1 < events.size() ? events[i + 1].start_idx : signal_len - 1;
    segs.push_back({events[i].end_idx, std::min(end, signal_len - 1), 0.0});
  }
  return segs;
}

namespace detail {

// Mean of x[at - k], k = 0..m-1, restricted to indices >= lo.
inline double mean_back(const SampledSignal& x, std::size_t at, std::size_t lo, std::size_t m, bool& short_side) {
  const std::size_t avail = at - lo + 1;
  const std::size_t count = std::min(m, avail);
  short_side = short_side || count < m;
  return mean_of(x.samples().subspan(at + 1 - count, count));
}

// Mean of x[at + k], k = 0..m-1, restricted to indices <= hi.
inline double mean_forward(const SampledSignal& x, std::size_t at, std::size_t hi, std::size_t m,
                           bool& short_side) {
  const std::size_t avail = hi - at + 1;
  const std::size_t count = std::min(m, avail);
  short_side = short_side || count < m;
  return mean_of(x.samples().subspan(at, count));
}

}  // namespace detail

// First re-leveling offset, both means taken on the original signal.
// seg_end bounds the post-saccade window (defaults to the last sample).
inline DeltaResult compute_delta_first(const SampledSignal& raw, const SaccadeEvent& ev1,
                                       const ReconstructConfig& cfg, std::size_t seg_end = SIZE_MAX) {
  cfg.validate();
  seg_end = std::min(seg_end, raw.size() - 1);
  if (ev1.start_idx > ev1.end_idx || ev1.end_idx > seg_end) throw std::invalid_argument("saccade event out of range");
  DeltaResult r;
  const double pre = detail::mean_back(raw, ev1.start_idx, 0, cfg.m_samples, r.degenerate);
  const double post = detail::mean_forward(raw, ev1.end_idx, seg_end, cfg.m_samples, r.degenerate);
  r.delta = pre - post;
  return r;
}

// Later offsets: pre-saccade mean on the already adjusted previous segment
// (indices >= prev_seg_start), post-saccade mean on the floating signal.
inline DeltaResult compute_delta_next(const SampledSignal& prev_adjusted, const SampledSignal& floating,
                                      const SaccadeEvent& ev_i, const ReconstructConfig& cfg,
                                      std::size_t prev_seg_start = 0, std::size_t seg_end = SIZE_MAX) {
  cfg.validate();
  require_same_grid(prev_adjusted, floating, "compute_delta_next");
  seg_end = std::min(seg_end, floating.size() - 1);
  if (ev_i.start_idx > ev_i.end_idx || ev_i.end_idx > seg_end || prev_seg_start > ev_i.start_idx) {
    throw std::invalid_argument("saccade event out of range");
  }
  DeltaResult r;
  const double pre = detail::mean_back(prev_adjusted, ev_i.start_idx, prev_seg_start, cfg.m_samples, r.degenerate);
  const double post = detail::mean_forward(floating, ev_i.end_idx, seg_end, cfg.m_samples, r.degenerate);
  r.delta = pre - post;
  return r;
}

struct Reconstruction {
  SampledSignal baseline;
  std::vector<FloatingSegment> segments;
  std::vector<std::string> warnings;
};

// Continuous saccade-free baseline: every floating segment shifted by its
// delta, saccade windows bridged (or zeroed, per cfg.gap_fill).
inline Reconstruction reconstruct(const SampledSignal& raw, const SampledSignal& saccade_excluded,
                                  const std::vector<SaccadeEvent>& events, const ReconstructConfig& cfg = {}) {
  cfg.validate();
  require_same_grid(raw, saccade_excluded, "reconstruct");
  auto segs = segment(events, raw.size());
  std::vector<std::string> warnings;
  std::vector<double> b = saccade_excluded.values();

  for (std::size_t i = 0; i < segs.size(); ++i) {
    const SaccadeEvent& ev = events[i];
    DeltaResult d;
    if (i == 0) {
      d = compute_delta_first(raw, ev, cfg, segs[i].seg_end_idx);
    } else {
      d = compute_delta_next(SampledSignal(raw.fs_hz(), b, raw.t0_s()), raw, ev, cfg, segs[i - 1].seg_start_idx,
                             segs[i].seg_end_idx);
    }
    if (d.degenerate) {
      warnings.push_back("saccade " + std::to_string(i) + ": fewer than " + std::to_string(cfg.m_samples) +
                         " samples available for a boundary mean");
    }
    segs[i].delta = d.delta;
    for (std::size_t k = segs[i].seg_start_idx; k <= segs[i].seg_end_idx; ++k) b[k] = raw[k] + d.delta;

    // Zero fill keeps the excluded signal's zeros inside the window as is.
    if (cfg.gap_fill == GapFill::linear) {
      const std::size_t s = ev.start_idx;
      const std::size_t e = ev.end_idx;
      if (i == 0) b[s] = raw[s];
      for (std::size_t k = s + 1; k < e; ++k) {
        b[k] = b[s] + (b[e] - b[s]) * static_cast<double>(k - s) / static_cast<double>(e - s);
      }
    }
  }
  return {raw.with_samples(std::move(b)), std::move(segs), std::move(warnings)};
}

}  // namespace fgd
