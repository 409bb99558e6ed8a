#pragma once

#include <string>
#include <vector>

#include "fgd/baseline.hpp"
#include "fgd/saccade.hpp"
#include "fgd/signal.hpp"
#include "fgd/wavelet.hpp"

namespace fgd {

struct FgdConfig {
  DetectConfig detect;
  ReconstructConfig reconstruct;
  int wavelet_level = 7;
  WaveletFamily family = WaveletFamily::db4;
  BoundaryMode mode = BoundaryMode::symmetric;
};

// E'(t) = E(t) - trend(t).
inline SampledSignal dedrift(const SampledSignal& signal, const SampledSignal& trend) {
  return subtract(signal, trend, "dedrift");
}

struct FgdResult {
  SampledSignal dedrifted;
  SampledSignal trend;
  std::vector<SaccadeEvent> events;
  SampledSignal baseline;
  SampledSignal saccadic;
  std::vector<FloatingSegment> segments;
  std::vector<std::string> warnings;
};

// raw is expected to be blink-free already.
inline FgdResult fgd_pipeline(const SampledSignal& raw, const FgdConfig& cfg = {}) {
  const SampledSignal deriv = differentiate(raw, cfg.detect.lag_n);
  std::vector<SaccadeEvent> events = detect_saccades(deriv, cfg.detect);
  SampledSignal saccadic = extract_saccades(raw, events);
  const SampledSignal excluded = exclude_saccades(raw, saccadic);
  Reconstruction rec = reconstruct(raw, excluded, events, cfg.reconstruct);
  const WaveletDecomposition dec = dwt_multilevel(rec.baseline, cfg.wavelet_level, cfg.family, cfg.mode);
  SampledSignal trend = approx_trend(dec, raw.size());
  SampledSignal dedrifted = dedrift(raw, trend);
  return {std::move(dedrifted), std::move(trend),        std::move(events),       std::move(rec.baseline),
          std::move(saccadic),  std::move(rec.segments), std::move(rec.warnings)};
}

}  // namespace fgd
