#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fgd {

// Uniformly sampled scalar time series. Immutable once constructed; every
// derived series (derivative, baseline, trend, prediction) shares the
// sampling grid of the signal it came from.
class SampledSignal {
 public:
  SampledSignal(double fs_hz, std::vector<double> samples, double t0_s = 0.0)
      : fs_hz_(fs_hz), t0_s_(t0_s), samples_(std::move(samples)) {
    if (!(fs_hz_ > 0.0) || !std::isfinite(fs_hz_)) {
      throw std::invalid_argument("sampling rate must be positive and finite");
    }
    if (!std::isfinite(t0_s_)) throw std::invalid_argument("start time must be finite");
    if (samples_.empty()) throw std::invalid_argument("signal must contain at least one sample");
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      if (!std::isfinite(samples_[k])) {
        throw std::invalid_argument("non-finite sample at index " + std::to_string(k));
      }
    }
  }

  double fs_hz() const noexcept { return fs_hz_; }
  double t0_s() const noexcept { return t0_s_; }
  double dt() const noexcept { return 1.0 / fs_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / fs_hz_; }

  double operator[](std::size_t k) const { return samples_[k]; }
  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }

  double time_at(std::size_t k) const noexcept {
    return t0_s_ + static_cast<double>(k) / fs_hz_;
  }

  // Same grid, new values.
  SampledSignal with_samples(std::vector<double> samples) const {
    return SampledSignal(fs_hz_, std::move(samples), t0_s_);
  }

  bool same_grid(const SampledSignal& other) const noexcept {
    return other.size() == size() && other.fs_hz_ == fs_hz_;
  }

  friend bool operator==(const SampledSignal&, const SampledSignal&) = default;

 private:
  double fs_hz_;
  double t0_s_;
  std::vector<double> samples_;
};

struct SignalStats {
  double mean = 0.0;
  double std_dev = 0.0;  // population (1/n)
  double min = 0.0;
  double max = 0.0;
};

inline SignalStats stats(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("stats of an empty sequence");
  const double n = static_cast<double>(x.size());
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  // Rounding can put the mean a hair outside [min, max] for constant input.
  const double mean = std::clamp(std::accumulate(x.begin(), x.end(), 0.0) / n, *lo, *hi);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / n), *lo, *hi};
}

inline SignalStats stats(const SampledSignal& signal) { return stats(signal.samples()); }

inline double mean_of(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of an empty sequence");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

inline void require_same_grid(const SampledSignal& a, const SampledSignal& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  if (a.fs_hz() != b.fs_hz()) {
    throw std::invalid_argument(std::string(what) + ": sampling rate mismatch");
  }
}

// Pointwise a - b on a shared grid.
inline SampledSignal subtract(const SampledSignal& a, const SampledSignal& b, const char* what = "subtract") {
  require_same_grid(a, b, what);
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
  return a.with_samples(std::move(out));
}

// Lagged backward difference, (x[k] - x[k-lag]) / (lag * dt). The first
// lag_n outputs are zero so indices stay aligned with the input.
inline SampledSignal differentiate(const SampledSignal& signal, std::size_t lag_n = 3) {
  if (lag_n == 0) throw std::invalid_argument("lag must be positive");
  if (lag_n >= signal.size()) {
    throw std::invalid_argument("lag " + std::to_string(lag_n) + " must be shorter than the signal (" +
                                std::to_string(signal.size()) + " samples)");
  }
  const double span_s = static_cast<double>(lag_n) / signal.fs_hz();
  std::vector<double> out(signal.size(), 0.0);
  for (std::size_t k = lag_n; k < out.size(); ++k) out[k] = (signal[k] - signal[k - lag_n]) / span_s;
  return signal.with_samples(std::move(out));
}

}  // namespace fgd
