#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgd/signal.hpp"

namespace fgd {

enum class WaveletFamily { haar, db4, db8 };
enum class BoundaryMode { symmetric, periodic, zero };

inline const char* to_string(WaveletFamily f) {
  switch (f) {
    case WaveletFamily::haar: return "haar";
    case WaveletFamily::db4: return "db4";
    case WaveletFamily::db8: return "db8";
  }
  return "?";
}

inline const char* to_string(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::symmetric: return "symmetric";
    case BoundaryMode::periodic: return "periodic";
    case BoundaryMode::zero: return "zero";
  }
  return "?";
}

inline WaveletFamily parse_wavelet_family(const std::string& s) {
  if (s == "haar" || s == "db1") return WaveletFamily::haar;
  if (s == "db4") return WaveletFamily::db4;
  if (s == "db8") return WaveletFamily::db8;
  throw std::invalid_argument("unknown wavelet family '" + s + "' (expected haar, db4 or db8)");
}

inline BoundaryMode parse_boundary_mode(const std::string& s) {
  if (s == "symmetric") return BoundaryMode::symmetric;
  if (s == "periodic") return BoundaryMode::periodic;
  if (s == "zero") return BoundaryMode::zero;
  throw std::invalid_argument("unknown boundary mode '" + s + "' (expected symmetric, periodic or zero)");
}

// Orthonormal analysis/synthesis filters, tap order as in PyWavelets.
struct FilterBank {
  std::vector<double> dec_lo, dec_hi, rec_lo, rec_hi;

  std::size_t length() const noexcept { return dec_lo.size(); }
};

namespace detail {

inline constexpr std::array<double, 8> db4_dec_lo = {
    -0.010597401785069032, 0.0328830116668852,   0.030841381835560764, -0.18703481171909309,
    -0.027983769416859854, 0.6308807679298589,   0.7148465705529157,   0.2303778133088965};

inline constexpr std::array<double, 16> db8_dec_lo = {
    -0.00011747678412476953, 0.0006754494064505693, -0.00039174037337694705, -0.004870352993451574,
    0.008746094047405777,    0.013981027917398282,  -0.044088253930794755,   -0.017369301001807547,
    0.12874742662047847,     0.0004724845739132828, -0.2840155429615469,     -0.015829105256349306,
    0.5853546836542067,      0.6756307362972898,    0.31287159091429995,     0.05441584224310401};

inline FilterBank bank_from_lowpass(std::vector<double> lo) {
  const std::size_t f = lo.size();
  FilterBank fb;
  fb.dec_hi.resize(f);
  for (std::size_t k = 0; k < f; ++k) {
    const double v = lo[f - 1 - k];
    fb.dec_hi[k] = (k % 2 == 0) ? -v : v;
  }
  fb.rec_lo.assign(lo.rbegin(), lo.rend());
  fb.rec_hi.assign(fb.dec_hi.rbegin(), fb.dec_hi.rend());
  fb.dec_lo = std::move(lo);
  return fb;
}

}  // namespace detail

inline FilterBank filter_bank(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::haar: {
      const double h = 1.0 / std::sqrt(2.0);
      return detail::bank_from_lowpass({h, h});
    }
    case WaveletFamily::db4:
      return detail::bank_from_lowpass({detail::db4_dec_lo.begin(), detail::db4_dec_lo.end()});
    case WaveletFamily::db8:
      return detail::bank_from_lowpass({detail::db8_dec_lo.begin(), detail::db8_dec_lo.end()});
  }
  throw std::invalid_argument("unknown wavelet family");
}

inline std::size_t filter_length(WaveletFamily family) { return filter_bank(family).length(); }

// Deepest level at which every stage still sees at least filter_len - 1 samples.
inline int max_level(std::size_t signal_len, std::size_t filter_len) {
  if (filter_len < 2 || signal_len < filter_len - 1) return 0;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(signal_len) / static_cast<double>(filter_len - 1))));
}

// Upper edge of the approximation band after `level` halvings.
inline double approx_band_upper_hz(double fs_hz, int level) { return fs_hz / std::pow(2.0, level + 1); }

struct WaveletDecomposition {
  int level = 0;
  std::vector<double> approx;                // A_level
  std::vector<std::vector<double>> details;  // details[0] = D_1 ... details[level-1] = D_level
  WaveletFamily family = WaveletFamily::db4;
  BoundaryMode mode = BoundaryMode::symmetric;
  std::vector<std::size_t> signal_lengths;   // input length at each stage, [0] = original
  double fs_hz = 1.0;
  double t0_s = 0.0;

  std::size_t original_length() const { return signal_lengths.empty() ? 0 : signal_lengths.front(); }
};

namespace detail {

inline double extended(std::span<const double> x, std::ptrdiff_t idx, BoundaryMode mode) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  if (idx >= 0 && idx < n) return x[static_cast<std::size_t>(idx)];
  switch (mode) {
    case BoundaryMode::zero:
      return 0.0;
    case BoundaryMode::periodic: {
      std::ptrdiff_t r = idx % n;
      if (r < 0) r += n;
      return x[static_cast<std::size_t>(r)];
    }
    case BoundaryMode::symmetric: {
      std::ptrdiff_t r = idx % (2 * n);
      if (r < 0) r += 2 * n;
      if (r >= n) r = 2 * n - 1 - r;
      return x[static_cast<std::size_t>(r)];
    }
  }
  return 0.0;
}

// One analysis stage: filter with the extended input, keep odd positions.
inline void analysis_step(std::span<const double> x, const FilterBank& fb, BoundaryMode mode,
                          std::vector<double>& ca, std::vector<double>& cd) {
  const std::size_t f = fb.length();
  const std::size_t out_len = (x.size() + f - 1) / 2;
  ca.assign(out_len, 0.0);
  cd.assign(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const auto centre = static_cast<std::ptrdiff_t>(2 * i + 1);
    double a = 0.0;
    double d = 0.0;
    for (std::size_t k = 0; k < f; ++k) {
      const double v = extended(x, centre - static_cast<std::ptrdiff_t>(k), mode);
      a += fb.dec_lo[k] * v;
      d += fb.dec_hi[k] * v;
    }
    ca[i] = a;
    cd[i] = d;
  }
}

// One synthesis stage, "valid" part of the upsampled convolution; the result
// is trimmed to out_len.
inline std::vector<double> synthesis_step(std::span<const double> ca, std::span<const double> cd,
                                          const FilterBank& fb, std::size_t out_len) {
  const std::size_t f = fb.length();
  const std::size_t half = f / 2;
  const std::size_t len = ca.size();
  if (cd.size() != len) throw std::invalid_argument("coefficient length mismatch");
  std::vector<double> out(2 * len + 2 - f, 0.0);
  for (std::size_t i = half - 1; i < len; ++i) {
    const std::size_t o = 2 * (i + 1 - half);
    double even = 0.0;
    double odd = 0.0;
    for (std::size_t j = 0; j < half; ++j) {
      even += fb.rec_lo[2 * j] * ca[i - j] + fb.rec_hi[2 * j] * cd[i - j];
      odd += fb.rec_lo[2 * j + 1] * ca[i - j] + fb.rec_hi[2 * j + 1] * cd[i - j];
    }
    out[o] = even;
    out[o + 1] = odd;
  }
  if (out.size() < out_len) throw std::logic_error("synthesis produced too few samples");
  out.resize(out_len);
  return out;
}

}  // namespace detail

inline WaveletDecomposition dwt_multilevel(const SampledSignal& signal, int level,
                                           WaveletFamily family = WaveletFamily::db4,
                                           BoundaryMode mode = BoundaryMode::symmetric) {
  const FilterBank fb = filter_bank(family);
  const int max_lev = max_level(signal.size(), fb.length());
  if (level < 1 || level > max_lev) {
    throw std::invalid_argument("wavelet level " + std::to_string(level) + " is infeasible for " +
                                std::to_string(signal.size()) + " samples with " + to_string(family) +
                                "; max feasible level is " + std::to_string(max_lev));
  }
  WaveletDecomposition dec;
  dec.level = level;
  dec.family = family;
  dec.mode = mode;
  dec.fs_hz = signal.fs_hz();
  dec.t0_s = signal.t0_s();
  std::vector<double> current = signal.values();
  for (int j = 0; j < level; ++j) {
    dec.signal_lengths.push_back(current.size());
    std::vector<double> ca, cd;
    detail::analysis_step(current, fb, mode, ca, cd);
    dec.details.push_back(std::move(cd));
    current = std::move(ca);
  }
  dec.approx = std::move(current);
  return dec;
}

// Inverse transform of arbitrary coefficients sharing decomp's layout.
inline std::vector<double> waverec(const WaveletDecomposition& decomp) {
  if (decomp.level < 1 || decomp.details.size() != static_cast<std::size_t>(decomp.level) ||
      decomp.signal_lengths.size() != decomp.details.size()) {
    throw std::invalid_argument("malformed wavelet decomposition");
  }
  const FilterBank fb = filter_bank(decomp.family);
  std::vector<double> current = decomp.approx;
  for (int j = decomp.level - 1; j >= 0; --j) {
    const auto& cd = decomp.details[static_cast<std::size_t>(j)];
    current = detail::synthesis_step(current, cd, fb, decomp.signal_lengths[static_cast<std::size_t>(j)]);
  }
  return current;
}

namespace detail {

inline std::vector<double> fit_length(std::vector<double> x, std::size_t n) {
  x.resize(n, x.empty() ? 0.0 : x.back());
  return x;
}

}  // namespace detail

// Reconstruction from A_level alone: the drift trend.
inline SampledSignal approx_trend(const WaveletDecomposition& decomp, std::size_t original_len) {
  WaveletDecomposition only_a = decomp;
  for (auto& d : only_a.details) std::fill(d.begin(), d.end(), 0.0);
  return SampledSignal(decomp.fs_hz, detail::fit_length(waverec(only_a), original_len), decomp.t0_s);
}

// Reconstruction from D_j alone, j in 1..level.
inline SampledSignal detail_component(const WaveletDecomposition& decomp, int j) {
  if (j < 1 || j > decomp.level) throw std::invalid_argument("detail index out of range");
  WaveletDecomposition only_d = decomp;
  std::fill(only_d.approx.begin(), only_d.approx.end(), 0.0);
  for (int k = 1; k <= decomp.level; ++k) {
    if (k != j) {
      auto& d = only_d.details[static_cast<std::size_t>(k - 1)];
      std::fill(d.begin(), d.end(), 0.0);
    }
  }
  return SampledSignal(decomp.fs_hz, detail::fit_length(waverec(only_d), decomp.original_length()), decomp.t0_s);
}

}  // namespace fgd
