#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fgd/error.hpp"
#include "fgd/pipeline.hpp"
#include "fgd/signal.hpp"
#include "fgd/wavelet.hpp"

namespace fgd {

enum class MethodId { fgd, poly, highpass, wavelet };

inline const char* to_string(MethodId m) {
  switch (m) {
    case MethodId::fgd: return "fgd";
    case MethodId::poly: return "poly";
    case MethodId::highpass: return "highpass";
    case MethodId::wavelet: return "wavelet";
  }
  return "?";
}

inline MethodId parse_method(const std::string& s) {
  if (s == "fgd") return MethodId::fgd;
  if (s == "poly") return MethodId::poly;
  if (s == "highpass") return MethodId::highpass;
  if (s == "wavelet") return MethodId::wavelet;
  throw std::invalid_argument("unknown method '" + s + "' (expected fgd, poly, highpass or wavelet)");
}

struct MethodResult {
  SampledSignal dedrifted;
  SampledSignal trend;
  MethodId method;
};

// ---- polynomial ----

// Sample positions mapped linearly onto [-1, 1].
inline std::vector<double> normalized_time(std::size_t n) {
  std::vector<double> u(n, 0.0);
  if (n < 2) return u;
  for (std::size_t k = 0; k < n; ++k) u[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(n - 1);
  return u;
}

// Least-squares coefficients c[0..order] of sum c_i u^i, u in [-1, 1].
inline std::vector<double> fit_polynomial(const SampledSignal& signal, int order) {
  if (order < 0) throw std::invalid_argument("polynomial order must be >= 0");
  const auto cols = static_cast<std::size_t>(order) + 1;
  if (signal.size() <= static_cast<std::size_t>(order)) {
    throw std::invalid_argument("polynomial order " + std::to_string(order) + " needs more than " +
                                std::to_string(order) + " samples");
  }
  const std::vector<double> u = normalized_time(signal.size());
  const auto n = static_cast<Eigen::Index>(signal.size());
  Eigen::MatrixXd a(n, static_cast<Eigen::Index>(cols));
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    double p = 1.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      a(r, c) = p;
      p *= u[static_cast<std::size_t>(r)];
    }
    y(r) = signal[static_cast<std::size_t>(r)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols()) throw numeric_error("polynomial fit is rank deficient");
  const Eigen::VectorXd c = qr.solve(y);
  return {c.data(), c.data() + c.size()};
}

inline double eval_polynomial(std::span<const double> coeffs, double u) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * u + coeffs[i];
  return acc;
}

inline MethodResult poly_detrend(const SampledSignal& signal, int order = 5) {
  const std::vector<double> c = fit_polynomial(signal, order);
  const std::vector<double> u = normalized_time(signal.size());
  std::vector<double> trend(signal.size());
  for (std::size_t k = 0; k < trend.size(); ++k) trend[k] = eval_polynomial(c, u[k]);
  SampledSignal t = signal.with_samples(std::move(trend));
  return {subtract(signal, t), std::move(t), MethodId::poly};
}

// ---- Butterworth high-pass ----

struct TransferFunction {
  std::vector<double> b;
  std::vector<double> a;
};

namespace detail {

inline std::vector<double> real_poly(const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& r : roots) {
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
  }
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

}  // namespace detail

// Digital Butterworth high-pass via analog prototype, high-pass transform
// and bilinear mapping with frequency prewarping.
inline TransferFunction butterworth_highpass(int order, double cutoff_hz, double fs_hz) {
  using cd = std::complex<double>;
  if (order < 1) throw std::invalid_argument("filter order must be >= 1");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs_hz / 2.0)) {
    throw std::invalid_argument("cutoff must lie strictly between 0 and fs/2 (" + std::to_string(fs_hz / 2.0) +
                                " Hz)");
  }
  const double wn = cutoff_hz / (fs_hz / 2.0);
  const double fs2 = 4.0;  // 2 * fs for the normalized rate fs = 2
  const double warped = fs2 * std::tan(std::numbers::pi * wn / 2.0);

  std::vector<cd> poles;
  for (int m = -order + 1; m < order; m += 2) {
    poles.push_back(-std::exp(cd(0.0, std::numbers::pi * m / (2.0 * order))));
  }
  cd prod_neg_p = 1.0;
  for (const auto& p : poles) prod_neg_p *= -p;
  double gain = 1.0 / prod_neg_p.real();
  std::vector<cd> zeros(poles.size(), cd(0.0));
  for (auto& p : poles) p = warped / p;

  cd num = 1.0;
  cd den = 1.0;
  for (auto& z : zeros) {
    num *= fs2 - z;
    z = (fs2 + z) / (fs2 - z);
  }
  for (auto& p : poles) {
    den *= fs2 - p;
    p = (fs2 + p) / (fs2 - p);
  }
  gain *= (num / den).real();

  TransferFunction tf{detail::real_poly(zeros), detail::real_poly(poles)};
  for (double& v : tf.b) v *= gain;
  return tf;
}

// Steady-state initial conditions of the transposed direct form for a unit step.
inline std::vector<double> lfilter_zi(const TransferFunction& tf) {
  std::vector<double> b = tf.b;
  std::vector<double> a = tf.a;
  if (a.empty() || a[0] == 0.0) throw std::invalid_argument("leading denominator coefficient must be nonzero");
  const std::size_t n = std::max(a.size(), b.size());
  b.resize(n, 0.0);
  a.resize(n, 0.0);
  const double a0 = a[0];
  for (auto& v : a) v /= a0;
  for (auto& v : b) v /= a0;
  const auto m = static_cast<Eigen::Index>(n - 1);
  if (m == 0) return {};
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lhs(i, 0) += a[static_cast<std::size_t>(i) + 1];  // minus the transposed companion matrix
    if (i + 1 < m) lhs(i, i + 1) -= 1.0;
    rhs(i) = b[static_cast<std::size_t>(i) + 1] - a[static_cast<std::size_t>(i) + 1] * b[0];
  }
  const Eigen::VectorXd zi = lhs.partialPivLu().solve(rhs);
  return {zi.data(), zi.data() + zi.size()};
}

// Direct form II transposed; zi has max(len(a), len(b)) - 1 entries or is empty.
inline std::vector<double> lfilter(const TransferFunction& tf, std::span<const double> x,
                                   std::vector<double> zi = {}) {
  std::vector<double> b = tf.b;
  std::vector<double> a = tf.a;
  const std::size_t n = std::max(a.size(), b.size());
  b.resize(n, 0.0);
  a.resize(n, 0.0);
  const double a0 = a[0];
  for (auto& v : a) v /= a0;
  for (auto& v : b) v /= a0;
  if (zi.empty()) zi.assign(n - 1, 0.0);
  if (zi.size() != n - 1) throw std::invalid_argument("filter state has the wrong size");
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double out = b[0] * x[k] + (n > 1 ? zi[0] : 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      zi[i] = b[i + 1] * x[k] - a[i + 1] * out + (i + 2 < n ? zi[i + 1] : 0.0);
    }
    y[k] = out;
  }
  return y;
}

// Forward-backward filtering with odd extension of 3 * max(len(a), len(b))
// samples at each end.
inline std::vector<double> filtfilt(const TransferFunction& tf, std::span<const double> x) {
  const std::size_t pad = 3 * std::max(tf.a.size(), tf.b.size());
  if (x.size() <= pad) {
    throw std::invalid_argument("signal needs more than " + std::to_string(pad) + " samples for zero-phase filtering");
  }
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k > 0; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  const std::vector<double> zi = lfilter_zi(tf);
  auto scaled = [&](double s) {
    std::vector<double> z = zi;
    for (auto& v : z) v *= s;
    return z;
  };
  std::vector<double> y = lfilter(tf, ext, scaled(ext.front()));
  std::reverse(y.begin(), y.end());
  y = lfilter(tf, y, scaled(y.front()));
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

inline MethodResult highpass_detrend(const SampledSignal& signal, double cutoff_hz = 0.3, int order = 2) {
  const TransferFunction tf = butterworth_highpass(order, cutoff_hz, signal.fs_hz());
  SampledSignal out = signal.with_samples(filtfilt(tf, signal.samples()));
  SampledSignal trend = subtract(signal, out);
  return {std::move(out), std::move(trend), MethodId::highpass};
}

// ---- plain wavelet ----

inline MethodResult wavelet_detrend_plain(const SampledSignal& signal, int level = 7,
                                          WaveletFamily family = WaveletFamily::db4,
                                          BoundaryMode mode = BoundaryMode::symmetric) {
  SampledSignal trend = approx_trend(dwt_multilevel(signal, level, family, mode), signal.size());
  return {dedrift(signal, trend), std::move(trend), MethodId::wavelet};
}

struct MethodsConfig {
  int poly_order = 5;
  double cutoff_hz = 0.3;
  int butter_order = 2;
};

inline MethodResult run_method(MethodId id, const SampledSignal& raw, const MethodsConfig& mc = {},
                               const FgdConfig& fc = {}) {
  switch (id) {
    case MethodId::fgd: {
      FgdResult r = fgd_pipeline(raw, fc);
      return {std::move(r.dedrifted), std::move(r.trend), MethodId::fgd};
    }
    case MethodId::poly: return poly_detrend(raw, mc.poly_order);
    case MethodId::highpass: return highpass_detrend(raw, mc.cutoff_hz, mc.butter_order);
    case MethodId::wavelet: return wavelet_detrend_plain(raw, fc.wavelet_level, fc.family, fc.mode);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace fgd
