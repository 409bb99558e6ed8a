#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fgd/error.hpp"
#include "fgd/methods.hpp"

using fgd::SampledSignal;

namespace {

const double kPi = std::acos(-1.0);

std::vector<double> probe32() {
  std::vector<double> x(32);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::sin(static_cast<double>(k)) + 0.1 * static_cast<double>(k);
  return x;
}

std::vector<double> sine(std::size_t n, double f, double fs) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = std::sin(2 * kPi * f * static_cast<double>(k) / fs);
  return x;
}

double rms_range(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t k = lo; k < hi; ++k) s += x[k] * x[k];
  return std::sqrt(s / static_cast<double>(hi - lo));
}

// Gaussian elimination with partial pivoting on a small dense system.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

TEST(Butterworth, MatchesScipyDesign) {
  const auto t1 = fgd::butterworth_highpass(2, 0.3, 250.0);
  const std::vector<double> b1{0.9946827273808361, -1.9893654547616721, 0.9946827273808361};
  const std::vector<double> a1{1.0, -1.9893371811737164, 0.9893937283496272};
  const auto t2 = fgd::butterworth_highpass(4, 1.0, 250.0);
  const std::vector<double> b2{0.9676948088896717, -3.870779235558687, 5.806168853338031, -3.870779235558687,
                               0.9676948088896717};
  const std::vector<double> a2{1.0, -3.9343258207987377, 5.80512542105514, -3.807232457228852, 0.936433243152019};
  ASSERT_EQ(t1.b.size(), 3u);
  ASSERT_EQ(t2.a.size(), 5u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(t1.b[k], b1[k], 1e-12);
    EXPECT_NEAR(t1.a[k], a1[k], 1e-12);
  }
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(t2.b[k], b2[k], 1e-10);
    EXPECT_NEAR(t2.a[k], a2[k], 1e-10);
  }
}

TEST(Butterworth, RejectsBadCutoff) {
  EXPECT_THROW(fgd::butterworth_highpass(2, 0.0, 250.0), std::invalid_argument);
  EXPECT_THROW(fgd::butterworth_highpass(2, 125.0, 250.0), std::invalid_argument);
  EXPECT_THROW(fgd::butterworth_highpass(0, 1.0, 250.0), std::invalid_argument);
}

TEST(Lfilter, MatchesScipy) {
  const auto tf = fgd::butterworth_highpass(2, 10.0, 250.0);
  const auto zi = fgd::lfilter_zi(tf);
  ASSERT_EQ(zi.size(), 2u);
  EXPECT_NEAR(zi[0], -0.8370891905663457, 1e-12);
  EXPECT_NEAR(zi[1], 0.8370891905663455, 1e-12);
  const auto x = probe32();
  const auto y = fgd::lfilter(tf, std::span<const double>(x.data(), 8));
  const std::vector<double> want{0.0, 0.7880951846145416, 0.6507457938216852, -0.1801055201246991,
                                 -0.8614304768874412, -0.7104895929632784, 0.17127408543876438, 0.9951896920120665};
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(y[k], want[k], 1e-12) << k;
}

TEST(Filtfilt, MatchesScipy) {
  const auto x = probe32();
  const auto y = fgd::filtfilt(fgd::butterworth_highpass(2, 10.0, 250.0), x);
  const std::vector<double> want{
      0.04003130967721258,  0.8676397299209803,   0.9256904031717605,   0.1518917296798721,  -0.7497023214319327,
      -0.9561396149822899,  -0.28238282792983366, 0.6483470745039797,   0.9773297145709666,  0.39963049195989014,
      -0.5557403614610618,  -1.0123613441514436,  -0.5523001646372873,  0.3995682077536996,  0.9661739845720012,
      0.6246759745728203,   -0.3127182478525685,  -0.9855917498956259,  -0.7760916210076265, 0.12340226267711896,
      0.8876275489687425,   0.8177518140532145,   -0.015469463955080531, -0.8360226227131533, -0.8753367811035319,
      -0.07814417723200323, 0.8474056311922922,   1.0813731393591528,   0.4461925249991384,  -0.4301299927155662,
      -0.6919797233618522,  -0.04406014359180434};
  ASSERT_EQ(y.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(y[k], want[k], 1e-12) << k;
}

TEST(Filtfilt, TooShortThrows) {
  const auto tf = fgd::butterworth_highpass(2, 1.0, 250.0);
  EXPECT_THROW(fgd::filtfilt(tf, std::vector<double>(9, 0.0)), std::invalid_argument);
  EXPECT_NO_THROW(fgd::filtfilt(tf, std::vector<double>(10, 0.0)));
}

TEST(Highpass, DcRemovedFastKeptSlowAttenuated) {
  const double fs = 250.0;
  const std::size_t n = 9250;
  const auto dc = fgd::highpass_detrend(SampledSignal(fs, std::vector<double>(n, 3.0)));
  for (double v : dc.dedrifted.values()) EXPECT_NEAR(v, 0.0, 1e-9);

  const auto fast = sine(n, 5.0, fs);
  const auto out = fgd::highpass_detrend(SampledSignal(fs, fast)).dedrifted.values();
  // scipy.signal.filtfilt with butter(2, 0.3 / 125, 'highpass'), including edge transients
  EXPECT_NEAR(out[0], 0.4216123180704302, 1e-9);
  EXPECT_NEAR(out[1000], 0.0013031136343171212, 1e-9);
  EXPECT_NEAR(out[8000], -0.0004029982878480526, 1e-9);
  EXPECT_NEAR(out[9249], -0.7578126826325132, 1e-9);
  for (std::size_t k = 2000; k < n - 2000; ++k) EXPECT_NEAR(out[k], fast[k], 1e-4);

  const auto slow = sine(n, 0.05, fs);
  const auto so = fgd::highpass_detrend(SampledSignal(fs, slow)).dedrifted.values();
  // |H|^2 for a 2nd-order Butterworth applied twice: (f/fc)^8 / (1 + (f/fc)^4)
  const double r = 0.05 / 0.3;
  const double gain = std::pow(r, 4) / (1.0 + std::pow(r, 4));
  EXPECT_NEAR(rms_range(so, 2000, n - 2000) / rms_range(slow, 2000, n - 2000), gain, 0.02 * gain + 1e-4);
}

TEST(Filtfilt, ZeroPhase) {
  // Away from the edge transients a symmetric pulse stays symmetric and in place.
  const std::size_t c = 2500;
  std::vector<double> x(2 * c + 1, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::exp(-std::pow((static_cast<double>(k) - 2500.0) / 20.0, 2));
  const auto y = fgd::filtfilt(fgd::butterworth_highpass(2, 1.0, 250.0), x);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (y[k] > y[peak]) peak = k;
  }
  EXPECT_EQ(peak, c);
  for (std::size_t k = 1; k <= 500; ++k) EXPECT_NEAR(y[c - k], y[c + k], 1e-9);
}

TEST(Poly, ExactOnQuadratic) {
  std::vector<double> x(300);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double t = static_cast<double>(k) / 250.0;
    x[k] = 0.2 - 1.5 * t + 0.7 * t * t;
  }
  for (int order : {2, 5}) {
    const auto r = fgd::poly_detrend(SampledSignal(250.0, x), order);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(r.trend[k], x[k], 1e-10);
  }
}

TEST(Poly, OrderZeroIsMean) {
  const SampledSignal s(10.0, {1.0, 4.0, 2.0, 9.0});
  const auto r = fgd::poly_detrend(s, 0);
  for (double v : r.trend.values()) EXPECT_NEAR(v, 4.0, 1e-14);
}

TEST(Poly, MatchesNormalEquations) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(200);
  for (auto& v : x) v = n(rng);
  const int order = 3;
  const auto c = fgd::fit_polynomial(SampledSignal(1.0, x), order);
  // normal equations on the same normalized abscissa u in [-1, 1]
  std::vector<std::vector<double>> a(order + 1, std::vector<double>(order + 1, 0.0));
  std::vector<double> b(order + 1, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = -1.0 + 2.0 * static_cast<double>(k) / 199.0;
    for (int i = 0; i <= order; ++i) {
      b[i] += std::pow(u, i) * x[k];
      for (int j = 0; j <= order; ++j) a[i][j] += std::pow(u, i + j);
    }
  }
  const auto want = solve_dense(a, b);
  ASSERT_EQ(c.size(), want.size());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c[i], want[i], 1e-10) << i;
}

TEST(Poly, RankDeficientThrows) {
  EXPECT_THROW(fgd::fit_polynomial(SampledSignal(1.0, {1.0, 2.0, 3.0}), 3), std::invalid_argument);
  // Columns u^k for k near 40 are numerically collinear on 100 points.
  EXPECT_THROW(fgd::fit_polynomial(SampledSignal(1.0, std::vector<double>(100, 1.0)), 40), fgd::numeric_error);
  EXPECT_THROW(fgd::fit_polynomial(SampledSignal(1.0, {1.0, 2.0}), -1), std::invalid_argument);
}

TEST(Methods, DedriftedPlusTrendIsInput) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1e-3);
  std::vector<double> x(3000);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = n(rng) + (k > 1500 ? 0.02 : 0.0) + 1e-5 * static_cast<double>(k);
  const SampledSignal s(250.0, x);
  for (auto id : {fgd::MethodId::fgd, fgd::MethodId::poly, fgd::MethodId::highpass, fgd::MethodId::wavelet}) {
    const auto r = fgd::run_method(id, s);
    EXPECT_EQ(r.method, id);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(r.dedrifted[k] + r.trend[k], x[k], 1e-12) << to_string(id);
  }
}

TEST(Methods, ParseNames) {
  EXPECT_EQ(fgd::parse_method("highpass"), fgd::MethodId::highpass);
  EXPECT_STREQ(fgd::to_string(fgd::MethodId::wavelet), "wavelet");
  EXPECT_THROW(fgd::parse_method("median"), std::invalid_argument);
}
