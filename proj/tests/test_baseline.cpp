#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fgd/baseline.hpp"
#include "fgd/saccade.hpp"

using fgd::FloatingSegment;
using fgd::ReconstructConfig;
using fgd::SaccadeEvent;
using fgd::SampledSignal;

namespace {

// Staircase with ramps inside [start, end] of each event.
std::vector<double> staircase(std::size_t n, const std::vector<SaccadeEvent>& ev, const std::vector<double>& levels) {
  std::vector<double> x(n, levels[0]);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const double a = levels[i];
    const double b = levels[i + 1];
    for (std::size_t k = ev[i].start_idx; k < n; ++k) {
      if (k >= ev[i].end_idx) {
        x[k] = b;
      } else {
        x[k] = a + (b - a) * static_cast<double>(k - ev[i].start_idx) / static_cast<double>(ev[i].end_idx - ev[i].start_idx);
      }
    }
  }
  return x;
}

SampledSignal excluded(const SampledSignal& e, const std::vector<SaccadeEvent>& ev) {
  return fgd::exclude_saccades(e, fgd::extract_saccades(e, ev));
}

double mean_range(const SampledSignal& x, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) s += x[k];
  return s / static_cast<double>(hi - lo + 1);
}

}  // namespace

TEST(Segment, Bounds) {
  EXPECT_TRUE(fgd::segment({}, 500).empty());
  const auto one = fgd::segment({{95, 90, 100, 1}}, 500);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].seg_start_idx, 100u);
  EXPECT_EQ(one[0].seg_end_idx, 499u);
  const auto two = fgd::segment({{95, 90, 100, 1}, {305, 300, 310, -1}}, 500);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].seg_start_idx, 100u);
  EXPECT_EQ(two[0].seg_end_idx, 300u);
  EXPECT_EQ(two[1].seg_start_idx, 310u);
  EXPECT_EQ(two[1].seg_end_idx, 499u);
}

TEST(DeltaFirst, FlatSignalIsZero) {
  const SampledSignal raw(250.0, std::vector<double>(200, 1.7));
  EXPECT_EQ(fgd::compute_delta_first(raw, {100, 95, 110, 1}, {}).delta, 0.0);
}

TEST(DeltaFirst, LevelDifference) {
  const auto x = staircase(200, {{100, 95, 110, 1}}, {2.0, 5.0});
  const auto r = fgd::compute_delta_first(SampledSignal(250.0, x), {100, 95, 110, 1}, {});
  EXPECT_NEAR(r.delta, -3.0, 1e-12);
  EXPECT_FALSE(r.degenerate);
}

TEST(DeltaFirst, WindowIncludesStartSample) {
  // raw[start] differs from the plateau; with m = 1 only raw[start] counts.
  std::vector<double> x(100, 0.0);
  x[40] = 0.25;
  for (std::size_t k = 50; k < 100; ++k) x[k] = 1.0;
  ReconstructConfig cfg;
  cfg.m_samples = 1;
  EXPECT_DOUBLE_EQ(fgd::compute_delta_first(SampledSignal(1.0, x), {45, 40, 50, 1}, cfg).delta, 0.25 - 1.0);
  cfg.m_samples = 2;
  EXPECT_DOUBLE_EQ(fgd::compute_delta_first(SampledSignal(1.0, x), {45, 40, 50, 1}, cfg).delta, 0.125 - 1.0);
}

TEST(DeltaFirst, DegenerateNearEdge) {
  std::vector<double> x(60, 0.0);
  for (std::size_t k = 10; k < 60; ++k) x[k] = 3.0;
  const auto r = fgd::compute_delta_first(SampledSignal(1.0, x), {7, 5, 10, 1}, {});
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.delta, -3.0);  // all six pre samples are 0
}

TEST(DeltaNext, Arithmetic) {
  std::vector<double> adj(300, 1.0);
  std::vector<double> flo(300, 4.0);
  const auto r = fgd::compute_delta_next(SampledSignal(1.0, adj), SampledSignal(1.0, flo), {150, 140, 160, 1}, {});
  EXPECT_DOUBLE_EQ(r.delta, -3.0);
  std::vector<double> same(300, 2.5);
  EXPECT_EQ(fgd::compute_delta_next(SampledSignal(1.0, same), SampledSignal(1.0, same), {150, 140, 160, 1}, {}).delta,
            0.0);
}

TEST(Reconstruct, NoSaccadesIsIdentity) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> x(400);
  for (auto& v : x) v = n(rng);
  const SampledSignal s(250.0, x);
  EXPECT_EQ(fgd::reconstruct(s, s, {}).baseline, s);
}

TEST(Reconstruct, NoiselessStaircaseIsConstant) {
  const std::vector<SaccadeEvent> ev{{105, 100, 113, 1}, {405, 400, 413, -1}, {705, 700, 713, 1}};
  const std::vector<double> levels{0.5, 2.0, -1.0, 0.7};
  const SampledSignal e(250.0, staircase(1000, ev, levels));
  const auto rec = fgd::reconstruct(e, excluded(e, ev), ev);
  for (std::size_t k = 0; k < e.size(); ++k) EXPECT_NEAR(rec.baseline[k], 0.5, 1e-9 * 3.0) << k;
  ASSERT_EQ(rec.segments.size(), 3u);
  EXPECT_NEAR(rec.segments[0].delta, -1.5, 1e-12);
  EXPECT_NEAR(rec.segments[1].delta, 1.5, 1e-12);  // telescoping: -(levels[2] - levels[0])
  EXPECT_NEAR(rec.segments[2].delta, -0.2, 1e-12);
  EXPECT_TRUE(rec.warnings.empty());
}

TEST(Reconstruct, StaircasePlusRampKeepsRamp) {
  // A linear drift is not locally constant, so only the shape is checked:
  // outside windows the result is ramp + per-segment constant, and every
  // segment constant cancels the steps.
  const std::vector<SaccadeEvent> ev{{205, 200, 213, 1}, {605, 600, 613, -1}};
  const std::vector<double> levels{0.0, 3.0, 1.0};
  const auto stairs = staircase(1000, ev, levels);
  std::vector<double> x(stairs.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = stairs[k] + 1e-3 * static_cast<double>(k);
  const SampledSignal e(250.0, x);
  const auto rec = fgd::reconstruct(e, excluded(e, ev), ev);
  const auto& segs = rec.segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double offset = rec.baseline[segs[i].seg_start_idx] - 1e-3 * static_cast<double>(segs[i].seg_start_idx);
    for (std::size_t k = segs[i].seg_start_idx; k <= segs[i].seg_end_idx; ++k) {
      EXPECT_NEAR(rec.baseline[k] - 1e-3 * static_cast<double>(k), offset, 1e-12);
    }
    // Offset loss per junction is the ramp over the distance between mean centres.
    const std::size_t gap = ev[i].end_idx - ev[i].start_idx + 14;
    EXPECT_NEAR(offset, -1e-3 * static_cast<double>(gap) * static_cast<double>(i + 1), 1e-9);
  }
}

TEST(Reconstruct, DriftTransparencyForLocallyConstantDrift) {
  const std::vector<SaccadeEvent> ev{{205, 200, 213, 1}, {605, 600, 613, -1}};
  const auto stairs = staircase(1000, ev, {0.0, 3.0, 1.0});
  // Piecewise-constant drift that changes only far from every boundary neighbourhood.
  std::vector<double> d(1000);
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = k < 400 ? 0.3 : (k < 800 ? -0.2 : 0.9);
  std::vector<double> x(1000);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = stairs[k] + d[k];
  const SampledSignal a(250.0, stairs);
  const SampledSignal b(250.0, x);
  const auto ra = fgd::reconstruct(a, excluded(a, ev), ev);
  const auto rb = fgd::reconstruct(b, excluded(b, ev), ev);
  for (std::size_t k = 0; k < 1000; ++k) {
    const bool inside = (k >= 200 && k <= 213) || (k >= 600 && k <= 613);
    if (!inside) {
      EXPECT_NEAR(rb.baseline[k] - ra.baseline[k], d[k], 1e-12) << k;
    }
  }
}

TEST(Reconstruct, JunctionMeansMatchWithinNoiseBound) {
  const double sigma = 0.01;
  const std::size_t m = 15;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, sigma);
  const std::vector<SaccadeEvent> ev{{305, 300, 313, 1}, {805, 800, 813, -1}, {1305, 1300, 1313, 1}};
  auto x = staircase(2000, ev, {0.0, 1.0, -0.5, 0.25});
  for (auto& v : x) v += n(rng);
  const SampledSignal e(250.0, x);
  const auto rec = fgd::reconstruct(e, excluded(e, ev), ev);
  for (const auto& s : ev) {
    const double before = mean_range(rec.baseline, s.start_idx - m + 1, s.start_idx);
    const double after = mean_range(rec.baseline, s.end_idx, s.end_idx + m - 1);
    EXPECT_LE(std::abs(before - after), 4.0 * sigma / std::sqrt(static_cast<double>(m)));
  }
}

TEST(Reconstruct, LinearBridgeAndZeroFill) {
  const std::vector<SaccadeEvent> ev{{105, 100, 110, 1}};
  std::vector<double> x(300, 0.0);
  for (std::size_t k = 100; k < 300; ++k) x[k] = 1.0;
  x[100] = 0.2;
  const SampledSignal e(250.0, x);
  const auto lin = fgd::reconstruct(e, excluded(e, ev), ev);
  EXPECT_EQ(lin.baseline[100], 0.2);
  for (std::size_t k = 101; k < 110; ++k) {
    const double expect = lin.baseline[100] + (lin.baseline[110] - lin.baseline[100]) * (static_cast<double>(k) - 100.0) / 10.0;
    EXPECT_NEAR(lin.baseline[k], expect, 1e-15);
  }
  ReconstructConfig zero;
  zero.gap_fill = fgd::GapFill::zero;
  const auto z = fgd::reconstruct(e, excluded(e, ev), ev, zero);
  for (std::size_t k = 100; k < 110; ++k) EXPECT_EQ(z.baseline[k], 0.0);
  for (std::size_t k = 110; k < 300; ++k) EXPECT_EQ(z.baseline[k], lin.baseline[k]);
}

TEST(Reconstruct, CloseSaccadesWarn) {
  const std::vector<SaccadeEvent> ev{{52, 50, 55, 1}, {62, 60, 65, 1}};
  const SampledSignal e(250.0, staircase(200, ev, {0.0, 1.0, 2.0}));
  const auto rec = fgd::reconstruct(e, excluded(e, ev), ev);
  EXPECT_FALSE(rec.warnings.empty());
  for (double v : rec.baseline.values()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Reconstruct, RejectsMisalignedInputs) {
  const SampledSignal a(250.0, std::vector<double>(100, 0.0));
  const SampledSignal b(250.0, std::vector<double>(99, 0.0));
  EXPECT_THROW(fgd::reconstruct(a, b, {}), std::invalid_argument);
}
