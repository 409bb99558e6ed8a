#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fgd/blink.hpp"
#include "fgd/simulate.hpp"

using fgd::BlinkEvent;
using fgd::SampledSignal;

namespace {

std::vector<double> noise(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

}  // namespace

TEST(DetectBlinks, SaccadeStepIsNotABlink) {
  std::vector<double> x = noise(2000, 1e-4, 1);
  for (std::size_t k = 1000; k < x.size(); ++k) x[k] += 0.04;
  EXPECT_TRUE(fgd::detect_blinks(SampledSignal(250.0, x)).empty());
}

TEST(DetectBlinks, TriangularPulseFound) {
  const double sd = 1e-4;
  std::vector<double> x = noise(2500, sd, 2);
  const std::size_t s = 1200;
  const std::size_t len = 50;  // 200 ms at 250 Hz
  for (std::size_t k = 0; k <= len; ++k) {
    const double tri = 1.0 - std::abs(2.0 * static_cast<double>(k) / len - 1.0);
    x[s + k] += 10.0 * sd * tri;
  }
  const auto blinks = fgd::detect_blinks(SampledSignal(250.0, x));
  ASSERT_EQ(blinks.size(), 1u);
  EXPECT_LE(blinks[0].start_idx, s + 5);
  EXPECT_GE(blinks[0].end_idx, s + len - 5);
  EXPECT_LT(blinks[0].start_idx, blinks[0].peak_idx);
  EXPECT_LT(blinks[0].peak_idx, blinks[0].end_idx);
  EXPECT_LE((blinks[0].end_idx - blinks[0].start_idx) / 250.0, 0.4);
}

TEST(DetectBlinks, OppositeSurgesTooFarApart) {
  // Up step, then down step 600 ms later.
  std::vector<double> x = noise(2500, 1e-4, 3);
  for (std::size_t k = 1000; k < 1150; ++k) x[k] += 0.01;
  EXPECT_TRUE(fgd::detect_blinks(SampledSignal(250.0, x)).empty());
}

TEST(DetectBlinks, NegativePulseOnlyWithBipolar) {
  std::vector<double> x = noise(2500, 1e-4, 4);
  for (std::size_t k = 0; k <= 50; ++k) x[1200 + k] -= 0.005 * 0.5 * (1 - std::cos(2 * M_PI * k / 50.0));
  const SampledSignal s(250.0, x);
  EXPECT_TRUE(fgd::detect_blinks(s).empty());
  fgd::BlinkConfig cfg;
  cfg.bipolar = true;
  EXPECT_EQ(fgd::detect_blinks(s, cfg).size(), 1u);
}

TEST(DetectBlinks, FlatSignalHasNone) {
  EXPECT_TRUE(fgd::detect_blinks(SampledSignal(250.0, std::vector<double>(500, 1.0))).empty());
}

TEST(RemoveBlinks, EmptyListIsNoOp) {
  const SampledSignal s(10.0, {1, 5, 2, 8});
  EXPECT_EQ(fgd::remove_blinks(s, {}), s);
}

TEST(RemoveBlinks, PulseBetweenEqualEndpoints) {
  const SampledSignal s(10.0, {0, 0, 4, 8, 4, 0, 0});
  const SampledSignal y = fgd::remove_blinks(s, {BlinkEvent{1, 5, 3}});
  EXPECT_EQ(y.values(), std::vector<double>(7, 0.0));
}

TEST(RemoveBlinks, SlopedSegmentFollowsChord) {
  std::vector<double> x(20);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.3 * static_cast<double>(k);
  for (std::size_t k = 6; k <= 12; ++k) x[k] += 5.0;
  x[5] = 1.5;
  x[13] = 3.9;
  const SampledSignal y = fgd::remove_blinks(SampledSignal(1.0, x), {BlinkEvent{5, 13, 9}});
  for (std::size_t k = 5; k <= 13; ++k) {
    const double chord = x[5] + (x[13] - x[5]) * (static_cast<double>(k) - 5.0) / 8.0;
    EXPECT_NEAR(y[k], chord, 1e-12) << k;
  }
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(y[k], x[k]);
  for (std::size_t k = 14; k < x.size(); ++k) EXPECT_EQ(y[k], x[k]);
}

TEST(RemoveBlinks, Idempotent) {
  const SampledSignal s(10.0, noise(100, 1.0, 5));
  const std::vector<BlinkEvent> ev{{10, 20, 15}, {40, 55, 47}};
  const SampledSignal once = fgd::remove_blinks(s, ev);
  EXPECT_EQ(fgd::remove_blinks(once, ev), once);
}

TEST(RemoveBlinks, RejectsBadEvents) {
  const SampledSignal s(10.0, std::vector<double>(30, 0.0));
  EXPECT_THROW(fgd::remove_blinks(s, {{5, 40, 10}}), std::invalid_argument);
  EXPECT_THROW(fgd::remove_blinks(s, {{5, 12, 8}, {10, 20, 15}}), std::invalid_argument);
  EXPECT_THROW(fgd::remove_blinks(s, {{10, 20, 15}, {2, 5, 3}}), std::invalid_argument);
}

TEST(DetectBlinks, SyntheticTrialRecallWithoutSaccadeConfusion) {
  const fgd::TrialScript script = fgd::default_trial_script();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const fgd::GroundTruth g = fgd::synthesize(script, 250.0, 0.2e-3, 0.1, seed);
    const auto found = fgd::detect_blinks(g.raw);
    for (const auto& b : g.blinks) {
      bool hit = false;
      for (const auto& f : found) hit = hit || (f.start_idx <= b.start_idx + 2 && f.end_idx + 2 >= b.end_idx);
      EXPECT_TRUE(hit) << "seed " << seed << " blink at " << b.start_idx;
    }
    for (const auto& f : found) {
      for (const auto& s : g.events) EXPECT_TRUE(f.end_idx < s.start_idx || f.start_idx > s.end_idx);
    }
  }
}
