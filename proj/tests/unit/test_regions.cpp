#include <gtest/gtest.h>

#include <random>

#include "beatmark/correction.hpp"
#include "beatmark/regions.hpp"
#include "oracles.hpp"

using namespace beatmark;

namespace {

std::vector<double> even(std::size_t n, double step, double start = 0.5) {
  std::vector<double> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(start + step * static_cast<double>(i));
  return t;
}

}  // namespace

TEST(MarkRegions, CleanRecordHasOnlyTraining) {
  auto beats = oracle::marks(even(100, 0.8));
  mark_training(beats);
  const auto r = mark_regions(beats, 80.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].reason, RegionReason::kTraining);
  EXPECT_EQ(r[1].reason, RegionReason::kTraining);
  EXPECT_DOUBLE_EQ(r[0].start, 0.0);
  EXPECT_NEAR(r[0].end, 0.5 + 19.5 * 0.8, 1e-9);
  EXPECT_NEAR(r[1].start, 0.5 + 79.5 * 0.8, 1e-9);
  EXPECT_DOUBLE_EQ(r[1].end, 80.0);
}

TEST(MarkRegions, SingleExcludedBeatMidpoints) {
  auto beats = oracle::marks(even(100, 0.8, 0.0));
  ASSERT_NEAR(beats[50].time, 40.0, 1e-9);
  beats[50].cls = BeatClass::kExcluded;
  const auto r = mark_regions(beats, 80.0);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[1].reason, RegionReason::kIrregular);
  EXPECT_NEAR(r[1].start, 39.6, 1e-9);
  EXPECT_NEAR(r[1].end, 40.4, 1e-9);
}

TEST(MarkRegions, NoisyRunIsNoise) {
  auto beats = oracle::marks(even(100, 0.8, 0.0));
  for (std::size_t i = 50; i < 54; ++i) beats[i].cls = BeatClass::kExcluded;
  beats[50].noisy = beats[51].noisy = true;
  auto r = mark_regions(beats, 80.0);
  EXPECT_EQ(r[1].reason, RegionReason::kNoise);
  beats[51].noisy = false;
  r = mark_regions(beats, 80.0);
  EXPECT_EQ(r[1].reason, RegionReason::kIrregular);
}

TEST(MarkRegions, RunTouchingTrainingIsMerged) {
  auto beats = oracle::marks(even(100, 0.8, 0.0));
  beats[20].cls = BeatClass::kExcluded;
  beats[21].cls = BeatClass::kExcluded;
  const auto r = mark_regions(beats, 80.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].reason, RegionReason::kTraining);
  EXPECT_NEAR(r[0].end, 0.5 * (beats[21].time + beats[22].time), 1e-9);
}

TEST(MarkRegions, RunReachingTheEndExtendsToRecordEnd) {
  auto beats = oracle::marks(even(100, 0.8, 0.0));
  beats[99].cls = BeatClass::kExcluded;
  const auto r = mark_regions(beats, 90.0, 0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_DOUBLE_EQ(r[0].end, 90.0);
}

TEST(MarkRegions, ShortRecordIsAllTraining) {
  const auto beats = oracle::marks(even(30, 0.8));
  const auto r = mark_regions(beats, 25.0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (Region{0.0, 25.0, RegionReason::kTraining}));
}

TEST(MarkRegions, RemovedBeatsAreIgnored) {
  auto beats = oracle::marks(even(100, 0.8, 0.0));
  beats[50].cls = BeatClass::kRemoved;
  EXPECT_EQ(mark_regions(beats, 80.0).size(), 2u);
}

TEST(Normalize, SortsAndMerges) {
  const auto r = normalize_regions({{5.0, 6.0, RegionReason::kNoise},
                                    {1.0, 2.0, RegionReason::kIrregular},
                                    {2.0, 3.0, RegionReason::kNoise},
                                    {5.5, 7.0, RegionReason::kIrregular},
                                    {9.0, 9.0, RegionReason::kManual}});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], (Region{1.0, 3.0, RegionReason::kIrregular}));
  EXPECT_EQ(r[1], (Region{5.0, 7.0, RegionReason::kNoise}));
}

TEST(Epochs, TrainingHeadShiftsTiling) {
  const auto t = even(2700, 0.666, 0.3);
  const std::vector<Region> regions{{0.0, 13.0, RegionReason::kTraining},
                                    {1787.0, 1800.0, RegionReason::kTraining}};
  EXPECT_EQ(count_spectral_epochs(t, regions, 1800.0), 5u);
  const std::vector<Region> none;
  EXPECT_EQ(count_spectral_epochs(t, none, 1800.0), 6u);
}

TEST(Epochs, IrregularRegionDisqualifiesItsWindow) {
  const auto t = even(2700, 0.666, 0.3);
  const std::vector<Region> regions{{0.0, 13.0, RegionReason::kTraining},
                                    {420.0, 480.0, RegionReason::kIrregular},
                                    {1787.0, 1800.0, RegionReason::kTraining}};
  EXPECT_EQ(count_spectral_epochs(t, regions, 1800.0), 4u);
  auto manual = regions;
  manual[1].reason = RegionReason::kManual;
  EXPECT_EQ(count_spectral_epochs(t, manual, 1800.0), 4u);
}

TEST(Epochs, OutOfRangeIntervalDisqualifies) {
  auto t = even(2700, 0.666, 0.3);
  t.erase(t.begin() + 1000, t.begin() + 1003);  // a 2.66 s gap near 666 s
  const std::vector<Region> regions{{0.0, 13.0, RegionReason::kTraining}};
  EXPECT_EQ(count_spectral_epochs(t, regions, 1800.0), 4u);
}

TEST(Epochs, EmptyWindowDoesNotCount) {
  const std::vector<Seconds> t{1.0, 1.8};
  EXPECT_EQ(count_spectral_epochs(t, {}, 900.0), 1u);  // only the first window holds beats
}

TEST(Epochs, OutputTimes) {
  auto beats = oracle::marks({1.0, 2.0, 3.0, 4.0});
  beats[1].cls = BeatClass::kExcluded;
  beats[2].cls = BeatClass::kTraining;
  EXPECT_EQ(output_times(beats), (std::vector<Seconds>{1.0, 4.0}));
}

TEST(MarkRegions, ValidityOnCorrectedTrains) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto beats = oracle::marks(oracle::irregular_train(rng, 300));
    identify_outliers(beats, IrregularityParams{});
    run_correction_loops(beats, IrregularityParams{}, CorrectionParams{});
    const Seconds duration = beats.back().time + 0.5;
    const auto regions = mark_regions(beats, duration);
    for (std::size_t k = 1; k < regions.size(); ++k) EXPECT_LT(regions[k - 1].end, regions[k].start);
    for (const auto& b : beats) {
      int inside = 0;
      bool in_non_training = false;
      for (const auto& r : regions) {
        if (b.time >= r.start && b.time <= r.end) {
          ++inside;
          if (r.reason != RegionReason::kTraining) in_non_training = true;
        }
      }
      if (b.cls == BeatClass::kExcluded) EXPECT_EQ(inside, 1) << b.time;
      if (b.cls == BeatClass::kIncluded) EXPECT_FALSE(in_non_training) << b.time;
    }
  }
}
