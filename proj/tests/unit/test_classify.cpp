#include <gtest/gtest.h>

#include <random>

#include "beatmark/classify.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/irregularity.hpp"
#include "oracles.hpp"

using namespace beatmark;

namespace {

std::vector<double> times_from(const std::vector<double>& d, double start = 1.0) {
  std::vector<double> t{start};
  for (double v : d) t.push_back(t.back() + v);
  return t;
}

// Classifier input for a beat train where every beat has the given P status,
// candidates follow the interval flags and the regional mean skips flagged
// intervals.
ClassifyInput build(const std::vector<double>& d, PWave p = PWave::kYes, bool analyze = true) {
  const IrregularityParams params;
  ClassifyInput in;
  in.times = times_from(d);
  in.interval_flags = oracle::outliers(d, params);
  in.candidate = outlier_beats(in.interval_flags);
  const std::size_t n = in.times.size();
  in.pwave.assign(n, analyze ? p : PWave::kUnevaluated);
  in.noisy.assign(n, false);
  in.low_score.assign(n, false);
  in.excluded = in.candidate;
  in.regional_mean.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = oracle::regional_mean(d, i, params.regional_window, in.interval_flags);
    if (!m) m = oracle::regional_mean(d, i, params.regional_window);
    in.regional_mean[i] = m.value_or(0.0);
  }
  in.analyze_pwaves = analyze;
  return in;
}

std::vector<double> around(std::vector<double> middle) {
  std::vector<double> d(25, 0.8);
  d.insert(d.end(), middle.begin(), middle.end());
  d.insert(d.end(), 25, 0.8);
  return d;
}

constexpr std::size_t kFirst = 26;  // position of the beat ending the first middle interval

}  // namespace

TEST(Classify, ShortLongWithoutPWaveIsBt1) {
  auto in = build(around({0.6, 1.0}), PWave::kNo);
  ASSERT_TRUE(in.candidate[kFirst]);
  ASSERT_TRUE(in.candidate[kFirst + 1]);
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt1);
  EXPECT_EQ(out[kFirst].action, Action::kAdjust);
  EXPECT_EQ(out[kFirst].partner, kFirst + 1);
  EXPECT_EQ(out[kFirst + 1].label, BeatReason::kNone);
  EXPECT_TRUE(isolated_valid(in, kFirst));
}

TEST(Classify, Bt1NeedsShorterThanPredecessor) {
  auto in = build(around({1.0, 0.6}), PWave::kNo);
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_NE(out[kFirst].label, BeatReason::kBt1);
}

TEST(Classify, Bt1NeedsIsolation) {
  auto in = build(around({0.5, 0.6, 1.0, 1.1}), PWave::kNo);
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_NE(out[kFirst + 1].label, BeatReason::kBt1);
  EXPECT_FALSE(isolated_valid(in, kFirst + 1));
  in = build(around({0.6, 1.0}), PWave::kNo);
  in.low_score[kFirst - 1] = true;
  EXPECT_EQ(classify_candidates(in, IrregularityParams{})[kFirst].label, BeatReason::kNone);
}

TEST(Classify, Bt1NeedsPairSum) {
  auto in = build(around({0.5, 0.5}), PWave::kNo);  // a premature beat with no pause
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kNone);
}

TEST(Classify, AdjacentOutliersWithPWavesAreBt2) {
  auto in = build(around({0.6, 0.6}), PWave::kYes);
  in.pwave[kFirst + 2] = PWave::kNo;
  // 0.6 then 0.6: the second pair member is also irregular.
  ASSERT_TRUE(in.candidate[kFirst] && in.candidate[kFirst + 1]);
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt2);
  EXPECT_EQ(out[kFirst + 1].label, BeatReason::kBt2);
  EXPECT_EQ(out[kFirst].action, Action::kExclude);
  EXPECT_EQ(out[kFirst + 1].action, Action::kExclude);
}

TEST(Classify, GradualIncreaseWithPWaveIsBt3) {
  auto in = build(around({0.86}), PWave::kYes);
  ASSERT_FALSE(in.candidate[kFirst]);  // 0.86 sits inside the regional band
  in.candidate[kFirst] = true;
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt3);
  EXPECT_EQ(out[kFirst].action, Action::kInclude);
}

TEST(Classify, NoisyBeatIsNotIncluded) {
  auto in = build(around({0.86}), PWave::kYes);
  in.candidate[kFirst] = true;
  in.noisy[kFirst] = true;
  EXPECT_EQ(classify_candidates(in, IrregularityParams{})[kFirst].label, BeatReason::kNone);
}

TEST(Classify, LongIntervalWithPWaveIsBt4) {
  auto in = build(around({1.6}), PWave::kYes);
  ASSERT_TRUE(in.candidate[kFirst]);
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt4);
  EXPECT_EQ(out[kFirst].action, Action::kExclude);
}

TEST(Classify, GradualDecreaseWithPWaveIsBt5) {
  auto in = build(around({0.74}), PWave::kYes);
  in.candidate[kFirst] = true;
  const auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt5);
  EXPECT_EQ(out[kFirst].action, Action::kInclude);
}

TEST(Classify, GradualRunIsIncluded) {
  // Each step, including the return to the base rhythm, is within 10 %.
  auto in = build(around({0.87, 0.95, 1.03, 1.1, 1.03, 0.95, 0.87}), PWave::kYes);
  for (std::size_t p = kFirst; p < kFirst + 7; ++p) in.candidate[p] = true;
  const auto out = classify_candidates(in, IrregularityParams{});
  for (std::size_t p = kFirst; p < kFirst + 7; ++p) {
    EXPECT_TRUE(out[p].label == BeatReason::kBt3 || out[p].label == BeatReason::kBt5) << p;
    EXPECT_EQ(out[p].action, Action::kInclude);
  }
}

TEST(Classify, AbruptRunIsNotIncluded) {
  auto in = build(around({1.2, 1.2, 1.2}), PWave::kYes);
  const auto out = classify_candidates(in, IrregularityParams{});
  for (std::size_t p = kFirst; p < kFirst + 3; ++p) EXPECT_NE(action_for(out[p].label), Action::kInclude) << p;
}

TEST(Classify, PWaveOffFallsBackToBt1Only) {
  auto in = build(around({0.6, 1.0}), PWave::kYes, false);
  auto out = classify_candidates(in, IrregularityParams{});
  EXPECT_EQ(out[kFirst].label, BeatReason::kBt1);
  in = build(around({0.6, 0.6}), PWave::kYes, false);
  out = classify_candidates(in, IrregularityParams{});
  for (const auto& d : out) {
    EXPECT_TRUE(d.label == BeatReason::kNone || d.label == BeatReason::kBt1);
  }
  // With analysis on, a P-wave on a short-long beat blocks BT1.
  in = build(around({0.6, 1.0}), PWave::kYes, true);
  EXPECT_NE(classify_candidates(in, IrregularityParams{})[kFirst].label, BeatReason::kBt1);
}

TEST(Classify, ActionTable) {
  EXPECT_EQ(action_for(BeatReason::kBt1), Action::kAdjust);
  EXPECT_EQ(action_for(BeatReason::kBt2), Action::kExclude);
  EXPECT_EQ(action_for(BeatReason::kBt3), Action::kInclude);
  EXPECT_EQ(action_for(BeatReason::kBt4), Action::kExclude);
  EXPECT_EQ(action_for(BeatReason::kBt5), Action::kInclude);
  EXPECT_EQ(action_for(BeatReason::kBt8), Action::kAdjust);
  EXPECT_EQ(action_for(BeatReason::kOutlier), Action::kNone);
}

TEST(Classify, ShapeMismatch) {
  auto in = build(around({0.6, 1.0}));
  in.noisy.pop_back();
  EXPECT_THROW(classify_candidates(in, IrregularityParams{}), InvalidArgument);
}

TEST(Classify, RandomInputsHonourLabelInvariants) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pw(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = oracle::irregular_train(rng, 150);
    std::vector<double> d;
    for (std::size_t i = 1; i < t.size(); ++i) d.push_back(t[i] - t[i - 1]);
    auto in = build(d, PWave::kYes, trial % 4 != 0);
    for (std::size_t i = 0; i < in.pwave.size() && in.analyze_pwaves; ++i) {
      in.pwave[i] = static_cast<PWave>(pw(rng));
      in.noisy[i] = (rng() % 10) == 0;
    }
    const auto out = classify_candidates(in, IrregularityParams{});
    EXPECT_EQ(classify_candidates(in, IrregularityParams{}).size(), out.size());
    for (std::size_t p = 0; p < out.size(); ++p) {
      EXPECT_EQ(out[p].action, action_for(out[p].label));
      if (out[p].label == BeatReason::kNone) continue;
      EXPECT_TRUE(in.candidate[p]) << "labelled a non-candidate";
      if (out[p].label == BeatReason::kBt1) {
        EXPECT_TRUE(isolated_valid(in, p));
        EXPECT_NE(in.pwave[p], PWave::kYes);
      } else {
        EXPECT_TRUE(in.analyze_pwaves);
        // The second beat of a BT2 pair is excluded on its partner's P-wave.
        const bool pair_follower = out[p].label == BeatReason::kBt2 && out[p].partner && *out[p].partner < p;
        if (!pair_follower) EXPECT_EQ(in.pwave[p], PWave::kYes);
      }
      if (out[p].label == BeatReason::kBt4) EXPECT_GT(in.times[p] - in.times[p - 1], 1.5);
    }
  }
}
