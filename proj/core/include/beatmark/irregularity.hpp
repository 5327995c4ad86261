#pragma once

#include <optional>
#include <span>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

struct Interval {
  Seconds duration = 0.0;
  std::size_t left = 0;   // index into the beat array the series was built from
  std::size_t right = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Intervals between consecutive non-REMOVED beats. Interval k ends at the
// (k+1)-th active beat.
struct RriSeries {
  std::vector<Interval> intervals;

  static RriSeries from_beats(std::span<const BeatMark> beats);
  static RriSeries from_times(std::span<const Seconds> times);

  std::size_t size() const { return intervals.size(); }
  bool empty() const { return intervals.empty(); }
  Seconds operator[](std::size_t k) const { return intervals[k].duration; }
  std::vector<Seconds> durations() const;
};

struct RegionalStats {
  Seconds rri_mean = 0.0;
  double noise_mean = 0.0;
  double lower_frac = 0.80;
  double upper_frac = 1.20;
  std::size_t rri_count = 0;

  Seconds lower() const { return lower_frac * rri_mean; }
  Seconds upper() const { return upper_frac * rri_mean; }
};

// Regional statistics for the active beat at position `beat` (0-based over
// the beats the series was built from). The RRI window holds up to
// `regional_window` intervals ending at or before the beat and up to the same
// number after it; intervals with `exclude[k]` set are skipped. The noise
// mean averages the profile of up to `regional_window` neighbours on each
// side. Throws EmptyWindow when fewer than two intervals remain.
RegionalStats regional_stats(const RriSeries& rri, std::span<const double> noise, std::size_t beat,
                             const IrregularityParams& params, const std::vector<bool>& exclude = {});

// Per-interval outlier flags: outside the regional band (strict) or outside
// the absolute acceptance window.
std::vector<bool> detect_outliers(const RriSeries& rri, const IrregularityParams& params,
                                  const std::vector<bool>& exclude = {});

// Per-beat candidacy derived from interval flags: a beat is an outlier
// candidate iff the interval it terminates is flagged.
std::vector<bool> outlier_beats(const std::vector<bool>& interval_flags);

// S1..S4: sums of the first k intervals after the beat at position `beat`
// (fewer near the end of the series).
std::vector<Seconds> cumulative_sums(const RriSeries& rri, std::size_t beat, std::size_t count = 4);

// Index k (1-based count of intervals) whose cumulative sum is closest to the
// regional mean.
std::size_t closest_cumulative_count(std::span<const Seconds> sums, Seconds mean);

// True iff d[k] + d[k+1] lies within [lower, upper] x 2 x mean (inclusive).
bool pair_sum_check(const RriSeries& rri, std::size_t interval, const RegionalStats& stats);
bool pair_sum_check(Seconds first, Seconds second, const RegionalStats& stats);

// n = round(duration / mean) when n >= 2 and duration / n lies within the
// regional band (inclusive); nullopt otherwise.
std::optional<int> split_eligibility(Seconds duration, const RegionalStats& stats);

// |b - a| / a <= frac
bool within_gradual(Seconds previous, Seconds current, const IrregularityParams& params);

}  // namespace beatmark
