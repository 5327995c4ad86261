#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

inline constexpr int kTrainingBeats = 20;
// Longest run of unresolved beats handed to the extra-beat search.
inline constexpr std::size_t kMaxRemovalRun = 64;

// Excluded beats the correction stage may still act on.
bool is_pending(const BeatMark& b);

// Sum of squared successive differences of the intervals between `times`.
double roughness(std::span<const Seconds> times);

// Marks the first and last `count` active beats TRAINING.
void mark_training(std::vector<BeatMark>& beats, int count = kTrainingBeats);

// Post-identification classification: every active, non-TRAINING beat whose
// terminating interval is an outlier becomes EXCLUDED/OUTLIER. Returns the
// number of EXCLUDED beats afterwards.
std::size_t identify_outliers(std::vector<BeatMark>& beats, const IrregularityParams& params);

// times = {anchor, inner..., anchor}. Returns the keep mask over the inner
// beats minimising the sum of squared deviations of the resulting intervals
// from `mean`. Earlier beats are kept on ties.
std::vector<bool> best_removal(std::span<const Seconds> times, Seconds mean);
double removal_cost(std::span<const Seconds> times, const std::vector<bool>& keep_inner, Seconds mean);

struct CorrectionEvent {
  BeatReason kind = BeatReason::kNone;
  std::vector<Seconds> before;  // beat times of the affected neighbourhood
  std::vector<Seconds> after;
};

struct CorrectionReport {
  std::size_t excluded_after_identification = 0;
  std::vector<std::size_t> excluded_after_loop;
  std::vector<CorrectionEvent> events;
};

// Removes extra beats inside runs of pending beats. Each run, with the valid
// beats on either side as fixed anchors, loses the subset of beats that brings
// the resulting intervals closest to the regional mean; applied only when at
// least one beat goes, every resulting interval lands inside the regional band
// and the local roughness does not grow.
void remove_extra_beats(std::vector<BeatMark>& beats, const IrregularityParams& params,
                        CorrectionReport* report = nullptr);

// Splits active interval `interval` (index into RriSeries::from_beats) into n
// equal parts by inserting n - 1 INTERPOLATED beats at start + k * (d / n).
// Throws IneligibleInterval.
void interpolate_long(std::vector<BeatMark>& beats, std::size_t interval, int n);

// Moves the beat shared by active intervals `interval` and `interval + 1` to
// the midpoint of its neighbours; the beat becomes ADJUSTED with `reason`.
// Throws NotAPair when there is no successor interval.
void adjust_short_long(std::vector<BeatMark>& beats, std::size_t interval, BeatReason reason = BeatReason::kBt8);

// Runs `loops` passes of classification and correction over beats that have
// already been through identify_outliers. Beats that leave the EXCLUDED class
// never return to it.
CorrectionReport run_correction_loops(std::vector<BeatMark>& beats, const IrregularityParams& iparams,
                                      const CorrectionParams& cparams);

std::size_t count_class(std::span<const BeatMark> beats, BeatClass cls);

}  // namespace beatmark
