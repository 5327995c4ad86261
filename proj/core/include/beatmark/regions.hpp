#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

inline constexpr Seconds kEpochLength = 300.0;

// Sorts by start and merges touching or overlapping regions. A merged region
// keeps the reason of the region that starts first.
std::vector<Region> normalize_regions(std::vector<Region> regions);

// TRAINING regions over the first and last `training` active beats, plus one
// region per maximal run of EXCLUDED beats bounded by the midpoints to the
// neighbouring non-excluded beats (or the record edges). A run is NOISE when
// at least half of its beats are noisy, IRREGULAR otherwise. Result is
// normalized.
std::vector<Region> mark_regions(std::span<const BeatMark> beats, Seconds record_duration, int training = 20);

// Consecutive non-overlapping 300 s windows tiled from the end of the leading
// TRAINING region that do not overlap any IRREGULAR, NOISE or MANUAL region
// and hold no interval between consecutive output beats outside
// [accept_min, accept_max].
std::size_t count_spectral_epochs(std::span<const Seconds> output_times, std::span<const Region> regions,
                                  Seconds record_duration, Seconds accept_min = 0.3, Seconds accept_max = 1.8,
                                  Seconds epoch = kEpochLength);

// Output beat times (INCLUDED, ADJUSTED, INTERPOLATED) in order.
std::vector<Seconds> output_times(std::span<const BeatMark> beats);

}  // namespace beatmark
