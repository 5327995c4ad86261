#pragma once

#include <span>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

struct NoiseProfile {
  std::vector<double> per_beat;  // aligned 1:1 with the beats it was computed for
  double window_ms = 200.0;
};

// For each beat, the variance of the signal derivative (first difference
// times the sample rate) over [t - window, t + window], truncated at the
// record edges. Throws NoSamples for RRI-only records.
NoiseProfile compute_noise_profile(const EcgRecord& record, std::span<const BeatMark> beats,
                                   double window_ms = 200.0);

// Beat is noisy iff its profile value exceeds upper_frac x its regional noise
// mean (strict). Low values are never flagged.
std::vector<bool> classify_noise(std::span<const double> profile, std::span<const double> regional_means,
                                 double upper_frac = 1.20);

// Mean profile over up to `window` beats before and after each beat (the beat
// itself excluded). Beats with no neighbours get their own value.
std::vector<double> regional_noise_means(std::span<const double> profile, int window = 20);

}  // namespace beatmark
