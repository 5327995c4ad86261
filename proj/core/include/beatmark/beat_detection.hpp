#pragma once

#include <span>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

// Intermediate signals of the QRS detector. All vectors have the record's
// length.
struct FilteredSignal {
  double sample_rate = 0.0;
  std::vector<double> conditioned;  // amplified, optionally negated raw signal
  std::vector<double> bandpassed;   // zero-phase 5-15 Hz band
  std::vector<double> energy;       // squared slope, integrated over 150 ms

  std::size_t size() const { return bandpassed.size(); }
};

namespace detector {
inline constexpr double kBandLowHz = 5.0;
inline constexpr double kBandHighHz = 15.0;
inline constexpr Seconds kRefractory = 0.200;
inline constexpr Seconds kIntegrationWindow = 0.150;
inline constexpr Seconds kRefineHalfWindow = 0.050;
inline constexpr int kPostFilterHalfWindow = 7;  // beats each side for the running median
}  // namespace detector

// Amplifies, optionally inverts, band-passes (zero phase) and computes the
// detection energy. Throws EmptySignal for records without samples.
FilteredSignal preprocess(const EcgRecord& record, const DetectorParams& params);

// Adaptive-threshold QRS detection on the energy signal. Beats are INCLUDED,
// DETECTOR provenance, strictly increasing and at least one refractory period
// apart.
std::vector<BeatMark> detect_qrs(const FilteredSignal& filtered, const DetectorParams& params);

// Local matched-energy score of a beat: square root of the peak detection
// energy within the refinement window around it.
double beat_score(const FilteredSignal& filtered, Seconds time);

// Demotes beats whose score is below post_threshold x the running median
// score of their neighbours to EXCLUDED. Never adds, removes or reorders.
std::vector<BeatMark> post_filter(std::span<const BeatMark> beats, const FilteredSignal& filtered,
                                  const DetectorParams& params);

}  // namespace beatmark
