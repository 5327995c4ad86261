#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beatmark/annotations.hpp"
#include "beatmark/types.hpp"

namespace beatmark {

inline constexpr Seconds kMatchTolerance = 0.150;

struct Matching {
  std::vector<std::optional<std::size_t>> detected_to_reference;
  std::vector<std::optional<std::size_t>> reference_to_detected;
  std::size_t matched = 0;
};

// Greedy one-to-one matching: candidate pairs within `tolerance` are taken in
// order of increasing distance (ties by reference then detection index).
// Inputs need not be sorted.
Matching match_beats(std::span<const Seconds> detected, std::span<const Seconds> reference,
                     Seconds tolerance = kMatchTolerance);

struct ValidationReport {
  std::size_t reference_beats = 0;
  std::size_t detected_beats = 0;
  std::size_t matched_beats = 0;
  double accuracy = 0.0;   // matched / reference
  double precision = 0.0;  // detected / reference, a count ratio that can exceed 1
  double ppv = 0.0;        // matched / detected
  double proportion_normal = 0.0;
  double pvc_found_prop = 0.0;
  double pac_found_prop = 0.0;
  double pvc_included_prop = 0.0;
  double pac_excluded_prop = 0.0;
  double valid_prop = 0.0;
  double irregular_prop = 0.0;
  double not_present_prop = 0.0;
  std::size_t epochs_pre = 0;
  std::size_t epochs_post = 0;
  std::map<std::string, double> noise_accuracy_by_record;

  // Flat name -> value view used by reports and sessions.
  std::map<std::string, double> metrics() const;
};

// Scores the active beats against the reference beat annotations. Matched
// reference beats are Valid when their detection is an output class and
// Irregular otherwise; unmatched ones are Not Present.
ValidationReport compute_metrics(const Matching& matching, std::span<const BeatMark> detected,
                                 std::span<const Annotation> reference);

// Matches the active beats against the beat annotations and scores them.
ValidationReport validate_beats(std::span<const BeatMark> beats, const ReferenceAnnotations& reference,
                                Seconds tolerance = kMatchTolerance);

// Noise stress test protocol: clean for the first 300 s, then alternating
// 120 s noisy / clean segments.
bool in_nst_noise_segment(Seconds t, Seconds first = 300.0, Seconds segment = 120.0);

// Fraction of beats whose noisy flag agrees with `truth`.
double noise_accuracy(const std::vector<bool>& noisy, const std::vector<bool>& truth);

// Agreement of each active beat's noisy flag with the NST schedule.
double nst_noise_accuracy(std::span<const BeatMark> beats);

}  // namespace beatmark
