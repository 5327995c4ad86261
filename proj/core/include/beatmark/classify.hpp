#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

enum class Action { kNone, kAdjust, kExclude, kInclude };

// Result column of the correction table for each label; kNone for non-BT
// reasons.
Action action_for(BeatReason label);

// Per-position view of the active (non-REMOVED) beats handed to the
// classifier. All vectors are indexed by active position; interval_flags[k]
// belongs to the interval ending at position k + 1.
struct ClassifyInput {
  std::vector<Seconds> times;
  std::vector<bool> interval_flags;
  std::vector<bool> candidate;
  std::vector<PWave> pwave;
  std::vector<bool> noisy;
  std::vector<bool> low_score;
  std::vector<bool> excluded;
  std::vector<Seconds> regional_mean;  // flagged intervals left out
  bool analyze_pwaves = true;
};

struct Decision {
  BeatReason label = BeatReason::kNone;
  Action action = Action::kNone;
  std::optional<std::size_t> partner;  // second beat of a pair rule
};

// Applies BT1..BT5 to every candidate in ascending time, then includes runs of
// still-unresolved candidates that drift gradually. Without P-wave analysis
// only BT1 applies (with no P-wave precondition).
std::vector<Decision> classify_candidates(const ClassifyInput& in, const IrregularityParams& params);

// Both neighbours' own intervals are regular and neither neighbour is a
// low-score detection; the preceding beat is not excluded.
bool isolated_valid(const ClassifyInput& in, std::size_t p);

}  // namespace beatmark
