#pragma once

#include <optional>

#include "beatmark/types.hpp"

namespace beatmark {

namespace pwave {
inline constexpr Seconds kSearchStart = 0.250;  // before the R peak
inline constexpr Seconds kSearchEnd = 0.080;
inline constexpr double kProminenceFactor = 2.0;
inline constexpr Seconds kSmoothing = 0.040;
inline constexpr Seconds kMinWindow = 0.040;
}  // namespace pwave

struct PWaveOptions {
  // Multiplies the prominence criterion; below 1 is more sensitive.
  double sensitivity = 1.0;
  // Previous beat and the interval before it, when known.
  std::optional<Seconds> previous_beat;
  Seconds previous_rr = 0.8;
  // Signal polarity is flipped (the invert option).
  bool inverted = false;
};

// Looks for a P-wave in [t - 250 ms, t - 80 ms]. After removing the linear
// trend and smoothing over 40 ms, the window must hold an interior positive
// peak whose prominence (height above the higher of the lowest points on
// either side) exceeds 2 x sensitivity x the residual deviation, estimated
// from first differences.
//
// When the previous beat is known the window starts no earlier than the end
// of its QT span, so a premature beat does not take the preceding T-wave for
// its own P-wave; a window clipped below 40 ms holds no P-wave.
//
// Throws WindowOutOfRange when the window starts before the record, NoSamples
// for RRI-only records.
bool detect_pwave(const EcgRecord& record, Seconds beat_time, const PWaveOptions& opt = {});

// detect_pwave with WindowOutOfRange folded into "not found".
PWave evaluate_pwave(const EcgRecord& record, Seconds beat_time, const PWaveOptions& opt = {});

// QT span estimate, 0.4 sqrt(RR), for a beat preceded by an interval `rr`.
Seconds qt_span(Seconds rr);

}  // namespace beatmark
