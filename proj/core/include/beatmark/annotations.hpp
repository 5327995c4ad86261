#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

// Closed label vocabulary for reference annotations: the targeted
// irregularity categories plus "Normal beat".
enum class AnnotationLabel {
  kNormal,
  kExtraBeat,
  kMissedBeat,
  kMisplacedBeat,
  kNoisyBeat,
  kVentricularFlutterWave,
  kStartVentricularFlutter,
  kEndVentricularFlutter,
  kIsolatedQrsArtifact,
  kChangeInSignalQuality,
  kRhythmChange,
  kNonConductedPWave,
  kPacedBeat,
  kAtrialPremature,
  kVentricularEscape,
  kFusionPacedNormal,
  kNodalPremature,
  kLeftBundleBranchBlock,
  kUnclassifiable,
  kRightBundleBranchBlock,
  kSupraventricularPremature,
  kPrematureVentricular,
  kUnidentifiedComplex,
};

std::string_view describe(AnnotationLabel label);

struct Annotation {
  Seconds time = 0.0;
  AnnotationLabel label = AnnotationLabel::kUnclassifiable;
  // Original mnemonic, e.g. "N", "V", "+", kept for beat/non-beat decisions.
  std::string code;

  bool is_beat() const;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct ReferenceAnnotations {
  std::vector<Annotation> entries;

  std::size_t beat_count() const;
  std::vector<Seconds> beat_times() const;
};

// Maps a WFDB mnemonic ("N", "V", "A", "~", ...) to the label vocabulary.
// Returns nullopt for mnemonics outside the vocabulary.
std::optional<AnnotationLabel> label_from_mnemonic(std::string_view code);

// True when the WFDB mnemonic denotes a beat (QRS) annotation.
bool is_beat_mnemonic(std::string_view code);

}  // namespace beatmark
