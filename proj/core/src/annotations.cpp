#include "beatmark/annotations.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace beatmark {

namespace {

constexpr std::array<std::pair<std::string_view, AnnotationLabel>, 20> kMnemonics{{
    {"N", AnnotationLabel::kNormal},
    {"L", AnnotationLabel::kLeftBundleBranchBlock},
    {"R", AnnotationLabel::kRightBundleBranchBlock},
    {"a", AnnotationLabel::kAtrialPremature},
    {"A", AnnotationLabel::kAtrialPremature},
    {"V", AnnotationLabel::kPrematureVentricular},
    {"J", AnnotationLabel::kNodalPremature},
    {"S", AnnotationLabel::kSupraventricularPremature},
    {"E", AnnotationLabel::kVentricularEscape},
    {"/", AnnotationLabel::kPacedBeat},
    {"Q", AnnotationLabel::kUnclassifiable},
    {"f", AnnotationLabel::kFusionPacedNormal},
    {"!", AnnotationLabel::kVentricularFlutterWave},
    {"[", AnnotationLabel::kStartVentricularFlutter},
    {"]", AnnotationLabel::kEndVentricularFlutter},
    {"|", AnnotationLabel::kIsolatedQrsArtifact},
    {"~", AnnotationLabel::kChangeInSignalQuality},
    {"+", AnnotationLabel::kRhythmChange},
    {"x", AnnotationLabel::kNonConductedPWave},
    {"X", AnnotationLabel::kUnidentifiedComplex},
}};

// Beat mnemonics as defined by WFDB's isqrs table.
constexpr std::array<std::string_view, 19> kBeatMnemonics{
    "N", "L", "R", "a", "V", "F", "J", "A", "S", "E", "j", "/", "Q", "B", "?", "e", "n", "f", "r"};

}  // namespace

std::string_view describe(AnnotationLabel label) {
  switch (label) {
    case AnnotationLabel::kNormal: return "Normal beat";
    case AnnotationLabel::kExtraBeat: return "Extra beat";
    case AnnotationLabel::kMissedBeat: return "Missed beat";
    case AnnotationLabel::kMisplacedBeat: return "Misplaced beat";
    case AnnotationLabel::kNoisyBeat: return "Noisy beat";
    case AnnotationLabel::kVentricularFlutterWave: return "Ventricular flutter wave";
    case AnnotationLabel::kStartVentricularFlutter: return "Start of ventricular flutter/fibrillation";
    case AnnotationLabel::kEndVentricularFlutter: return "End of ventricular flutter/fibrillation";
    case AnnotationLabel::kIsolatedQrsArtifact: return "Isolated QRS-like artifact";
    case AnnotationLabel::kChangeInSignalQuality: return "Change in signal quality";
    case AnnotationLabel::kRhythmChange: return "Rhythm change";
    case AnnotationLabel::kNonConductedPWave: return "Non-conducted P-wave (blocked APC)";
    case AnnotationLabel::kPacedBeat: return "Paced beat";
    case AnnotationLabel::kAtrialPremature: return "Atrial premature beat";
    case AnnotationLabel::kVentricularEscape: return "Ventricular escape beat";
    case AnnotationLabel::kFusionPacedNormal: return "Fusion of paced and normal beat";
    case AnnotationLabel::kNodalPremature: return "Nodal (junctional) premature beat";
    case AnnotationLabel::kLeftBundleBranchBlock: return "Left bundle branch block beat";
    case AnnotationLabel::kUnclassifiable: return "Unclassifiable beat";
    case AnnotationLabel::kRightBundleBranchBlock: return "Right bundle branch block beat";
    case AnnotationLabel::kSupraventricularPremature:
      return "Supraventricular premature or ectopic beat (atrial or nodal)";
    case AnnotationLabel::kPrematureVentricular: return "Premature ventricular contraction";
    case AnnotationLabel::kUnidentifiedComplex: return "Unidentified complexes";
  }
  return "Unclassifiable beat";
}

std::optional<AnnotationLabel> label_from_mnemonic(std::string_view code) {
  for (const auto& [m, label] : kMnemonics) {
    if (m == code) return label;
  }
  return std::nullopt;
}

bool is_beat_mnemonic(std::string_view code) {
  return std::find(kBeatMnemonics.begin(), kBeatMnemonics.end(), code) != kBeatMnemonics.end();
}

bool Annotation::is_beat() const { return is_beat_mnemonic(code); }

std::size_t ReferenceAnnotations::beat_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const Annotation& a) { return a.is_beat(); }));
}

std::vector<Seconds> ReferenceAnnotations::beat_times() const {
  std::vector<Seconds> out;
  for (const auto& a : entries) {
    if (a.is_beat()) out.push_back(a.time);
  }
  return out;
}

}  // namespace beatmark
