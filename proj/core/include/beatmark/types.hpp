#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beatmark {

// Seconds from record start. Sample indices are derived from these, never
// stored in outputs.
using Seconds = double;

enum class SourceFormat { kTxt, kEdf, kBdf, kWfdb, kRriOnly };

std::string_view to_string(SourceFormat f);
std::optional<SourceFormat> parse_source_format(std::string_view s);

// Uniformly sampled single-lead ECG.
struct EcgRecord {
  std::vector<double> samples;  // millivolts
  double sample_rate = 0.0;     // Hz
  Seconds start_offset = 0.0;
  SourceFormat source_format = SourceFormat::kTxt;
  bool inverted = false;
  // Beat times for RRI-only sources; empty for waveform sources.
  std::vector<Seconds> rri_beat_times;

  bool has_waveform() const { return !samples.empty(); }
  Seconds duration() const;

  friend bool operator==(const EcgRecord&, const EcgRecord&) = default;
};

enum class BeatClass {
  kIncluded,
  kExcluded,
  kAdjusted,
  kInterpolated,
  kRemoved,
  kTraining,
};

// Why a beat holds its class. BT1..BT8 follow the correction table; the rest
// are stage outcomes that do not carry a beat type.
enum class BeatReason {
  kNone,
  kBt1,  // short-long pair without P-wave, adjusted
  kBt2,  // premature atrial pattern, excluded
  kBt3,  // gradual increase, included
  kBt4,  // sudden increase beyond the physiological bound, excluded
  kBt5,  // gradual decrease, included
  kBt6,  // extra beat, removed
  kBt7,  // long interval, interpolated
  kBt8,  // short-long pair, adjusted
  kLowScore,    // demoted by the detector post-filter
  kOutlier,     // flagged by regional statistics, not yet resolved
  kUncorrected, // left excluded after all correction loops
  kManual,      // changed by a reviewer
};

enum class Provenance { kDetector, kCorrection, kManual };

enum class PWave { kUnevaluated, kYes, kNo };

struct BeatMark {
  Seconds time = 0.0;
  BeatClass cls = BeatClass::kIncluded;
  BeatReason reason = BeatReason::kNone;
  Provenance provenance = Provenance::kDetector;
  PWave pwave = PWave::kUnevaluated;
  double noise_value = 0.0;
  bool noisy = false;

  friend bool operator==(const BeatMark&, const BeatMark&) = default;
};

// True for classes whose beats appear in the artifact-free RRI output.
bool is_output_class(BeatClass c);
// True for every class except REMOVED.
inline bool is_active(const BeatMark& b) { return b.cls != BeatClass::kRemoved; }

std::string_view to_string(BeatClass c);
std::string_view to_string(BeatReason r);
std::string_view to_string(Provenance p);
std::string_view to_string(PWave p);
std::optional<BeatClass> parse_beat_class(std::string_view s);
std::optional<BeatReason> parse_beat_reason(std::string_view s);
std::optional<Provenance> parse_provenance(std::string_view s);
std::optional<PWave> parse_pwave(std::string_view s);

enum class RegionReason { kTraining, kIrregular, kNoise, kManual };

std::string_view to_string(RegionReason r);
std::optional<RegionReason> parse_region_reason(std::string_view s);

struct Region {
  Seconds start = 0.0;
  Seconds end = 0.0;
  RegionReason reason = RegionReason::kIrregular;

  friend bool operator==(const Region&, const Region&) = default;
};

struct DetectorParams {
  double qrs_threshold = 0.3;
  double post_threshold = 0.2;
  double amplifier = 1.0;
  bool invert = false;

  friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

struct IrregularityParams {
  double rri_upper_frac = 1.20;
  double rri_lower_frac = 0.80;
  double grad_inc_frac = 0.10;
  double grad_dec_frac = 0.10;
  Seconds hard_upper_bound = 1.5;
  Seconds accept_min = 0.3;
  Seconds accept_max = 1.8;
  int regional_window = 20;  // intervals on each side

  friend bool operator==(const IrregularityParams&, const IrregularityParams&) = default;
};

struct CorrectionParams {
  int loops = 2;
  bool analyze_pwaves = true;
  // Multiplies the P-wave prominence criterion; values below 1 make the
  // detector more sensitive.
  double pwave_sensitivity = 1.0;

  friend bool operator==(const CorrectionParams&, const CorrectionParams&) = default;
};

// Validates parameter invariants, throwing InvalidArgument.
void validate(const DetectorParams& p);
void validate(const IrregularityParams& p);
void validate(const CorrectionParams& p);

}  // namespace beatmark
