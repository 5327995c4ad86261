#include "beatmark/types.hpp"

#include <array>
#include <utility>

#include "beatmark/errors.hpp"

namespace beatmark {

namespace {

template <typename E, std::size_t N>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> reverse_lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                                std::string_view s) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

constexpr std::array<std::pair<SourceFormat, std::string_view>, 5> kFormats{{
    {SourceFormat::kTxt, "TXT"},
    {SourceFormat::kEdf, "EDF"},
    {SourceFormat::kBdf, "BDF"},
    {SourceFormat::kWfdb, "WFDB"},
    {SourceFormat::kRriOnly, "RRI_ONLY"},
}};

constexpr std::array<std::pair<BeatClass, std::string_view>, 6> kClasses{{
    {BeatClass::kIncluded, "INCLUDED"},
    {BeatClass::kExcluded, "EXCLUDED"},
    {BeatClass::kAdjusted, "ADJUSTED"},
    {BeatClass::kInterpolated, "INTERPOLATED"},
    {BeatClass::kRemoved, "REMOVED"},
    {BeatClass::kTraining, "TRAINING"},
}};

constexpr std::array<std::pair<BeatReason, std::string_view>, 13> kReasons{{
    {BeatReason::kNone, "NONE"},
    {BeatReason::kBt1, "BT1"},
    {BeatReason::kBt2, "BT2"},
    {BeatReason::kBt3, "BT3"},
    {BeatReason::kBt4, "BT4"},
    {BeatReason::kBt5, "BT5"},
    {BeatReason::kBt6, "BT6"},
    {BeatReason::kBt7, "BT7"},
    {BeatReason::kBt8, "BT8"},
    {BeatReason::kLowScore, "LOW_SCORE"},
    {BeatReason::kOutlier, "OUTLIER"},
    {BeatReason::kUncorrected, "UNCORRECTED"},
    {BeatReason::kManual, "MANUAL"},
}};

constexpr std::array<std::pair<Provenance, std::string_view>, 3> kProvenance{{
    {Provenance::kDetector, "DETECTOR"},
    {Provenance::kCorrection, "CORRECTION"},
    {Provenance::kManual, "MANUAL"},
}};

constexpr std::array<std::pair<PWave, std::string_view>, 3> kPWave{{
    {PWave::kUnevaluated, "UNEVALUATED"},
    {PWave::kYes, "YES"},
    {PWave::kNo, "NO"},
}};

constexpr std::array<std::pair<RegionReason, std::string_view>, 4> kRegionReasons{{
    {RegionReason::kTraining, "TRAINING"},
    {RegionReason::kIrregular, "IRREGULAR"},
    {RegionReason::kNoise, "NOISE"},
    {RegionReason::kManual, "MANUAL"},
}};

}  // namespace

Seconds EcgRecord::duration() const {
  if (has_waveform()) return static_cast<double>(samples.size()) / sample_rate;
  if (!rri_beat_times.empty()) return rri_beat_times.back();
  return 0.0;
}

bool is_output_class(BeatClass c) {
  return c == BeatClass::kIncluded || c == BeatClass::kAdjusted || c == BeatClass::kInterpolated;
}

std::string_view to_string(SourceFormat f) { return lookup(kFormats, f); }
std::string_view to_string(BeatClass c) { return lookup(kClasses, c); }
std::string_view to_string(BeatReason r) { return lookup(kReasons, r); }
std::string_view to_string(Provenance p) { return lookup(kProvenance, p); }
std::string_view to_string(PWave p) { return lookup(kPWave, p); }
std::string_view to_string(RegionReason r) { return lookup(kRegionReasons, r); }

std::optional<SourceFormat> parse_source_format(std::string_view s) { return reverse_lookup(kFormats, s); }
std::optional<BeatClass> parse_beat_class(std::string_view s) { return reverse_lookup(kClasses, s); }
std::optional<BeatReason> parse_beat_reason(std::string_view s) { return reverse_lookup(kReasons, s); }
std::optional<Provenance> parse_provenance(std::string_view s) { return reverse_lookup(kProvenance, s); }
std::optional<PWave> parse_pwave(std::string_view s) { return reverse_lookup(kPWave, s); }
std::optional<RegionReason> parse_region_reason(std::string_view s) {
  return reverse_lookup(kRegionReasons, s);
}

void validate(const DetectorParams& p) {
  if (!(p.amplifier > 0.0)) throw InvalidArgument("amplifier must be positive");
  if (!(p.qrs_threshold >= 0.0) || !(p.post_threshold >= 0.0)) {
    throw InvalidArgument("detector thresholds must be non-negative");
  }
}

void validate(const IrregularityParams& p) {
  if (!(p.rri_lower_frac > 0.0 && p.rri_lower_frac < 1.0 && p.rri_upper_frac > 1.0)) {
    throw InvalidArgument("regional bounds must satisfy 0 < lower < 1 < upper");
  }
  if (!(p.grad_inc_frac > 0.0) || !(p.grad_dec_frac > 0.0)) {
    throw InvalidArgument("gradual thresholds must be positive");
  }
  if (!(p.accept_min > 0.0 && p.accept_min < p.hard_upper_bound && p.hard_upper_bound <= p.accept_max)) {
    throw InvalidArgument("absolute bounds must be ordered");
  }
  if (p.regional_window < 1) throw InvalidArgument("regional window must be at least 1");
}

void validate(const CorrectionParams& p) {
  if (p.loops < 1) throw InvalidArgument("loops must be >= 1");
  if (!(p.pwave_sensitivity > 0.0)) throw InvalidArgument("pwave sensitivity must be positive");
}

}  // namespace beatmark
