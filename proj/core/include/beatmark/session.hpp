#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark {

inline constexpr int kSessionFormatVersion = 1;

enum class EditKind { kDelete, kAdd, kInterpolate, kRelocate, kInvertSignal, kRegionOverride };

std::string_view to_string(EditKind k);
std::optional<EditKind> parse_edit_kind(std::string_view s);

// One reviewer action. Targets are beat indices into the session beat array
// (or region indices for REGION_OVERRIDE) at the time the edit was applied.
struct EditEntry {
  int ordinal = 0;
  EditKind kind = EditKind::kDelete;
  int target = -1;
  // Kind-specific values: ADD/RELOCATE time, INTERPOLATE count,
  // REGION_OVERRIDE start/end.
  std::vector<double> values;
  std::string note;
  std::string timestamp;  // ISO-8601 as written by the reviewer, may be empty

  friend bool operator==(const EditEntry&, const EditEntry&) = default;
};

struct TestSpan {
  Seconds start = 0.0;
  Seconds duration = 0.0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const TestSpan&, const TestSpan&) = default;
};

struct SessionParams {
  DetectorParams detector;
  IrregularityParams irregularity;
  CorrectionParams correction;
  double noise_window_ms = 200.0;
  std::optional<Seconds> test_duration;

  friend bool operator==(const SessionParams&, const SessionParams&) = default;
};

// Validation block; values are free-form named numbers so the report can grow
// without schema changes.
struct ValidationBlock {
  std::map<std::string, double> metrics;
  std::map<std::string, double> noise_accuracy_by_record;

  friend bool operator==(const ValidationBlock&, const ValidationBlock&) = default;
};

struct RecordInfo {
  std::string path;
  SourceFormat format = SourceFormat::kTxt;
  double sample_rate = 0.0;
  Seconds duration = 0.0;
  Seconds start_offset = 0.0;
  bool inverted = false;

  friend bool operator==(const RecordInfo&, const RecordInfo&) = default;
};

// Full pipeline state. Beat times are seconds from the start of the original
// record, even when only a test span was processed.
struct Session {
  int format_version = kSessionFormatVersion;
  RecordInfo record;
  std::vector<Seconds> rri_beat_times;  // embedded input for RRI-only sources
  SessionParams params;
  std::optional<TestSpan> test_span;
  std::vector<BeatMark> beats;
  std::vector<Region> regions;
  std::vector<EditEntry> edit_log;
  std::optional<ValidationBlock> validation;

  friend bool operator==(const Session&, const Session&) = default;
};

// Checks beats strictly increasing and regions valid and non-overlapping.
// Throws CorruptSession describing the first violation.
void check_consistent(const Session& s);

std::string export_session_string(const Session& s);
Session import_session_string(std::string_view text);

void export_session(const Session& s, const std::filesystem::path& path);
Session import_session(const std::filesystem::path& path);

}  // namespace beatmark
