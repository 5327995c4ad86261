#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "beatmark/annotations.hpp"
#include "beatmark/correction.hpp"
#include "beatmark/session.hpp"
#include "beatmark/signal_io.hpp"
#include "beatmark/types.hpp"
#include "beatmark/validation.hpp"

namespace beatmark {

inline constexpr Seconds kMinimumDuration = 120.0;

enum class TestRegionMode { kRandom, kReuse };

struct AnalysisParams {
  DetectorParams detector;
  IrregularityParams irregularity;
  CorrectionParams correction;
  double noise_window_ms = 200.0;
};

struct PipelineConfig {
  std::filesystem::path input;
  InputFormat format = InputFormat::kAuto;
  std::optional<double> sample_rate_override;
  AnalysisParams params;
  std::optional<Seconds> test_duration;
  TestRegionMode test_region = TestRegionMode::kRandom;
  std::uint64_t seed = 0;
  // Session holding the span replayed in REUSE mode.
  std::optional<std::filesystem::path> reuse_session;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> reference;
};

// RANDOM: a span of `duration` placed uniformly at a 1 ms resolution using a
// generator seeded with `seed`. REUSE: `saved` verbatim. Throws
// MinimumDurationError, DurationTooLong, NoSavedRegion.
TestSpan select_test_region(Seconds record_duration, Seconds duration, TestRegionMode mode, std::uint64_t seed,
                            const std::optional<TestSpan>& saved = std::nullopt);

// Sub-record covering the span, with times restarting at zero.
EcgRecord slice_record(const EcgRecord& record, const TestSpan& span);

struct AnalysisResult {
  std::vector<BeatMark> identified;  // classification after outlier identification
  std::vector<BeatMark> beats;       // after correction
  std::vector<Region> identified_regions;
  std::vector<Region> regions;
  CorrectionReport correction;
  std::size_t epochs_pre = 0;
  std::size_t epochs_post = 0;
  Seconds duration = 0.0;
};

// Beat identification (or RRI import), noise profile, P-wave analysis,
// outlier identification, correction loops and region marking. Throws
// MinimumDurationError for records shorter than two minutes. When `stage` is
// given it names the stage in progress, for error messages.
AnalysisResult analyze_record(const EcgRecord& record, const AnalysisParams& params, std::string* stage = nullptr);

struct PipelineResult {
  Session session;
  AnalysisResult analysis;
  std::optional<ValidationReport> identified_validation;
  std::optional<ValidationReport> validation;
  std::string report_json;
  std::filesystem::path rtimes_path;
  std::filesystem::path bi_path;
  std::filesystem::path session_path;
  std::filesystem::path report_path;
};

// True when the file is a session export.
bool is_session_file(const std::filesystem::path& path);

// Runs every stage for one input and writes <stem>.rtimes, <stem>.bi,
// <stem>.session.json and the report. A session file as input regenerates the
// outputs from its beats without re-running detection.
PipelineResult run_pipeline(const PipelineConfig& config, std::string* stage = nullptr);

// Plain-text summary table of a finished run.
std::string format_summary(const PipelineResult& result);

}  // namespace beatmark
