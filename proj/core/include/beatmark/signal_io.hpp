#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beatmark/annotations.hpp"
#include "beatmark/types.hpp"

namespace beatmark {

enum class InputFormat { kAuto, kTxt, kEdf, kBdf, kWfdb, kRri };

std::optional<InputFormat> parse_input_format(std::string_view s);

// Reads a single-lead ECG (or an RRI list) from disk.
//
// TXT: one sample per line, optional first line "fs=<Hz>". Lines with several
// tab- or space-separated columns use the second column. Lines starting with
// '#' are ignored.
// EDF/BDF: the first signal whose label mentions ECG/EKG, else signal 0.
// Digital values are mapped to physical units with the header's affine map.
// WFDB: `path` names the .hea file (or the record name without extension);
// formats 16, 212 and 80 are supported; the first ECG-like signal is read.
// RRI: one interval in seconds per line; produces an RRI_ONLY record.
//
// Errors: UnreadableHeader, MissingSampleRate, UnsupportedFormat, EmptyRecord.
EcgRecord read_record(const std::filesystem::path& path, InputFormat format = InputFormat::kAuto,
                      std::optional<double> sample_rate_override = std::nullopt);

// WFDB binary annotation file (MIT format, e.g. "100.atr") or a two-column
// text export "<seconds> <mnemonic>". For WFDB files the sampling frequency
// is taken from the annotation stream when present, else from `sample_rate`.
ReferenceAnnotations read_reference_annotations(const std::filesystem::path& path,
                                                std::optional<double> sample_rate = std::nullopt);

// One line per output-class beat, "%.6f\n", ascending.
void write_rtimes(std::span<const BeatMark> beats, const std::filesystem::path& path);
std::string format_rtimes(std::span<const BeatMark> beats);

// "start\tend\treason\n" per region, 6 decimals. Throws OverlappingRegions
// when regions overlap or are out of order (touching is allowed).
void write_bad_intervals(std::span<const Region> regions, const std::filesystem::path& path);
std::string format_bad_intervals(std::span<const Region> regions);

// Parses an .rtimes file back into times.
std::vector<Seconds> read_rtimes(const std::filesystem::path& path);
std::vector<Region> read_bad_intervals(const std::filesystem::path& path);

// Writes `content` to `path` atomically enough for our purposes; throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace beatmark
