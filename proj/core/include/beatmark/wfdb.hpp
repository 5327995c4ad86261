#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "beatmark/annotations.hpp"
#include "beatmark/types.hpp"

namespace beatmark::wfdb {

struct SignalSpec {
  std::string file_name;
  int format = 0;
  double gain = 200.0;  // adu per physical unit
  double baseline = 0.0;
  std::string units = "mV";
  int adc_resolution = 0;
  int adc_zero = 0;
  int initial_value = 0;
  std::string description;

  double to_physical(int digital) const { return (digital - baseline) / gain; }
};

struct RecordHeader {
  std::string name;
  double sample_rate = 250.0;
  long long num_samples = 0;  // per signal, 0 when unknown
  std::vector<SignalSpec> signals;
};

// Parses the text of a .hea file (single-segment records only).
RecordHeader parse_header(std::string_view text);

// Index of the first signal whose description looks like an ECG lead
// (MLII, V1..V6, ECG, ...), else 0.
std::size_t select_ecg_signal(const RecordHeader& header);

// Decodes all signals stored in one .dat file. `signals` lists the specs of
// the signals interleaved in that file, in header order. Returns one vector
// of digital values per signal.
std::vector<std::vector<int>> decode_samples(std::span<const std::uint8_t> bytes,
                                             std::span<const SignalSpec> signals);

// `path` is the .hea file or the record path without extension.
EcgRecord read(const std::filesystem::path& path);

// Decodes an MIT-format annotation stream. `sample_rate` converts sample
// numbers to seconds. Unknown codes are kept as Unclassifiable with a warning.
ReferenceAnnotations decode_annotations(std::span<const std::uint8_t> bytes, double sample_rate);

// WFDB numeric annotation code to mnemonic (e.g. 1 -> "N"); empty if unknown.
std::string_view mnemonic(int code);
int code_from_mnemonic(std::string_view mnemonic);

// Encodes annotations in MIT format (used for fixtures). Times are rounded to
// the nearest sample.
std::vector<std::uint8_t> encode_annotations(const ReferenceAnnotations& annotations, double sample_rate);

// Encodes samples as format 212 (two signals per 3 bytes) or 16.
std::vector<std::uint8_t> encode_samples(std::span<const std::vector<int>> signals, int format);

}  // namespace beatmark::wfdb
