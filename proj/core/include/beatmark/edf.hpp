#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "beatmark/types.hpp"

namespace beatmark::edf {

struct SignalHeader {
  std::string label;
  std::string transducer;
  std::string physical_dimension;
  double physical_min = 0.0;
  double physical_max = 0.0;
  double digital_min = 0.0;
  double digital_max = 0.0;
  std::string prefiltering;
  int samples_per_record = 0;

  // pmin + (d - dmin) * (pmax - pmin) / (dmax - dmin)
  double to_physical(double digital) const;
  bool looks_like_ecg() const;
};

struct Header {
  bool bdf = false;  // 24-bit BioSemi variant
  std::string patient;
  std::string recording;
  std::string start_date;
  std::string start_time;
  int header_bytes = 0;
  std::string reserved;
  long long num_records = -1;
  double record_duration = 0.0;  // seconds
  std::vector<SignalHeader> signals;

  int bytes_per_sample() const { return bdf ? 3 : 2; }
  std::size_t record_size_bytes() const;
};

// Parses the fixed 256-byte header plus per-signal headers. Throws
// UnreadableHeader with the offending field name.
Header parse_header(std::span<const std::uint8_t> bytes);

// Index of the first ECG-labelled signal, else 0.
std::size_t select_ecg_signal(const Header& header);

// Reads one signal in physical units.
std::vector<double> read_signal(std::span<const std::uint8_t> file, const Header& header,
                                std::size_t signal);

EcgRecord read(const std::filesystem::path& path);

// Writes a single-signal EDF (or BDF) file. Used for fixtures and for
// converting records; samples are quantised to the digital range.
struct WriteOptions {
  bool bdf = false;
  std::string label = "ECG";
  std::string physical_dimension = "mV";
  double physical_min = -5.0;
  double physical_max = 5.0;
  double record_duration = 1.0;
};
void write(const std::filesystem::path& path, std::span<const double> samples, double sample_rate,
           const WriteOptions& options = {});
std::vector<std::uint8_t> encode(std::span<const double> samples, double sample_rate,
                                 const WriteOptions& options = {});

}  // namespace beatmark::edf
