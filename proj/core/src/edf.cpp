#include "beatmark/edf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>

#include "beatmark/errors.hpp"
#include "beatmark/signal_io.hpp"

namespace beatmark::edf {

namespace {

constexpr std::size_t kFixedHeaderBytes = 256;
constexpr std::size_t kSignalHeaderBytes = 256;

class FieldReader {
 public:
  explicit FieldReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string text(std::size_t width, const char* field) {
    if (pos_ + width > bytes_.size()) {
      throw UnreadableHeader(std::string("truncated header at field '") + field + "'");
    }
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), width);
    pos_ += width;
    auto first = out.find_first_not_of(" \0", 0, 2);
    if (first == std::string::npos) return {};
    auto last = out.find_last_not_of(" \0", std::string::npos, 2);
    return out.substr(first, last - first + 1);
  }

  double number(std::size_t width, const char* field) {
    const std::string s = text(width, field);
    if (s.empty()) throw UnreadableHeader(std::string("empty numeric field '") + field + "'");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) {
      throw UnreadableHeader(std::string("bad numeric field '") + field + "': '" + s + "'");
    }
    return v;
  }

  long long integer(std::size_t width, const char* field) {
    const double v = number(width, field);
    if (v != std::floor(v)) {
      throw UnreadableHeader(std::string("non-integer field '") + field + "'");
    }
    return static_cast<long long>(v);
  }

  void seek(std::size_t pos) { pos_ = pos; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Fixed-width ASCII field, left-aligned and space padded.
void put_field(std::vector<std::uint8_t>& out, std::string value, std::size_t width) {
  value.resize(width, ' ');
  out.insert(out.end(), value.begin(), value.end());
}

std::string format_number(double v, std::size_t width) {
  // Shortest representation that fits the field.
  for (int precision = 12; precision >= 0; --precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strlen(buf) <= width) return buf;
  }
  throw InvalidArgument("number does not fit in EDF header field");
}

}  // namespace

double SignalHeader::to_physical(double digital) const {
  return physical_min + (digital - digital_min) * (physical_max - physical_min) / (digital_max - digital_min);
}

bool SignalHeader::looks_like_ecg() const {
  const std::string l = to_lower(label);
  return l.find("ecg") != std::string::npos || l.find("ekg") != std::string::npos;
}

std::size_t Header::record_size_bytes() const {
  std::size_t n = 0;
  for (const auto& s : signals) n += static_cast<std::size_t>(s.samples_per_record);
  return n * static_cast<std::size_t>(bytes_per_sample());
}

Header parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFixedHeaderBytes) throw UnreadableHeader("file shorter than 256-byte header");
  Header h;
  FieldReader r(bytes);
  if (bytes[0] == 0xFF) {
    const std::string magic(reinterpret_cast<const char*>(bytes.data() + 1), 7);
    if (magic != "BIOSEMI") throw UnreadableHeader("BDF magic 'BIOSEMI' missing");
    h.bdf = true;
    r.seek(8);
  } else {
    const std::string version = r.text(8, "version");
    if (version != "0") throw UnreadableHeader("unsupported EDF version '" + version + "'");
  }
  h.patient = r.text(80, "patient");
  h.recording = r.text(80, "recording");
  h.start_date = r.text(8, "startdate");
  h.start_time = r.text(8, "starttime");
  h.header_bytes = static_cast<int>(r.integer(8, "header bytes"));
  h.reserved = r.text(44, "reserved");
  h.num_records = r.integer(8, "number of data records");
  h.record_duration = r.number(8, "duration of a data record");
  const long long ns = r.integer(4, "number of signals");
  if (ns <= 0 || ns > 4096) throw UnreadableHeader("implausible signal count " + std::to_string(ns));
  if (!(h.record_duration > 0.0)) throw UnreadableHeader("data record duration must be positive");

  const std::size_t n = static_cast<std::size_t>(ns);
  if (bytes.size() < kFixedHeaderBytes + n * kSignalHeaderBytes) {
    throw UnreadableHeader("file shorter than declared signal headers");
  }
  if (h.header_bytes != static_cast<int>(kFixedHeaderBytes + n * kSignalHeaderBytes)) {
    throw UnreadableHeader("header byte count does not match signal count");
  }
  h.signals.resize(n);
  for (auto& s : h.signals) s.label = r.text(16, "label");
  for (auto& s : h.signals) s.transducer = r.text(80, "transducer type");
  for (auto& s : h.signals) s.physical_dimension = r.text(8, "physical dimension");
  for (auto& s : h.signals) s.physical_min = r.number(8, "physical minimum");
  for (auto& s : h.signals) s.physical_max = r.number(8, "physical maximum");
  for (auto& s : h.signals) s.digital_min = r.number(8, "digital minimum");
  for (auto& s : h.signals) s.digital_max = r.number(8, "digital maximum");
  for (auto& s : h.signals) s.prefiltering = r.text(80, "prefiltering");
  for (auto& s : h.signals) s.samples_per_record = static_cast<int>(r.integer(8, "samples per record"));
  for (auto& s : h.signals) {
    if (s.digital_max <= s.digital_min) throw UnreadableHeader("digital maximum must exceed minimum");
    if (s.physical_max == s.physical_min) throw UnreadableHeader("physical range is empty");
    if (s.samples_per_record <= 0) throw UnreadableHeader("samples per record must be positive");
  }

  const std::size_t data_bytes = bytes.size() - static_cast<std::size_t>(h.header_bytes);
  const std::size_t rec = h.record_size_bytes();
  const auto available = static_cast<long long>(data_bytes / rec);
  if (h.num_records < 0) {
    h.num_records = available;
  } else if (h.num_records > available) {
    throw UnreadableHeader("file truncated: " + std::to_string(available) + " of " +
                           std::to_string(h.num_records) + " data records present");
  }
  return h;
}

std::size_t select_ecg_signal(const Header& header) {
  for (std::size_t i = 0; i < header.signals.size(); ++i) {
    if (header.signals[i].looks_like_ecg()) return i;
  }
  return 0;
}

std::vector<double> read_signal(std::span<const std::uint8_t> file, const Header& header,
                                std::size_t signal) {
  const auto& sig = header.signals.at(signal);
  const std::size_t bps = static_cast<std::size_t>(header.bytes_per_sample());
  const std::size_t rec = header.record_size_bytes();
  std::size_t offset_in_record = 0;
  for (std::size_t i = 0; i < signal; ++i) {
    offset_in_record += static_cast<std::size_t>(header.signals[i].samples_per_record) * bps;
  }
  const auto spr = static_cast<std::size_t>(sig.samples_per_record);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(header.num_records) * spr);
  for (long long r = 0; r < header.num_records; ++r) {
    const std::uint8_t* p = file.data() + header.header_bytes + static_cast<std::size_t>(r) * rec + offset_in_record;
    for (std::size_t k = 0; k < spr; ++k, p += bps) {
      std::int32_t d;
      if (header.bdf) {
        std::uint32_t u = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16);
        if (u & 0x800000u) u |= 0xFF000000u;
        d = static_cast<std::int32_t>(u);
      } else {
        d = static_cast<std::int16_t>(std::uint16_t(p[0]) | (std::uint16_t(p[1]) << 8));
      }
      out.push_back(sig.to_physical(static_cast<double>(d)));
    }
  }
  return out;
}

EcgRecord read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableHeader("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Header h = parse_header(bytes);
  const std::size_t idx = select_ecg_signal(h);
  EcgRecord rec;
  rec.samples = read_signal(bytes, h, idx);
  rec.sample_rate = h.signals[idx].samples_per_record / h.record_duration;
  rec.source_format = h.bdf ? SourceFormat::kBdf : SourceFormat::kEdf;
  if (rec.samples.empty()) throw EmptyRecord(path.string() + " contains no data records");
  return rec;
}

std::vector<std::uint8_t> encode(std::span<const double> samples, double sample_rate,
                                 const WriteOptions& options) {
  const double spr_exact = sample_rate * options.record_duration;
  const auto spr = static_cast<std::size_t>(std::llround(spr_exact));
  if (spr == 0 || std::abs(spr_exact - static_cast<double>(spr)) > 1e-9) {
    throw InvalidArgument("sample_rate * record_duration must be a positive integer");
  }
  const std::int32_t dmin = options.bdf ? -8388608 : -32768;
  const std::int32_t dmax = options.bdf ? 8388607 : 32767;
  const std::size_t nrec = (samples.size() + spr - 1) / spr;

  std::vector<std::uint8_t> out;
  if (options.bdf) {
    out.push_back(0xFF);
    put_field(out, "BIOSEMI", 7);
  } else {
    put_field(out, "0", 8);
  }
  put_field(out, "X X X X", 80);
  put_field(out, "Startdate X X X X", 80);
  put_field(out, "01.01.00", 8);
  put_field(out, "00.00.00", 8);
  put_field(out, std::to_string(kFixedHeaderBytes + kSignalHeaderBytes), 8);
  put_field(out, options.bdf ? "24BIT" : "", 44);
  put_field(out, std::to_string(nrec), 8);
  put_field(out, format_number(options.record_duration, 8), 8);
  put_field(out, "1", 4);
  put_field(out, options.label, 16);
  put_field(out, "", 80);
  put_field(out, options.physical_dimension, 8);
  put_field(out, format_number(options.physical_min, 8), 8);
  put_field(out, format_number(options.physical_max, 8), 8);
  put_field(out, std::to_string(dmin), 8);
  put_field(out, std::to_string(dmax), 8);
  put_field(out, "", 80);
  put_field(out, std::to_string(spr), 8);
  put_field(out, "", 32);

  const double scale = (static_cast<double>(dmax) - dmin) / (options.physical_max - options.physical_min);
  const std::size_t total = nrec * spr;
  for (std::size_t i = 0; i < total; ++i) {
    // Pad the final record with the last sample value.
    const double v = samples.empty() ? 0.0 : samples[std::min(i, samples.size() - 1)];
    double d = std::round(dmin + (v - options.physical_min) * scale);
    d = std::clamp(d, static_cast<double>(dmin), static_cast<double>(dmax));
    const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(d));
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
    if (options.bdf) out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
  }
  return out;
}

void write(const std::filesystem::path& path, std::span<const double> samples, double sample_rate,
           const WriteOptions& options) {
  const auto bytes = encode(samples, sample_rate, options);
  write_text_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace beatmark::edf
