#include "beatmark/wfdb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "beatmark/errors.hpp"
#include "beatmark/log.hpp"

namespace beatmark::wfdb {

namespace {

// Index is the WFDB annotation code.
constexpr std::array<std::string_view, 42> kMnemonics{
    "",  "N", "L", "R", "a", "V", "F", "J", "A", "S", "E", "j", "/", "Q", "~", "",  "|", "",  "s", "T", "*",
    "D", "\"", "=", "p", "B", "^", "t", "+", "u", "?", "!", "[", "]", "e", "n", "@", "x", "f", "(", ")", "r"};

constexpr int kSkip = 59;
constexpr int kNum = 60;
constexpr int kSub = 61;
constexpr int kChn = 62;
constexpr int kAux = 63;

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableHeader("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str()) throw UnreadableHeader(std::string("bad ") + what + " '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UnreadableHeader(std::string("bad ") + what + " '" + s + "'");
  }
  return static_cast<int>(v);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string_view mnemonic(int code) {
  if (code < 0 || code >= static_cast<int>(kMnemonics.size())) return {};
  return kMnemonics[static_cast<std::size_t>(code)];
}

int code_from_mnemonic(std::string_view m) {
  if (m.empty()) return -1;
  for (std::size_t i = 1; i < kMnemonics.size(); ++i) {
    if (kMnemonics[i] == m) return static_cast<int>(i);
  }
  return -1;
}

RecordHeader parse_header(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw UnreadableHeader("empty WFDB header");

  RecordHeader h;
  std::istringstream rec(lines[0]);
  std::string name, nsig_s, fs_s, nsamp_s;
  rec >> name >> nsig_s;
  if (name.empty() || nsig_s.empty()) throw UnreadableHeader("record line needs name and signal count");
  if (name.find('/') != std::string::npos) throw UnsupportedFormat("multi-segment WFDB records");
  h.name = name;
  const int nsig = parse_int(nsig_s, "signal count");
  if (rec >> fs_s) {
    // "360", "360/1", "360(0)"
    h.sample_rate = parse_double(fs_s.substr(0, fs_s.find_first_of("/(")), "sampling frequency");
    if (!(h.sample_rate > 0.0)) throw UnreadableHeader("sampling frequency must be positive");
  }
  if (rec >> nsamp_s) h.num_samples = parse_int(nsamp_s, "sample count");
  if (nsig < 0 || static_cast<std::size_t>(nsig) + 1 > lines.size()) {
    throw UnreadableHeader("header declares more signals than signal lines");
  }

  for (int i = 0; i < nsig; ++i) {
    std::istringstream sl(lines[static_cast<std::size_t>(i) + 1]);
    SignalSpec s;
    std::string fmt, gain, res, zero, init, checksum, block;
    sl >> s.file_name >> fmt;
    if (fmt.empty()) throw UnreadableHeader("signal line needs file name and format");
    s.format = parse_int(fmt.substr(0, fmt.find_first_of("x:+")), "signal format");
    if (sl >> gain) {
      // "200", "200(1024)/mV", "200/mV"
      const auto slash = gain.find('/');
      if (slash != std::string::npos) {
        s.units = gain.substr(slash + 1);
        gain = gain.substr(0, slash);
      }
      const auto paren = gain.find('(');
      bool has_baseline = false;
      if (paren != std::string::npos) {
        s.baseline = parse_double(gain.substr(paren + 1, gain.find(')') - paren - 1), "baseline");
        has_baseline = true;
        gain = gain.substr(0, paren);
      }
      s.gain = parse_double(gain, "gain");
      if (s.gain == 0.0) s.gain = 200.0;
      if (sl >> res) s.adc_resolution = parse_int(res, "ADC resolution");
      if (sl >> zero) s.adc_zero = parse_int(zero, "ADC zero");
      if (!has_baseline) s.baseline = s.adc_zero;
      if (sl >> init) s.initial_value = parse_int(init, "initial value");
      sl >> checksum >> block;
      std::getline(sl, s.description);
      const auto d = s.description.find_first_not_of(" \t");
      s.description = d == std::string::npos ? std::string() : s.description.substr(d);
    }
    if (s.format != 16 && s.format != 212 && s.format != 80) {
      throw UnsupportedFormat("WFDB signal format " + std::to_string(s.format));
    }
    h.signals.push_back(std::move(s));
  }
  return h;
}

std::size_t select_ecg_signal(const RecordHeader& header) {
  static const std::array<std::string, 12> kLeads{"mlii", "mli", "mliii", "ecg", "ekg", "v1", "v2",
                                                  "v3", "v4", "v5", "v6", "lead"};
  for (std::size_t i = 0; i < header.signals.size(); ++i) {
    const std::string d = lower(header.signals[i].description);
    for (const auto& lead : kLeads) {
      if (d.rfind(lead, 0) == 0 || d.find(lead) != std::string::npos) return i;
    }
  }
  return 0;
}

std::vector<std::vector<int>> decode_samples(std::span<const std::uint8_t> bytes,
                                             std::span<const SignalSpec> signals) {
  const std::size_t nsig = signals.size();
  std::vector<std::vector<int>> out(nsig);
  if (nsig == 0) return out;
  const int format = signals[0].format;
  for (const auto& s : signals) {
    if (s.format != format) throw UnsupportedFormat("mixed formats within one WFDB signal file");
  }
  std::size_t k = 0;  // running sample index across the interleaved stream
  auto push = [&](int v) {
    out[k % nsig].push_back(v);
    ++k;
  };
  switch (format) {
    case 16:
      for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
        push(static_cast<std::int16_t>(std::uint16_t(bytes[i]) | (std::uint16_t(bytes[i + 1]) << 8)));
      }
      break;
    case 80:
      for (std::uint8_t b : bytes) push(static_cast<int>(b) - 128);
      break;
    case 212:
      for (std::size_t i = 0; i + 1 < bytes.size(); i += 3) {
        int a = bytes[i] | ((bytes[i + 1] & 0x0F) << 8);
        if (a & 0x800) a -= 0x1000;
        push(a);
        if (i + 2 < bytes.size()) {
          int b = bytes[i + 2] | ((bytes[i + 1] & 0xF0) << 4);
          if (b & 0x800) b -= 0x1000;
          push(b);
        }
      }
      break;
    default:
      throw UnsupportedFormat("WFDB signal format " + std::to_string(format));
  }
  // Drop a trailing partial frame.
  const std::size_t frames = k / nsig;
  for (auto& v : out) v.resize(frames);
  return out;
}

EcgRecord read(const std::filesystem::path& path) {
  std::filesystem::path hea = path;
  if (hea.extension() != ".hea") hea += ".hea";
  std::ifstream in(hea);
  if (!in) throw UnreadableHeader("cannot open " + hea.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const RecordHeader h = parse_header(text);
  if (h.signals.empty()) throw EmptyRecord(hea.string() + " declares no signals");
  const std::size_t target = select_ecg_signal(h);

  // Signals sharing a file are interleaved in header order.
  const std::string& file = h.signals[target].file_name;
  std::vector<SignalSpec> group;
  std::size_t pos_in_group = 0;
  for (std::size_t i = 0; i < h.signals.size(); ++i) {
    if (h.signals[i].file_name == file) {
      if (i == target) pos_in_group = group.size();
      group.push_back(h.signals[i]);
    }
  }
  const auto bytes = slurp(hea.parent_path() / file);
  auto decoded = decode_samples(bytes, group);
  auto& digital = decoded[pos_in_group];
  if (h.num_samples > 0 && static_cast<long long>(digital.size()) > h.num_samples) {
    digital.resize(static_cast<std::size_t>(h.num_samples));
  }
  EcgRecord rec;
  rec.sample_rate = h.sample_rate;
  rec.source_format = SourceFormat::kWfdb;
  rec.samples.reserve(digital.size());
  const auto& spec = h.signals[target];
  for (int d : digital) rec.samples.push_back(spec.to_physical(d));
  if (rec.samples.empty()) throw EmptyRecord(hea.string() + " has no samples");
  return rec;
}

ReferenceAnnotations decode_annotations(std::span<const std::uint8_t> bytes, double sample_rate) {
  if (!(sample_rate > 0.0)) throw MalformedAnnotation("sample rate required to decode annotations");
  ReferenceAnnotations out;
  long long t = 0;
  std::map<std::string, int> unknown;
  std::size_t i = 0;
  auto word_at = [&](std::size_t p) { return std::uint16_t(bytes[p]) | (std::uint16_t(bytes[p + 1]) << 8); };
  while (i + 1 < bytes.size()) {
    const std::uint16_t w = word_at(i);
    i += 2;
    const int code = w >> 10;
    const int value = w & 0x3FF;
    if (code == 0 && value == 0) break;
    switch (code) {
      case kSkip: {
        if (i + 3 >= bytes.size()) throw MalformedAnnotation("truncated SKIP");
        // PDP-11 long: high word first.
        const std::uint32_t hi = word_at(i), lo = word_at(i + 2);
        t += static_cast<std::int32_t>((hi << 16) | lo);
        i += 4;
        break;
      }
      case kNum:
      case kSub:
      case kChn:
        break;
      case kAux:
        i += static_cast<std::size_t>(value + (value & 1));
        if (i > bytes.size()) throw MalformedAnnotation("truncated AUX field");
        break;
      default: {
        t += value;
        Annotation a;
        a.time = static_cast<double>(t) / sample_rate;
        a.code = std::string(mnemonic(code));
        if (a.code.empty()) a.code = "#" + std::to_string(code);
        if (auto label = label_from_mnemonic(a.code)) {
          a.label = *label;
        } else {
          a.label = AnnotationLabel::kUnclassifiable;
          ++unknown[a.code];
        }
        out.entries.push_back(std::move(a));
        break;
      }
    }
  }
  for (const auto& [code, n] : unknown) {
    log_warning("annotation code '" + code + "' outside label vocabulary (" + std::to_string(n) +
                "x), kept as Unclassifiable");
  }
  return out;
}

std::vector<std::uint8_t> encode_annotations(const ReferenceAnnotations& annotations, double sample_rate) {
  std::vector<std::uint8_t> out;
  auto put = [&](std::uint16_t w) {
    out.push_back(static_cast<std::uint8_t>(w & 0xFF));
    out.push_back(static_cast<std::uint8_t>(w >> 8));
  };
  long long prev = 0;
  for (const auto& a : annotations.entries) {
    const int code = code_from_mnemonic(a.code);
    if (code <= 0) throw InvalidArgument("cannot encode annotation code '" + a.code + "'");
    const long long sample = std::llround(a.time * sample_rate);
    long long diff = sample - prev;
    if (diff < 0) throw InvalidArgument("annotations must be time-ordered");
    if (diff > 0x3FF) {
      put(static_cast<std::uint16_t>(kSkip << 10));
      const auto d = static_cast<std::uint32_t>(diff);
      put(static_cast<std::uint16_t>(d >> 16));
      put(static_cast<std::uint16_t>(d & 0xFFFF));
      diff = 0;
    }
    put(static_cast<std::uint16_t>((code << 10) | static_cast<int>(diff)));
    prev = sample;
  }
  put(0);
  return out;
}

std::vector<std::uint8_t> encode_samples(std::span<const std::vector<int>> signals, int format) {
  std::vector<int> stream;
  if (!signals.empty()) {
    const std::size_t n = signals[0].size();
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& s : signals) stream.push_back(s.at(k));
    }
  }
  std::vector<std::uint8_t> out;
  if (format == 16) {
    for (int v : stream) {
      const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
      out.push_back(static_cast<std::uint8_t>(u & 0xFF));
      out.push_back(static_cast<std::uint8_t>(u >> 8));
    }
  } else if (format == 212) {
    for (std::size_t i = 0; i < stream.size(); i += 2) {
      const int a = stream[i] & 0xFFF;
      const int b = i + 1 < stream.size() ? stream[i + 1] & 0xFFF : 0;
      out.push_back(static_cast<std::uint8_t>(a & 0xFF));
      out.push_back(static_cast<std::uint8_t>(((a >> 8) & 0x0F) | ((b >> 4) & 0xF0)));
      if (i + 1 < stream.size()) out.push_back(static_cast<std::uint8_t>(b & 0xFF));
    }
  } else {
    throw UnsupportedFormat("encoding WFDB format " + std::to_string(format));
  }
  return out;
}

}  // namespace beatmark::wfdb
