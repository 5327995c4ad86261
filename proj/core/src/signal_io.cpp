#include "beatmark/signal_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "beatmark/edf.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/log.hpp"
#include "beatmark/wfdb.hpp"

namespace beatmark {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t' || c == ' ' || c == ',' || c == ';') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool parse_number(const std::string& s, double& out) {
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size() && std::isfinite(out);
}

InputFormat sniff(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".edf") return InputFormat::kEdf;
  if (ext == ".bdf") return InputFormat::kBdf;
  if (ext == ".hea" || ext == ".dat") return InputFormat::kWfdb;
  if (ext == ".rri") return InputFormat::kRri;
  if (ext == ".txt" || ext == ".tsv" || ext == ".csv") return InputFormat::kTxt;
  if (ext.empty()) {
    std::filesystem::path hea = path;
    hea += ".hea";
    if (std::filesystem::exists(hea)) return InputFormat::kWfdb;
  }
  std::ifstream in(path, std::ios::binary);
  char head[8] = {};
  in.read(head, sizeof head);
  if (static_cast<unsigned char>(head[0]) == 0xFF && std::string(head + 1, 7) == "BIOSEMI") return InputFormat::kBdf;
  if (std::string(head, 8) == "0       ") return InputFormat::kEdf;
  throw UnsupportedFormat("cannot infer format of " + path.string());
}

EcgRecord read_txt(const std::filesystem::path& path, std::optional<double> override_rate) {
  std::ifstream in(path);
  if (!in) throw UnreadableHeader("cannot open " + path.string());
  EcgRecord rec;
  rec.source_format = SourceFormat::kTxt;
  std::optional<double> embedded;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first_content) {
      first_content = false;
      const std::string l = lower(t);
      if (l.rfind("fs=", 0) == 0) {
        double fs;
        if (!parse_number(trim(l.substr(3)), fs) || !(fs > 0.0)) {
          throw UnreadableHeader("bad sample-rate header on line " + std::to_string(lineno));
        }
        embedded = fs;
        continue;
      }
    }
    const auto fields = split_fields(t);
    const std::string& cell = fields.size() >= 2 ? fields[1] : fields[0];
    double v;
    if (!parse_number(cell, v)) {
      throw UnreadableHeader("non-numeric sample on line " + std::to_string(lineno) + ": '" + cell + "'");
    }
    rec.samples.push_back(v);
  }
  if (override_rate) {
    rec.sample_rate = *override_rate;
  } else if (embedded) {
    rec.sample_rate = *embedded;
  } else {
    throw MissingSampleRate(path.string() + " has no fs= header and no sample rate was given");
  }
  if (!(rec.sample_rate > 0.0)) throw MissingSampleRate("sample rate must be positive");
  if (rec.samples.empty()) throw EmptyRecord(path.string() + " contains no samples");
  return rec;
}

EcgRecord read_rri(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UnreadableHeader("cannot open " + path.string());
  EcgRecord rec;
  rec.source_format = SourceFormat::kRriOnly;
  rec.sample_rate = 1000.0;  // nominal; only used for the duplicate-beat tolerance
  std::string line;
  std::size_t lineno = 0;
  double t = 0.0;
  rec.rri_beat_times.push_back(0.0);
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    double d;
    if (!parse_number(split_fields(s)[0], d) || !(d > 0.0)) {
      throw UnreadableHeader("bad interval on line " + std::to_string(lineno));
    }
    t += d;
    rec.rri_beat_times.push_back(t);
  }
  if (rec.rri_beat_times.size() < 2) throw EmptyRecord(path.string() + " contains no intervals");
  return rec;
}

std::optional<double> sibling_header_rate(const std::filesystem::path& annotation_path) {
  std::filesystem::path hea = annotation_path;
  hea.replace_extension(".hea");
  if (!std::filesystem::exists(hea)) return std::nullopt;
  try {
    return wfdb::parse_header(read_text_file(hea)).sample_rate;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<AnnotationLabel> label_from_text(const std::string& token) {
  if (auto l = label_from_mnemonic(token)) return l;
  const std::string t = lower(token);
  for (int i = 0; i <= static_cast<int>(AnnotationLabel::kUnidentifiedComplex); ++i) {
    const auto label = static_cast<AnnotationLabel>(i);
    if (lower(std::string(describe(label))) == t) return label;
  }
  return std::nullopt;
}

ReferenceAnnotations read_text_annotations(const std::string& text) {
  ReferenceAnnotations out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, int> unknown;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto tab = s.find_first_of(" \t");
    if (tab == std::string::npos) throw MalformedAnnotation("line " + std::to_string(lineno) + " needs time and label");
    Annotation a;
    if (!parse_number(s.substr(0, tab), a.time) || a.time < 0.0) {
      throw MalformedAnnotation("bad time on line " + std::to_string(lineno));
    }
    const std::string label = trim(s.substr(tab + 1));
    if (!out.entries.empty() && a.time < out.entries.back().time) {
      throw MalformedAnnotation("times decrease on line " + std::to_string(lineno));
    }
    if (auto l = label_from_text(label)) {
      a.label = *l;
      a.code = label;
      // Long descriptions map back to a representative mnemonic.
      if (!label_from_mnemonic(label)) {
        for (std::string_view m : {"N", "L", "R", "A", "V", "J", "S", "E", "/", "Q", "f", "!", "[", "]", "|",
                                   "~", "+", "x", "X"}) {
          if (label_from_mnemonic(m) == a.label) {
            a.code = std::string(m);
            break;
          }
        }
      }
    } else {
      a.label = AnnotationLabel::kUnclassifiable;
      a.code = label;
      ++unknown[label];
    }
    out.entries.push_back(std::move(a));
  }
  for (const auto& [code, n] : unknown) {
    log_warning("annotation label '" + code + "' outside label vocabulary (" + std::to_string(n) +
                "x), kept as Unclassifiable");
  }
  return out;
}

bool looks_binary(const std::string& bytes) {
  const std::size_t n = std::min<std::size_t>(bytes.size(), 512);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    if (c == 0 || (c < 0x09) || (c > 0x0D && c < 0x20)) return true;
  }
  return false;
}

}  // namespace

std::optional<InputFormat> parse_input_format(std::string_view s) {
  const std::string l = lower(std::string(s));
  if (l == "auto") return InputFormat::kAuto;
  if (l == "txt") return InputFormat::kTxt;
  if (l == "edf") return InputFormat::kEdf;
  if (l == "bdf") return InputFormat::kBdf;
  if (l == "wfdb") return InputFormat::kWfdb;
  if (l == "rri") return InputFormat::kRri;
  return std::nullopt;
}

EcgRecord read_record(const std::filesystem::path& path, InputFormat format,
                      std::optional<double> sample_rate_override) {
  if (sample_rate_override && !(*sample_rate_override > 0.0)) {
    throw InvalidArgument("sample rate override must be positive");
  }
  const InputFormat f = format == InputFormat::kAuto ? sniff(path) : format;
  EcgRecord rec;
  switch (f) {
    case InputFormat::kTxt:
      return read_txt(path, sample_rate_override);
    case InputFormat::kEdf:
    case InputFormat::kBdf:
      rec = edf::read(path);
      break;
    case InputFormat::kWfdb: {
      std::filesystem::path p = path;
      if (p.extension() == ".dat") p.replace_extension();
      rec = wfdb::read(p);
      break;
    }
    case InputFormat::kRri:
      return read_rri(path);
    case InputFormat::kAuto:
      throw UnsupportedFormat("format detection failed");
  }
  if (sample_rate_override) rec.sample_rate = *sample_rate_override;
  return rec;
}

ReferenceAnnotations read_reference_annotations(const std::filesystem::path& path,
                                                std::optional<double> sample_rate) {
  std::string bytes;
  try {
    bytes = read_text_file(path);
  } catch (const IoError& e) {
    throw MalformedAnnotation(e.what());
  }
  if (bytes.empty()) return {};
  if (!looks_binary(bytes)) return read_text_annotations(bytes);
  std::optional<double> fs = sample_rate ? sample_rate : sibling_header_rate(path);
  if (!fs) throw MalformedAnnotation("binary annotations need a sample rate (no sibling .hea found)");
  return wfdb::decode_annotations(
      std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()), *fs);
}

}  // namespace beatmark
