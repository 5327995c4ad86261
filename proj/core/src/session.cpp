#include "beatmark/session.hpp"

#include <array>

#include "beatmark/errors.hpp"
#include "beatmark/signal_io.hpp"
#include "json.hpp"

namespace beatmark {

using Json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<EditKind, std::string_view>, 6> kEditKinds{{
    {EditKind::kDelete, "DELETE"},
    {EditKind::kAdd, "ADD"},
    {EditKind::kInterpolate, "INTERPOLATE"},
    {EditKind::kRelocate, "RELOCATE"},
    {EditKind::kInvertSignal, "INVERT_SIGNAL"},
    {EditKind::kRegionOverride, "REGION_OVERRIDE"},
}};

template <typename T, typename Parser>
T parse_enum(const Json& j, const char* path, Parser parse) {
  if (!j.is_string()) throw CorruptSession(std::string(path) + ": expected string");
  auto v = parse(j.get<std::string>());
  if (!v) throw CorruptSession(std::string(path) + ": unknown value '" + j.get<std::string>() + "'");
  return *v;
}

const Json& field(const Json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) throw CorruptSession(path + ": expected object");
  auto it = obj.find(name);
  if (it == obj.end()) throw CorruptSession(path + "." + name + ": missing");
  return *it;
}

double number(const Json& obj, const char* name, const std::string& path) {
  const Json& v = field(obj, name, path);
  if (!v.is_number()) throw CorruptSession(path + "." + name + ": expected number");
  return v.get<double>();
}

bool boolean(const Json& obj, const char* name, const std::string& path) {
  const Json& v = field(obj, name, path);
  if (!v.is_boolean()) throw CorruptSession(path + "." + name + ": expected boolean");
  return v.get<bool>();
}

int integer(const Json& obj, const char* name, const std::string& path) {
  const Json& v = field(obj, name, path);
  if (!v.is_number_integer()) throw CorruptSession(path + "." + name + ": expected integer");
  return v.get<int>();
}

std::string string(const Json& obj, const char* name, const std::string& path) {
  const Json& v = field(obj, name, path);
  if (!v.is_string()) throw CorruptSession(path + "." + name + ": expected string");
  return v.get<std::string>();
}

Json params_to_json(const SessionParams& p) {
  Json j;
  j["qrs_threshold"] = p.detector.qrs_threshold;
  j["post_threshold"] = p.detector.post_threshold;
  j["amplifier"] = p.detector.amplifier;
  j["invert"] = p.detector.invert;
  j["rri_upper_frac"] = p.irregularity.rri_upper_frac;
  j["rri_lower_frac"] = p.irregularity.rri_lower_frac;
  j["grad_inc_frac"] = p.irregularity.grad_inc_frac;
  j["grad_dec_frac"] = p.irregularity.grad_dec_frac;
  j["hard_upper_bound"] = p.irregularity.hard_upper_bound;
  j["accept_min"] = p.irregularity.accept_min;
  j["accept_max"] = p.irregularity.accept_max;
  j["regional_window"] = p.irregularity.regional_window;
  j["test_duration"] = p.test_duration ? Json(*p.test_duration) : Json(nullptr);
  j["loops"] = p.correction.loops;
  j["analyze_pwaves"] = p.correction.analyze_pwaves;
  j["pwave_sensitivity"] = p.correction.pwave_sensitivity;
  j["noise_window_ms"] = p.noise_window_ms;
  return j;
}

SessionParams params_from_json(const Json& j) {
  const std::string path = "params";
  SessionParams p;
  p.detector.qrs_threshold = number(j, "qrs_threshold", path);
  p.detector.post_threshold = number(j, "post_threshold", path);
  p.detector.amplifier = number(j, "amplifier", path);
  p.detector.invert = boolean(j, "invert", path);
  p.irregularity.rri_upper_frac = number(j, "rri_upper_frac", path);
  p.irregularity.rri_lower_frac = number(j, "rri_lower_frac", path);
  p.irregularity.grad_inc_frac = number(j, "grad_inc_frac", path);
  p.irregularity.grad_dec_frac = number(j, "grad_dec_frac", path);
  p.irregularity.hard_upper_bound = number(j, "hard_upper_bound", path);
  p.irregularity.accept_min = number(j, "accept_min", path);
  p.irregularity.accept_max = number(j, "accept_max", path);
  p.irregularity.regional_window = integer(j, "regional_window", path);
  const Json& td = field(j, "test_duration", path);
  if (!td.is_null()) {
    if (!td.is_number()) throw CorruptSession("params.test_duration: expected number or null");
    p.test_duration = td.get<double>();
  }
  p.correction.loops = integer(j, "loops", path);
  p.correction.analyze_pwaves = boolean(j, "analyze_pwaves", path);
  p.correction.pwave_sensitivity = number(j, "pwave_sensitivity", path);
  p.noise_window_ms = number(j, "noise_window_ms", path);
  return p;
}

}  // namespace

std::string_view to_string(EditKind k) {
  for (const auto& [e, n] : kEditKinds) {
    if (e == k) return n;
  }
  return "?";
}

std::optional<EditKind> parse_edit_kind(std::string_view s) {
  for (const auto& [e, n] : kEditKinds) {
    if (n == s) return e;
  }
  return std::nullopt;
}

void check_consistent(const Session& s) {
  for (std::size_t i = 1; i < s.beats.size(); ++i) {
    if (!(s.beats[i].time > s.beats[i - 1].time)) {
      throw CorruptSession("beats[" + std::to_string(i) + "]: times not strictly increasing");
    }
  }
  for (std::size_t i = 0; i < s.regions.size(); ++i) {
    if (!(s.regions[i].start < s.regions[i].end)) {
      throw CorruptSession("regions[" + std::to_string(i) + "]: start must precede end");
    }
    if (i > 0 && s.regions[i].start < s.regions[i - 1].end) {
      throw CorruptSession("regions[" + std::to_string(i) + "]: overlaps previous region");
    }
  }
}

std::string export_session_string(const Session& s) {
  check_consistent(s);
  Json j;
  j["format"] = "beatmark-session";
  j["format_version"] = s.format_version;

  Json rec;
  rec["path"] = s.record.path;
  rec["source_format"] = std::string(to_string(s.record.format));
  rec["sample_rate"] = s.record.sample_rate;
  rec["duration"] = s.record.duration;
  rec["start_offset"] = s.record.start_offset;
  rec["inverted"] = s.record.inverted;
  j["record"] = rec;
  j["rri_beat_times"] = s.rri_beat_times;
  j["params"] = params_to_json(s.params);

  if (s.test_span) {
    Json t;
    t["start"] = s.test_span->start;
    t["duration"] = s.test_span->duration;
    t["seed"] = s.test_span->seed ? Json(*s.test_span->seed) : Json(nullptr);
    j["test_span"] = t;
  } else {
    j["test_span"] = nullptr;
  }

  Json beats = Json::array();
  for (const auto& b : s.beats) {
    Json jb;
    jb["t"] = b.time;
    jb["class"] = std::string(to_string(b.cls));
    jb["reason"] = std::string(to_string(b.reason));
    jb["provenance"] = std::string(to_string(b.provenance));
    jb["pwave"] = std::string(to_string(b.pwave));
    jb["noise"] = b.noise_value;
    jb["noisy"] = b.noisy;
    beats.push_back(std::move(jb));
  }
  j["beats"] = std::move(beats);

  Json regions = Json::array();
  for (const auto& r : s.regions) {
    regions.push_back(Json{{"start", r.start}, {"end", r.end}, {"reason", std::string(to_string(r.reason))}});
  }
  j["regions"] = std::move(regions);

  Json edits = Json::array();
  for (const auto& e : s.edit_log) {
    Json je;
    je["ordinal"] = e.ordinal;
    je["kind"] = std::string(to_string(e.kind));
    je["target"] = e.target;
    je["values"] = e.values;
    je["note"] = e.note;
    je["timestamp"] = e.timestamp;
    edits.push_back(std::move(je));
  }
  j["edit_log"] = std::move(edits);

  if (s.validation) {
    Json v;
    v["metrics"] = s.validation->metrics;
    v["noise_accuracy_by_record"] = s.validation->noise_accuracy_by_record;
    j["validation"] = v;
  } else {
    j["validation"] = nullptr;
  }
  return j.dump(2) + "\n";
}

Session import_session_string(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CorruptSession(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "beatmark-session") {
    throw CorruptSession("missing 'format': \"beatmark-session\" marker");
  }
  Session s;
  s.format_version = integer(j, "format_version", "$");
  if (s.format_version != kSessionFormatVersion) {
    throw VersionMismatch("session format " + std::to_string(s.format_version) + ", expected " +
                          std::to_string(kSessionFormatVersion));
  }

  try {
    const Json& rec = field(j, "record", "$");
    s.record.path = string(rec, "path", "record");
    s.record.format = parse_enum<SourceFormat>(field(rec, "source_format", "record"), "record.source_format",
                                               parse_source_format);
    s.record.sample_rate = number(rec, "sample_rate", "record");
    s.record.duration = number(rec, "duration", "record");
    s.record.start_offset = number(rec, "start_offset", "record");
    s.record.inverted = boolean(rec, "inverted", "record");

    const Json& rri = field(j, "rri_beat_times", "$");
    if (!rri.is_array()) throw CorruptSession("rri_beat_times: expected array");
    for (const auto& v : rri) {
      if (!v.is_number()) throw CorruptSession("rri_beat_times: expected numbers");
      s.rri_beat_times.push_back(v.get<double>());
    }

    s.params = params_from_json(field(j, "params", "$"));

    const Json& ts = field(j, "test_span", "$");
    if (!ts.is_null()) {
      TestSpan t;
      t.start = number(ts, "start", "test_span");
      t.duration = number(ts, "duration", "test_span");
      const Json& seed = field(ts, "seed", "test_span");
      if (!seed.is_null()) {
        if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
          throw CorruptSession("test_span.seed: expected integer");
        }
        t.seed = seed.get<std::uint64_t>();
      }
      s.test_span = t;
    }

    const Json& beats = field(j, "beats", "$");
    if (!beats.is_array()) throw CorruptSession("beats: expected array");
    for (std::size_t i = 0; i < beats.size(); ++i) {
      const std::string p = "beats[" + std::to_string(i) + "]";
      const Json& jb = beats[i];
      BeatMark b;
      b.time = number(jb, "t", p);
      b.cls = parse_enum<BeatClass>(field(jb, "class", p), (p + ".class").c_str(), parse_beat_class);
      b.reason = parse_enum<BeatReason>(field(jb, "reason", p), (p + ".reason").c_str(), parse_beat_reason);
      b.provenance =
          parse_enum<Provenance>(field(jb, "provenance", p), (p + ".provenance").c_str(), parse_provenance);
      b.pwave = parse_enum<PWave>(field(jb, "pwave", p), (p + ".pwave").c_str(), parse_pwave);
      b.noise_value = number(jb, "noise", p);
      b.noisy = boolean(jb, "noisy", p);
      s.beats.push_back(b);
    }

    const Json& regions = field(j, "regions", "$");
    if (!regions.is_array()) throw CorruptSession("regions: expected array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::string p = "regions[" + std::to_string(i) + "]";
      Region r;
      r.start = number(regions[i], "start", p);
      r.end = number(regions[i], "end", p);
      r.reason = parse_enum<RegionReason>(field(regions[i], "reason", p), (p + ".reason").c_str(),
                                          parse_region_reason);
      s.regions.push_back(r);
    }

    const Json& edits = field(j, "edit_log", "$");
    if (!edits.is_array()) throw CorruptSession("edit_log: expected array");
    for (std::size_t i = 0; i < edits.size(); ++i) {
      const std::string p = "edit_log[" + std::to_string(i) + "]";
      const Json& je = edits[i];
      EditEntry e;
      e.ordinal = integer(je, "ordinal", p);
      e.kind = parse_enum<EditKind>(field(je, "kind", p), (p + ".kind").c_str(), parse_edit_kind);
      e.target = integer(je, "target", p);
      const Json& vals = field(je, "values", p);
      if (!vals.is_array()) throw CorruptSession(p + ".values: expected array");
      for (const auto& v : vals) {
        if (!v.is_number()) throw CorruptSession(p + ".values: expected numbers");
        e.values.push_back(v.get<double>());
      }
      e.note = string(je, "note", p);
      e.timestamp = string(je, "timestamp", p);
      s.edit_log.push_back(std::move(e));
    }

    const Json& val = field(j, "validation", "$");
    if (!val.is_null()) {
      ValidationBlock vb;
      for (const auto& [k, v] : field(val, "metrics", "validation").items()) {
        if (!v.is_number()) throw CorruptSession("validation.metrics." + k + ": expected number");
        vb.metrics[k] = v.get<double>();
      }
      for (const auto& [k, v] : field(val, "noise_accuracy_by_record", "validation").items()) {
        if (!v.is_number()) throw CorruptSession("validation.noise_accuracy_by_record." + k + ": expected number");
        vb.noise_accuracy_by_record[k] = v.get<double>();
      }
      s.validation = std::move(vb);
    }
  } catch (const Json::exception& e) {
    throw CorruptSession(e.what());
  }
  check_consistent(s);
  return s;
}

void export_session(const Session& s, const std::filesystem::path& path) {
  write_text_file(path, export_session_string(s));
}

Session import_session(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw CorruptSession(e.what());
  }
  return import_session_string(text);
}

}  // namespace beatmark
