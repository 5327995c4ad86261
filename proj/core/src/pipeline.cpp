#include "beatmark/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "beatmark/beat_detection.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/noise_profile.hpp"
#include "beatmark/pwave.hpp"
#include "beatmark/regions.hpp"
#include "json.hpp"

namespace beatmark {

using Json = nlohmann::ordered_json;

namespace {

void enter(std::string* stage, const char* name) {
  if (stage != nullptr) *stage = name;
}

std::vector<BeatMark> initial_beats(const EcgRecord& record, const AnalysisParams& params, std::string* stage) {
  if (!record.has_waveform()) {
    std::vector<BeatMark> beats;
    for (Seconds t : record.rri_beat_times) {
      BeatMark b;
      b.time = t;
      beats.push_back(b);
    }
    return beats;
  }
  enter(stage, "beat identification");
  const FilteredSignal filtered = preprocess(record, params.detector);
  const auto detected = detect_qrs(filtered, params.detector);
  auto beats = post_filter(detected, filtered, params.detector);

  enter(stage, "noise profile");
  const NoiseProfile profile = compute_noise_profile(record, beats, params.noise_window_ms);
  const auto means = regional_noise_means(profile.per_beat, params.irregularity.regional_window);
  const auto noisy = classify_noise(profile.per_beat, means, params.irregularity.rri_upper_frac);
  enter(stage, "P-wave analysis");
  for (std::size_t i = 0; i < beats.size(); ++i) {
    beats[i].noise_value = profile.per_beat[i];
    beats[i].noisy = noisy[i];
    if (params.correction.analyze_pwaves) {
      PWaveOptions opt;
      opt.sensitivity = params.correction.pwave_sensitivity;
      opt.inverted = params.detector.invert;
      if (i >= 1) opt.previous_beat = beats[i - 1].time;
      if (i >= 2) opt.previous_rr = beats[i - 1].time - beats[i - 2].time;
      beats[i].pwave = evaluate_pwave(record, beats[i].time, opt);
    }
  }
  return beats;
}

void shift(std::vector<BeatMark>& beats, Seconds by) {
  for (auto& b : beats) b.time += by;
}

void shift(std::vector<Region>& regions, Seconds by) {
  for (auto& r : regions) {
    r.start += by;
    r.end += by;
  }
}

std::string stem_of(const std::filesystem::path& input) {
  std::string name = input.filename().string();
  for (const char* suffix : {".session.json", ".json"}) {
    const std::string s(suffix);
    if (name.size() > s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0) {
      return name.substr(0, name.size() - s.size());
    }
  }
  return input.stem().string();
}

Json metrics_json(const ValidationReport& r) {
  Json j = Json::object();
  for (const auto& [k, v] : r.metrics()) j[k] = v;
  return j;
}

Json class_counts(const std::vector<BeatMark>& beats) {
  Json j = Json::object();
  for (BeatClass c : {BeatClass::kIncluded, BeatClass::kExcluded, BeatClass::kAdjusted, BeatClass::kInterpolated,
                      BeatClass::kRemoved, BeatClass::kTraining}) {
    j[std::string(to_string(c))] = count_class(beats, c);
  }
  return j;
}

Json reason_counts(const std::vector<BeatMark>& beats) {
  std::map<std::string, std::size_t> counts;
  for (const auto& b : beats) {
    if (b.reason != BeatReason::kNone) ++counts[std::string(to_string(b.reason))];
  }
  Json j = Json::object();
  for (const auto& [k, v] : counts) j[k] = v;
  return j;
}

Json region_summary(const std::vector<Region>& regions) {
  std::map<std::string, std::pair<std::size_t, double>> acc;
  for (const auto& r : regions) {
    auto& slot = acc[std::string(to_string(r.reason))];
    ++slot.first;
    slot.second += r.end - r.start;
  }
  Json j = Json::object();
  for (const auto& [k, v] : acc) j[k] = Json{{"count", v.first}, {"seconds", v.second}};
  return j;
}

std::string build_report(const PipelineResult& r) {
  const Session& s = r.session;
  Json j;
  j["record"] = s.record.path;
  j["source_format"] = std::string(to_string(s.record.format));
  j["test_span"] = s.test_span ? Json{{"start", s.test_span->start}, {"duration", s.test_span->duration}}
                               : Json(nullptr);
  j["analyzed_duration"] = r.analysis.duration;
  j["beats"] = class_counts(s.beats);
  j["reasons"] = reason_counts(s.beats);
  j["excluded_after_identification"] = r.analysis.correction.excluded_after_identification;
  j["excluded_after_loop"] = r.analysis.correction.excluded_after_loop;
  j["corrections"] = r.analysis.correction.events.size();
  j["regions"] = region_summary(s.regions);
  j["epochs"] = Json{{"pre_correction", r.analysis.epochs_pre}, {"post_correction", r.analysis.epochs_post}};
  if (r.validation) {
    j["validation"] = Json{{"post_identification", metrics_json(*r.identified_validation)},
                           {"post_correction", metrics_json(*r.validation)}};
  } else {
    j["validation"] = nullptr;
  }
  return j.dump(2) + "\n";
}

ReferenceAnnotations slice_reference(const ReferenceAnnotations& ref, const TestSpan& span) {
  ReferenceAnnotations out;
  for (const auto& a : ref.entries) {
    if (a.time < span.start || a.time >= span.start + span.duration) continue;
    Annotation b = a;
    b.time -= span.start;
    out.entries.push_back(b);
  }
  return out;
}

void write_outputs(PipelineResult& r, const PipelineConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create " + config.out_dir.string() + ": " + ec.message());
  const std::string stem = stem_of(config.input);
  r.rtimes_path = config.out_dir / (stem + ".rtimes");
  r.bi_path = config.out_dir / (stem + ".bi");
  r.session_path = config.out_dir / (stem + ".session.json");
  r.report_path = config.report_path ? *config.report_path : config.out_dir / (stem + ".report.json");
  if (std::filesystem::weakly_canonical(r.session_path) == std::filesystem::weakly_canonical(config.input)) {
    r.session_path = config.out_dir / (stem + ".regenerated.session.json");
  }
  write_rtimes(r.session.beats, r.rtimes_path);
  write_bad_intervals(r.session.regions, r.bi_path);
  export_session(r.session, r.session_path);
  write_text_file(r.report_path, r.report_json);
}

PipelineResult regenerate(const PipelineConfig& config) {
  PipelineResult r;
  r.session = import_session(config.input);
  Session& s = r.session;
  const Seconds offset = s.test_span ? s.test_span->start : 0.0;
  const Seconds duration = s.test_span ? s.test_span->duration : s.record.duration;
  auto beats = s.beats;
  shift(beats, -offset);
  auto regions = mark_regions(beats, duration, kTrainingBeats);
  shift(regions, offset);
  for (const auto& reg : s.regions) {
    if (reg.reason == RegionReason::kManual) regions.push_back(reg);
  }
  s.regions = normalize_regions(std::move(regions));
  r.analysis.beats = s.beats;
  r.analysis.regions = s.regions;
  r.analysis.duration = duration;
  const auto out = output_times(beats);
  auto local_regions = s.regions;
  shift(local_regions, -offset);
  r.analysis.epochs_post = count_spectral_epochs(out, local_regions, duration, s.params.irregularity.accept_min,
                                                 s.params.irregularity.accept_max);
  r.analysis.epochs_pre = r.analysis.epochs_post;
  r.report_json = build_report(r);
  write_outputs(r, config);
  return r;
}

}  // namespace

TestSpan select_test_region(Seconds record_duration, Seconds duration, TestRegionMode mode, std::uint64_t seed,
                            const std::optional<TestSpan>& saved) {
  if (mode == TestRegionMode::kReuse) {
    if (!saved) throw NoSavedRegion("no test span stored in the session");
    if (saved->start < 0.0 || saved->start + saved->duration > record_duration + 1e-9) {
      throw DurationTooLong("saved test span lies outside the record");
    }
    return *saved;
  }
  if (duration < kMinimumDuration) {
    throw MinimumDurationError("test duration " + std::to_string(duration) + " s is below 120 s");
  }
  if (duration > record_duration) {
    throw DurationTooLong("test duration " + std::to_string(duration) + " s exceeds the record (" +
                          std::to_string(record_duration) + " s)");
  }
  TestSpan span;
  span.duration = duration;
  span.seed = seed;
  const auto slack_ms = static_cast<std::uint64_t>(std::floor((record_duration - duration) * 1000.0));
  if (slack_ms > 0) {
    std::mt19937_64 rng(seed);
    // Modulo keeps the mapping identical across standard library implementations.
    span.start = static_cast<double>(rng() % (slack_ms + 1)) / 1000.0;
  }
  return span;
}

EcgRecord slice_record(const EcgRecord& record, const TestSpan& span) {
  EcgRecord out = record;
  out.start_offset = record.start_offset + span.start;
  if (record.has_waveform()) {
    const double fs = record.sample_rate;
    const auto n = static_cast<long long>(record.samples.size());
    const long long lo = std::clamp(static_cast<long long>(std::llround(span.start * fs)), 0LL, n);
    const long long hi = std::clamp(static_cast<long long>(std::llround((span.start + span.duration) * fs)), lo, n);
    out.samples.assign(record.samples.begin() + lo, record.samples.begin() + hi);
  } else {
    out.rri_beat_times.clear();
    for (Seconds t : record.rri_beat_times) {
      if (t >= span.start && t <= span.start + span.duration) out.rri_beat_times.push_back(t - span.start);
    }
  }
  return out;
}

AnalysisResult analyze_record(const EcgRecord& record, const AnalysisParams& params, std::string* stage) {
  enter(stage, "configuration");
  validate(params.detector);
  validate(params.irregularity);
  validate(params.correction);
  AnalysisResult r;
  enter(stage, "duration check");
  r.duration = record.duration();
  if (r.duration < kMinimumDuration) {
    throw MinimumDurationError("record lasts " + std::to_string(r.duration) + " s; at least 120 s are required");
  }
  auto beats = initial_beats(record, params, stage);
  enter(stage, "irregularity detection");
  identify_outliers(beats, params.irregularity);
  r.identified = beats;
  r.identified_regions = mark_regions(r.identified, r.duration, kTrainingBeats);
  enter(stage, "correction");
  r.correction = run_correction_loops(beats, params.irregularity, params.correction);
  r.beats = std::move(beats);
  enter(stage, "region marking");
  r.regions = mark_regions(r.beats, r.duration, kTrainingBeats);
  const auto& ip = params.irregularity;
  r.epochs_pre = count_spectral_epochs(output_times(r.identified), r.identified_regions, r.duration, ip.accept_min,
                                       ip.accept_max);
  r.epochs_post = count_spectral_epochs(output_times(r.beats), r.regions, r.duration, ip.accept_min, ip.accept_max);
  return r;
}

bool is_session_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string head(4096, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  const auto first = head.find_first_not_of(" \t\r\n");
  return first != std::string::npos && head[first] == '{' && head.find("\"beatmark-session\"") != std::string::npos;
}

PipelineResult run_pipeline(const PipelineConfig& config, std::string* stage) {
  enter(stage, "input");
  if (config.format == InputFormat::kAuto && is_session_file(config.input)) {
    enter(stage, "session import");
    return regenerate(config);
  }

  const EcgRecord full = read_record(config.input, config.format, config.sample_rate_override);
  enter(stage, "test region");
  std::optional<TestSpan> span;
  if (config.test_region == TestRegionMode::kReuse) {
    if (!config.reuse_session) throw NoSavedRegion("REUSE needs a session holding a test span");
    const Session saved = import_session(*config.reuse_session);
    span = select_test_region(full.duration(), 0.0, TestRegionMode::kReuse, 0, saved.test_span);
  } else if (config.test_duration) {
    span = select_test_region(full.duration(), *config.test_duration, TestRegionMode::kRandom, config.seed);
  }
  const EcgRecord record = span ? slice_record(full, *span) : full;
  const Seconds offset = span ? span->start : 0.0;

  PipelineResult r;
  r.analysis = analyze_record(record, config.params, stage);

  if (config.reference) {
    enter(stage, "validation");
    auto ref = read_reference_annotations(*config.reference,
                                          full.has_waveform() ? std::optional<double>(full.sample_rate) : std::nullopt);
    if (span) ref = slice_reference(ref, *span);
    r.identified_validation = validate_beats(r.analysis.identified, ref);
    r.validation = validate_beats(r.analysis.beats, ref);
    r.identified_validation->epochs_pre = r.validation->epochs_pre = r.analysis.epochs_pre;
    r.identified_validation->epochs_post = r.validation->epochs_post = r.analysis.epochs_post;
  }

  Session& s = r.session;
  s.record.path = config.input.string();
  s.record.format = full.source_format;
  s.record.sample_rate = full.sample_rate;
  s.record.duration = full.duration();
  s.record.start_offset = full.start_offset;
  s.record.inverted = config.params.detector.invert;
  if (!full.has_waveform()) s.rri_beat_times = full.rri_beat_times;
  s.params.detector = config.params.detector;
  s.params.irregularity = config.params.irregularity;
  s.params.correction = config.params.correction;
  s.params.noise_window_ms = config.params.noise_window_ms;
  s.params.test_duration = span ? std::optional<Seconds>(span->duration) : std::nullopt;
  s.test_span = span;
  s.beats = r.analysis.beats;
  shift(s.beats, offset);
  s.regions = r.analysis.regions;
  shift(s.regions, offset);
  if (r.validation) {
    ValidationBlock block;
    block.metrics = r.validation->metrics();
    s.validation = block;
  }
  enter(stage, "output");
  r.report_json = build_report(r);
  write_outputs(r, config);
  return r;
}

std::string format_summary(const PipelineResult& r) {
  const auto& beats = r.session.beats;
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    out << "  " << name;
    for (std::size_t i = name.size(); i < 30; ++i) out << ' ';
    out << value << '\n';
  };
  out << r.session.record.path << '\n';
  for (BeatClass c : {BeatClass::kIncluded, BeatClass::kAdjusted, BeatClass::kInterpolated, BeatClass::kExcluded,
                      BeatClass::kRemoved, BeatClass::kTraining}) {
    row(std::string(to_string(c)), std::to_string(count_class(beats, c)));
  }
  row("regions", std::to_string(r.session.regions.size()));
  row("epochs pre/post", std::to_string(r.analysis.epochs_pre) + " / " + std::to_string(r.analysis.epochs_post));
  if (r.validation) {
    char buf[64];
    auto fmt = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.4f", v);
      return std::string(buf);
    };
    row("accuracy", fmt(r.validation->accuracy));
    row("precision (detected/ref)", fmt(r.validation->precision));
    row("ppv (matched/detected)", fmt(r.validation->ppv));
    row("valid proportion pre/post", fmt(r.identified_validation->valid_prop) + " / " + fmt(r.validation->valid_prop));
  }
  return out.str();
}

}  // namespace beatmark
