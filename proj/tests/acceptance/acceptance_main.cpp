// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance --criteria 1,2,3 [--data-dir DIR]
//   acceptance --criteria 4,5,6,7,8,9 [--cases N]
//
// Criteria 1-3 read MIT-BIH and NST records from DIR (or $BEATMARK_DATA_DIR),
// laid out as DIR/mitdb/<record>.{hea,dat,atr} and DIR/nstdb/<record>.{hea,dat},
// or flat in DIR. When a record is missing the criterion is reported as a
// blocked FAIL together with a synthetic surrogate figure, and the run exits
// with 77 unless something else failed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "beatmark/beat_detection.hpp"
#include "beatmark/correction.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/irregularity.hpp"
#include "beatmark/noise_profile.hpp"
#include "beatmark/pipeline.hpp"
#include "beatmark/signal_io.hpp"
#include "beatmark/synthetic.hpp"
#include "beatmark/validation.hpp"
#include "beatmark/wfdb.hpp"
#include "oracles.hpp"

using namespace beatmark;
namespace fs = std::filesystem;

namespace {

enum class Status { kPass, kFail, kBlocked };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

struct Options {
  std::set<int> criteria;
  std::optional<fs::path> data_dir;
  int cases = 10000;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Counts failing cases and keeps the first description.
struct Tally {
  long long cases = 0;
  long long failures = 0;
  std::string first;

  void check(bool ok, const std::string& what) {
    ++cases;
    if (!ok && failures++ == 0) first = what;
  }
  bool ok() const { return failures == 0; }
  std::string summary(const std::string& name) const {
    std::string s = name + " " + std::to_string(cases - failures) + "/" + std::to_string(cases);
    if (!ok()) s += " (first: " + first + ")";
    return s;
  }
};

Outcome combine(const std::vector<std::pair<std::string, Tally>>& parts) {
  Outcome o;
  for (const auto& [name, t] : parts) {
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += t.summary(name);
    if (!t.ok()) o.status = Status::kFail;
  }
  return o;
}

RriSeries series(const std::vector<double>& d) {
  RriSeries s;
  for (std::size_t k = 0; k < d.size(); ++k) s.intervals.push_back({d[k], k, k + 1});
  return s;
}

std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> base(0.5, 1.2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double m = base(rng);
  std::vector<double> d(n);
  for (auto& v : d) {
    const double r = u(rng);
    v = r < 0.1 ? m * (0.3 + 2.0 * u(rng)) : m * (0.9 + 0.2 * u(rng));
  }
  return d;
}

std::vector<Seconds> times_of(const std::vector<BeatMark>& beats) {
  std::vector<Seconds> t;
  for (const auto& b : beats) t.push_back(b.time);
  return t;
}

std::vector<Seconds> active_times(const std::vector<BeatMark>& beats) {
  std::vector<Seconds> t;
  for (const auto& b : beats) {
    if (is_active(b)) t.push_back(b.time);
  }
  return t;
}

// --- reference data -------------------------------------------------------

std::optional<fs::path> find_record(const std::optional<fs::path>& dir, const std::string& db,
                                    const std::string& name) {
  if (!dir) return std::nullopt;
  for (const auto& base : {*dir / db, *dir}) {
    if (fs::exists(base / (name + ".hea"))) return base / name;
  }
  return std::nullopt;
}

const std::vector<std::string> kMitdb{"100", "103", "119"};
const std::vector<std::string> kNstdb{"118e06", "118e00", "118e_6", "119e_6"};

std::string missing_list(const Options& opt, const std::string& db, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!find_record(opt.data_dir, db, n)) out += (out.empty() ? "" : ", ") + n;
  }
  return out;
}

Outcome blocked(const Options& opt, const std::string& db, const std::string& missing) {
  Outcome o;
  o.status = Status::kBlocked;
  o.detail = "blocked: " + db + " record(s) " + missing + " not found under " +
             (opt.data_dir ? opt.data_dir->string() : std::string("(no data directory; set BEATMARK_DATA_DIR)"));
  return o;
}

struct SyntheticRecord {
  EcgRecord record;
  ReferenceAnnotations reference;
};

SyntheticRecord surrogate(std::uint64_t seed, bool nst) {
  synthetic::RhythmOptions ro;
  ro.duration = 1800.0;
  ro.pvc_rate = 0.02;
  ro.pac_rate = 0.02;
  ro.seed = seed;
  const auto beats = synthetic::rhythm(ro);
  synthetic::SignalOptions so;
  so.seed = seed + 1;
  so.wander_amp = 0.1;
  SyntheticRecord s{synthetic::ecg(beats, ro.duration, so), synthetic::reference(beats)};
  if (nst) synthetic::add_nst_noise(s.record, 0.15, seed + 2);
  return s;
}

Outcome criterion1(const Options& opt) {
  const auto missing = missing_list(opt, "mitdb", kMitdb);
  if (!missing.empty()) {
    double worst = 1.0;
    for (std::uint64_t seed : {100u, 103u, 119u}) {
      const auto s = surrogate(seed, false);
      const auto r = analyze_record(s.record, AnalysisParams{});
      worst = std::min(worst, validate_beats(r.identified, s.reference).accuracy);
    }
    auto o = blocked(opt, "MIT-BIH", missing);
    o.detail += "; info: synthetic surrogate minimum sensitivity " + fmt("%.4f", worst);
    return o;
  }
  Outcome o;
  for (const auto& name : kMitdb) {
    const auto path = *find_record(opt.data_dir, "mitdb", name);
    const auto record = wfdb::read(path);
    const auto ref = read_reference_annotations(fs::path(path.string() + ".atr"), record.sample_rate);
    const auto r = analyze_record(record, AnalysisParams{});
    const double sens = validate_beats(r.identified, ref).accuracy;
    o.detail += name + " sensitivity " + fmt("%.4f", sens) + "  ";
    if (sens < 0.95) o.status = Status::kFail;
  }
  o.detail += "(threshold 0.95)";
  return o;
}

Outcome criterion2(const Options& opt) {
  const auto missing = missing_list(opt, "nstdb", kNstdb);
  if (!missing.empty()) {
    double sum = 0.0;
    for (std::uint64_t seed : {118u, 119u}) {
      const auto s = surrogate(seed, true);
      sum += nst_noise_accuracy(analyze_record(s.record, AnalysisParams{}).identified);
    }
    auto o = blocked(opt, "NST", missing);
    o.detail += "; info: synthetic surrogate mean noise accuracy " + fmt("%.4f", sum / 2.0);
    return o;
  }
  Outcome o;
  double sum = 0.0;
  for (const auto& name : kNstdb) {
    const auto record = wfdb::read(*find_record(opt.data_dir, "nstdb", name));
    const double acc = nst_noise_accuracy(analyze_record(record, AnalysisParams{}).identified);
    o.detail += name + " " + fmt("%.4f", acc) + "  ";
    sum += acc;
  }
  const double mean = sum / static_cast<double>(kNstdb.size());
  o.detail += "mean " + fmt("%.4f", mean) + " (threshold 0.75)";
  if (mean < 0.75) o.status = Status::kFail;
  return o;
}

std::string direction(const ValidationReport& pre, const ValidationReport& post, const AnalysisResult& r,
                      bool* ok) {
  *ok = post.valid_prop >= pre.valid_prop && r.epochs_post >= r.epochs_pre;
  return "valid " + fmt("%.4f", pre.valid_prop) + "->" + fmt("%.4f", post.valid_prop) + " epochs " +
         std::to_string(r.epochs_pre) + "->" + std::to_string(r.epochs_post);
}

Outcome criterion3(const Options& opt) {
  const auto missing = missing_list(opt, "mitdb", kMitdb);
  if (!missing.empty()) {
    std::string info;
    bool all = true;
    for (std::uint64_t seed : {100u, 103u, 119u}) {
      const auto s = surrogate(seed, false);
      const auto r = analyze_record(s.record, AnalysisParams{});
      bool ok = false;
      info += " " + direction(validate_beats(r.identified, s.reference), validate_beats(r.beats, s.reference), r, &ok);
      all = all && ok;
    }
    auto o = blocked(opt, "MIT-BIH", missing);
    o.detail += std::string("; info: synthetic surrogate ") + (all ? "holds:" : "violated:") + info;
    return o;
  }
  Outcome o;
  for (const auto& name : kMitdb) {
    const auto path = *find_record(opt.data_dir, "mitdb", name);
    const auto record = wfdb::read(path);
    const auto ref = read_reference_annotations(fs::path(path.string() + ".atr"), record.sample_rate);
    const auto r = analyze_record(record, AnalysisParams{});
    bool ok = false;
    o.detail += name + " " + direction(validate_beats(r.identified, ref), validate_beats(r.beats, ref), r, &ok) + "  ";
    if (!ok) o.status = Status::kFail;
  }
  return o;
}

// --- properties -----------------------------------------------------------

Outcome criterion4(const Options& opt) {
  std::mt19937_64 rng(4);
  const IrregularityParams p;
  Tally outliers, regional, removal;
  std::uniform_int_distribution<std::size_t> len(1, 200);
  for (int i = 0; i < opt.cases; ++i) {
    const auto d = random_series(rng, len(rng));
    outliers.check(detect_outliers(series(d), p) == oracle::outliers(d, p), "case " + std::to_string(i));

    std::vector<bool> ex(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) ex[k] = rng() % 5 == 0;
    const std::size_t beat = rng() % (d.size() + 1);
    const auto expected = oracle::regional_mean(d, beat, p.regional_window, ex);
    bool ok = false;
    try {
      const double got = regional_stats(series(d), {}, beat, p, ex).rri_mean;
      ok = expected && std::abs(got - *expected) <= 1e-12 * std::max(1.0, *expected);
    } catch (const EmptyWindow&) {
      ok = !expected;
    }
    regional.check(ok, "case " + std::to_string(i));
  }
  std::uniform_int_distribution<int> inner(0, 6);
  std::uniform_real_distribution<double> gap(0.05, 1.2), mean(0.5, 1.2);
  for (int i = 0; i < opt.cases; ++i) {
    std::vector<Seconds> t{0.0};
    const int m = inner(rng) + 1;
    for (int k = 0; k < m; ++k) t.push_back(t.back() + gap(rng));
    const double mu = mean(rng);
    const double got = removal_cost(t, best_removal(t, mu), mu);
    removal.check(std::abs(got - oracle::best_subset_cost(t, mu)) <= 1e-12, "case " + std::to_string(i));
  }
  return combine({{"detect_outliers", outliers}, {"regional_stats", regional}, {"extra-beat removal", removal}});
}

Outcome criterion5(const Options& opt) {
  std::mt19937_64 rng(5);
  Tally pair, interp, remove, duration;

  std::uniform_int_distribution<int> ticks(64, 1536);
  for (int i = 0; i < opt.cases; ++i) {
    // Times on a 1/1024 s grid, where every operation is exact.
    const double a = 100.0 + ticks(rng) / 1024.0;
    const double m = a + ticks(rng) / 1024.0;
    const double b = m + 2.0 * ticks(rng) / 1024.0;
    auto beats = oracle::marks({a, m, b});
    adjust_short_long(beats, 0);
    pair.check((beats[1].time - a) + (b - beats[1].time) == (m - a) + (b - m), "case " + std::to_string(i));
  }

  std::uniform_int_distribution<int> parts(2, 6);
  for (int i = 0; i < opt.cases; ++i) {
    const auto original = oracle::marks(oracle::irregular_train(rng, 30));
    auto beats = original;
    interpolate_long(beats, rng() % 29, parts(rng));
    std::erase_if(beats, [](const BeatMark& b) { return b.cls == BeatClass::kInterpolated; });
    interp.check(beats == original, "case " + std::to_string(i));
  }

  std::normal_distribution<double> jitter(0.0, 0.01);
  std::uniform_real_distribution<double> where(0.25, 0.45);
  for (int i = 0; i < opt.cases; ++i) {
    std::vector<double> t{1.0};
    while (t.size() < 100) t.push_back(t.back() + 0.8 + jitter(rng));
    auto with_extra = t;
    const std::size_t k = 30 + rng() % 40;
    with_extra.insert(with_extra.begin() + static_cast<long>(k) + 1, t[k] + where(rng) * (t[k + 1] - t[k]));
    auto beats = oracle::marks(with_extra);
    identify_outliers(beats, IrregularityParams{});
    remove_extra_beats(beats, IrregularityParams{});
    remove.check(active_times(beats) == t, "case " + std::to_string(i));
  }

  for (int i = 0; i < opt.cases; ++i) {
    auto beats = oracle::marks(oracle::irregular_train(rng, 120));
    const Seconds first = beats.front().time, last = beats.back().time;
    identify_outliers(beats, IrregularityParams{});
    run_correction_loops(beats, IrregularityParams{}, CorrectionParams{});
    const auto active = active_times(beats);
    duration.check(!active.empty() && active.front() == first && active.back() == last,
                   "case " + std::to_string(i));
  }
  return combine({{"pair sums", pair},
                  {"interpolate round trip", interp},
                  {"remove round trip", remove},
                  {"record span", duration}});
}

Outcome criterion6(const Options& opt) {
  std::mt19937_64 rng(6);
  Tally flags, detector, noise;
  IrregularityParams p;
  p.accept_min = 1e-9;
  p.hard_upper_bound = 1e8;
  p.accept_max = 1e9;
  std::uniform_real_distribution<double> cs(0.2, 5.0);
  for (int i = 0; i < opt.cases; ++i) {
    auto d = random_series(rng, 120);
    const auto before = detect_outliers(series(d), p);
    const double c = cs(rng);
    for (auto& v : d) v *= c;
    flags.check(detect_outliers(series(d), p) == before, "case " + std::to_string(i));
  }

  std::uniform_real_distribution<double> gain(0.05, 20.0);
  const DetectorParams dp;
  for (int i = 0; i < opt.cases; ++i) {
    synthetic::RhythmOptions ro;
    ro.duration = 12.0;
    ro.pvc_rate = 0.05;
    ro.seed = 1000 + static_cast<std::uint64_t>(i);
    const auto truth = synthetic::rhythm(ro);
    synthetic::SignalOptions so;
    so.seed = 5000 + static_cast<std::uint64_t>(i);
    so.noise_sd = 0.02;
    auto rec = synthetic::ecg(truth, ro.duration, so);
    const auto a = detect_qrs(preprocess(rec, dp), dp);
    const auto pa = compute_noise_profile(rec, a).per_beat;
    const double c = gain(rng);
    for (auto& x : rec.samples) x *= c;
    const auto b = detect_qrs(preprocess(rec, dp), dp);
    detector.check(times_of(a) == times_of(b), "seed " + std::to_string(ro.seed) + " gain " + fmt("%.4f", c));
    const auto pb = compute_noise_profile(rec, a).per_beat;
    bool ok = pa.size() == pb.size();
    for (std::size_t k = 0; ok && k < pa.size(); ++k) ok = std::abs(pb[k] - c * c * pa[k]) <= 1e-9 * pb[k];
    noise.check(ok, "seed " + std::to_string(ro.seed));
  }
  return combine({{"relative flags", flags}, {"detector times", detector}, {"noise profile c^2", noise}});
}

Outcome criterion7(const Options& opt) {
  std::mt19937_64 rng(7);
  Tally smooth, counts;
  for (int i = 0; i < opt.cases; ++i) {
    auto beats = oracle::marks(oracle::irregular_train(rng, 120));
    const auto identified = identify_outliers(beats, IrregularityParams{});
    const auto report = run_correction_loops(beats, IrregularityParams{}, CorrectionParams{});
    bool ok = true;
    for (const auto& e : report.events) ok = ok && oracle::roughness(e.after) <= oracle::roughness(e.before) + 1e-12;
    smooth.check(ok, "case " + std::to_string(i));
    bool mono = !report.excluded_after_loop.empty() && report.excluded_after_loop.front() <= identified;
    for (std::size_t k = 1; k < report.excluded_after_loop.size(); ++k) {
      mono = mono && report.excluded_after_loop[k] <= report.excluded_after_loop[k - 1];
    }
    counts.check(mono, "case " + std::to_string(i));
  }
  return combine({{"run roughness", smooth}, {"excluded per loop", counts}});
}

void write_txt(const EcgRecord& rec, const fs::path& path) {
  std::ofstream out(path);
  out << "fs=" << rec.sample_rate << "\n";
  char buf[32];
  for (double v : rec.samples) {
    std::snprintf(buf, sizeof buf, "%.5f\n", v);
    out << buf;
  }
}

Outcome criterion8(const Options& opt) {
  // Whole pipeline runs are slow, so fewer cases here.
  const int runs = std::max(1, std::min(opt.cases, 24));
  const fs::path dir = fs::temp_directory_path() / "beatmark_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Tally same;
  for (int i = 0; i < runs; ++i) {
    synthetic::RhythmOptions ro;
    ro.duration = 200.0 + 20.0 * (i % 5);
    ro.pvc_rate = 0.03;
    ro.pac_rate = 0.03;
    ro.seed = 300 + static_cast<std::uint64_t>(i);
    const auto truth = synthetic::rhythm(ro);
    synthetic::SignalOptions so;
    so.seed = ro.seed + 1;
    so.noise_sd = 0.03;
    auto rec = synthetic::ecg(truth, ro.duration, so);
    synthetic::add_noise(rec, 60.0, 80.0, 0.2, ro.seed + 2);
    const auto input = dir / ("rec" + std::to_string(i) + ".txt");
    write_txt(rec, input);
    std::string first[4];
    bool ok = true;
    for (int pass = 0; pass < 2; ++pass) {
      PipelineConfig c;
      c.input = input;
      c.out_dir = dir / ("pass" + std::to_string(pass));
      c.test_duration = 150.0;
      c.seed = static_cast<std::uint64_t>(i);
      const auto r = run_pipeline(c);
      const fs::path files[4] = {r.rtimes_path, r.bi_path, r.session_path, r.report_path};
      for (int f = 0; f < 4; ++f) {
        const auto text = read_text_file(files[f]);
        if (pass == 0) {
          first[f] = text;
        } else {
          ok = ok && text == first[f];
        }
      }
    }
    same.check(ok, "record " + std::to_string(i));
  }
  fs::remove_all(dir);
  return combine({{"byte-identical outputs", same}});
}

Outcome criterion9(const Options&) {
  Tally direct, loop;
  auto beats = oracle::marks({9.2, 10.0, 10.6, 11.6, 12.4});
  adjust_short_long(beats, 1);
  const double d1 = beats[2].time - beats[1].time, d2 = beats[3].time - beats[2].time;
  direct.check(format_rtimes(beats) == "9.200000\n10.000000\n10.800000\n11.600000\n12.400000\n" &&
                   std::abs(d1 - 0.8) < 1e-12 && std::abs(d2 - 0.8) < 1e-12 && beats[2].cls == BeatClass::kAdjusted,
               "adjusted times " + format_rtimes(beats));

  // The same pair inside a steady 0.8 s rhythm, found and fixed by the loops.
  std::vector<double> t{1.0};
  for (int i = 0; i < 25; ++i) t.push_back(t.back() + 0.8);
  t.push_back(t.back() + 0.6);
  t.push_back(t.back() + 1.0);
  for (int i = 0; i < 25; ++i) t.push_back(t.back() + 0.8);
  auto train = oracle::marks(t);
  identify_outliers(train, IrregularityParams{});
  run_correction_loops(train, IrregularityParams{}, CorrectionParams{});
  loop.check(train[26].cls == BeatClass::kAdjusted && std::abs(train[26].time - train[25].time - 0.8) < 1e-9 &&
                 std::abs(train[27].time - train[26].time - 0.8) < 1e-9,
             "beat 26 " + std::string(to_string(train[26].cls)));
  return combine({{"0.6/1.0 -> 0.8/0.8", direct}, {"inside a rhythm", loop}});
}

const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>>& table() {
  static const std::vector<std::pair<std::string, std::function<Outcome(const Options&)>>> t{
      {"beat detection sensitivity on MIT-BIH", criterion1},
      {"noise classification on NST", criterion2},
      {"correction direction on MIT-BIH", criterion3},
      {"oracle equivalence", criterion4},
      {"conservation", criterion5},
      {"invariance", criterion6},
      {"smoothing", criterion7},
      {"determinism", criterion8},
      {"worked example", criterion9},
  };
  return t;
}

int usage() {
  std::fprintf(stderr, "usage: acceptance [--criteria 1,2,...] [--data-dir DIR] [--cases N]\n");
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (const char* env = std::getenv("BEATMARK_DATA_DIR"); env != nullptr && *env != '\0') opt.data_dir = env;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (i + 1 >= argc) return usage();
    const std::string v = argv[++i];
    if (a == "--criteria") {
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const int c = std::atoi(item.c_str());
        if (c < 1 || c > static_cast<int>(table().size())) return usage();
        opt.criteria.insert(c);
      }
    } else if (a == "--data-dir") {
      opt.data_dir = v;
    } else if (a == "--cases") {
      opt.cases = std::atoi(v.c_str());
      if (opt.cases < 1) return usage();
    } else {
      return usage();
    }
  }
  if (opt.criteria.empty()) {
    for (int c = 1; c <= static_cast<int>(table().size()); ++c) opt.criteria.insert(c);
  }

  bool failed = false, blocked = false;
  for (int c : opt.criteria) {
    const auto& [name, fn] = table()[static_cast<std::size_t>(c - 1)];
    Outcome o;
    try {
      o = fn(opt);
    } catch (const std::exception& e) {
      o.status = Status::kFail;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("%s  criterion %d  %s: %s\n", o.status == Status::kPass ? "PASS" : "FAIL", c, name.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failed = failed || o.status == Status::kFail;
    blocked = blocked || o.status == Status::kBlocked;
  }
  if (failed) return 1;
  return blocked ? 77 : 0;
}
