#include "beatmark/correction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beatmark/classify.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/irregularity.hpp"

namespace beatmark {

namespace {

struct Snapshot {
  std::vector<std::size_t> pos;  // active position -> beat index
  std::vector<Seconds> t;
  RriSeries rri;
  std::vector<bool> flags;
  std::vector<Seconds> mean;  // regional mean with flagged intervals left out
};

Snapshot snapshot(const std::vector<BeatMark>& beats, const IrregularityParams& params) {
  Snapshot s;
  for (std::size_t i = 0; i < beats.size(); ++i) {
    if (!is_active(beats[i])) continue;
    s.pos.push_back(i);
    s.t.push_back(beats[i].time);
  }
  s.rri = RriSeries::from_beats(beats);
  s.flags = detect_outliers(s.rri, params);
  s.mean.assign(s.t.size(), 0.0);
  for (std::size_t p = 0; p < s.t.size(); ++p) {
    try {
      s.mean[p] = regional_stats(s.rri, {}, p, params, s.flags).rri_mean;
    } catch (const EmptyWindow&) {
      try {
        s.mean[p] = regional_stats(s.rri, {}, p, params).rri_mean;
      } catch (const EmptyWindow&) {
      }
    }
  }
  return s;
}

RegionalStats band(Seconds mean, const IrregularityParams& params) {
  RegionalStats st;
  st.rri_mean = mean;
  st.lower_frac = params.rri_lower_frac;
  st.upper_frac = params.rri_upper_frac;
  return st;
}

// Live beat times for active positions [lo, hi], clamped to the series.
std::vector<Seconds> window(const std::vector<BeatMark>& beats, const std::vector<std::size_t>& pos, long long lo,
                            long long hi) {
  const auto n = static_cast<long long>(pos.size());
  lo = std::max(lo, 0LL);
  hi = std::min(hi, n - 1);
  std::vector<Seconds> out;
  for (long long p = lo; p <= hi; ++p) out.push_back(beats[pos[static_cast<std::size_t>(p)]].time);
  return out;
}

void adjust_at(std::vector<BeatMark>& beats, std::size_t left, std::size_t mid, std::size_t right, BeatReason reason) {
  const Seconds a = beats[left].time;
  const Seconds b = beats[right].time;
  BeatMark& m = beats[mid];
  m.time = a + (b - a) / 2.0;
  m.cls = BeatClass::kAdjusted;
  m.reason = reason;
  m.provenance = Provenance::kCorrection;
  // Keep REMOVED beats in time order around the moved one.
  std::size_t i = mid;
  while (i > left + 1 && beats[i - 1].time > beats[i].time) {
    std::swap(beats[i - 1], beats[i]);
    --i;
  }
  while (i + 1 < right && beats[i + 1].time < beats[i].time) {
    std::swap(beats[i + 1], beats[i]);
    ++i;
  }
}

BeatMark interpolated(Seconds t) {
  BeatMark b;
  b.time = t;
  b.cls = BeatClass::kInterpolated;
  b.reason = BeatReason::kBt7;
  b.provenance = Provenance::kCorrection;
  return b;
}

void sort_by_time(std::vector<BeatMark>& beats) {
  std::stable_sort(beats.begin(), beats.end(), [](const BeatMark& a, const BeatMark& b) { return a.time < b.time; });
}

void record(CorrectionReport* report, BeatReason kind, std::vector<Seconds> before, std::vector<Seconds> after) {
  if (report != nullptr) report->events.push_back({kind, std::move(before), std::move(after)});
}

void classify_pass(std::vector<BeatMark>& beats, const IrregularityParams& ip, const CorrectionParams& cp,
                   CorrectionReport* report) {
  const Snapshot s = snapshot(beats, ip);
  const std::size_t n = s.t.size();
  if (n < 2) return;
  ClassifyInput in;
  in.times = s.t;
  in.interval_flags = s.flags;
  in.regional_mean = s.mean;
  in.analyze_pwaves = cp.analyze_pwaves;
  in.candidate.assign(n, false);
  in.noisy.assign(n, false);
  in.low_score.assign(n, false);
  in.excluded.assign(n, false);
  in.pwave.assign(n, PWave::kUnevaluated);
  for (std::size_t p = 0; p < n; ++p) {
    const BeatMark& b = beats[s.pos[p]];
    in.candidate[p] = p >= 1 && s.flags[p - 1] && is_pending(b);
    in.noisy[p] = b.noisy;
    in.low_score[p] = b.cls == BeatClass::kExcluded && b.reason == BeatReason::kLowScore;
    in.excluded[p] = b.cls == BeatClass::kExcluded;
    in.pwave[p] = b.pwave;
  }
  const auto decisions = classify_candidates(in, ip);
  for (std::size_t p = 0; p < n; ++p) {
    const Decision& dec = decisions[p];
    BeatMark& b = beats[s.pos[p]];
    switch (dec.action) {
      case Action::kAdjust: {
        auto before = window(beats, s.pos, static_cast<long long>(p) - 2, static_cast<long long>(p) + 2);
        auto after = before;
        const std::size_t k = p >= 2 ? 2 : p;
        after[k] = after[k - 1] + (after[k + 1] - after[k - 1]) / 2.0;
        if (roughness(after) > roughness(before)) break;
        adjust_at(beats, s.pos[p - 1], s.pos[p], s.pos[p + 1], dec.label);
        record(report, dec.label, std::move(before), std::move(after));
        break;
      }
      case Action::kExclude:
        b.cls = BeatClass::kExcluded;
        b.reason = dec.label;
        break;
      case Action::kInclude:
        b.cls = BeatClass::kIncluded;
        b.reason = dec.label;
        break;
      case Action::kNone:
        break;
    }
  }
}

void interpolate_pass(std::vector<BeatMark>& beats, const IrregularityParams& ip, CorrectionReport* report) {
  const Snapshot s = snapshot(beats, ip);
  const std::size_t n = s.t.size();
  std::vector<BeatMark> added;
  for (std::size_t p = 1; p < n; ++p) {
    const BeatMark& b = beats[s.pos[p]];
    if (!is_pending(b) || !s.flags[p - 1]) continue;
    if (beats[s.pos[p - 1]].cls == BeatClass::kTraining) continue;
    const Seconds d = s.rri[p - 1];
    const RegionalStats st = band(s.mean[p], ip);
    if (!(d > st.upper())) continue;
    const auto count = split_eligibility(d, st);
    if (!count) continue;
    const Seconds step = d / static_cast<double>(*count);
    if (step < ip.accept_min || step > ip.accept_max) continue;

    auto before = window(beats, s.pos, static_cast<long long>(p) - 2, static_cast<long long>(p) + 1);
    std::vector<Seconds> inserted;
    for (int k = 1; k < *count; ++k) inserted.push_back(s.t[p - 1] + k * step);
    std::vector<Seconds> after;
    const std::size_t split = p >= 2 ? 2 : 1;
    after.insert(after.end(), before.begin(), before.begin() + static_cast<std::ptrdiff_t>(split));
    after.insert(after.end(), inserted.begin(), inserted.end());
    after.insert(after.end(), before.begin() + static_cast<std::ptrdiff_t>(split), before.end());
    if (roughness(after) > roughness(before)) continue;
    for (Seconds t : inserted) added.push_back(interpolated(t));
    record(report, BeatReason::kBt7, std::move(before), std::move(after));
  }
  if (added.empty()) return;
  beats.insert(beats.end(), added.begin(), added.end());
  sort_by_time(beats);
}

void adjust_pass(std::vector<BeatMark>& beats, const IrregularityParams& ip, CorrectionReport* report) {
  const Snapshot s = snapshot(beats, ip);
  const std::size_t n = s.t.size();
  for (std::size_t p = 1; p + 1 < n; ++p) {
    const BeatMark& b = beats[s.pos[p]];
    if (!is_pending(b)) continue;
    const Seconds prev = beats[s.pos[p - 1]].time;
    const Seconds next = beats[s.pos[p + 1]].time;
    const Seconds d1 = b.time - prev;
    const Seconds d2 = next - b.time;
    const RegionalStats st = band(s.mean[p], ip);
    if (!(d1 < st.lower() && d2 > st.upper() && pair_sum_check(d1, d2, st))) continue;
    auto before = window(beats, s.pos, static_cast<long long>(p) - 2, static_cast<long long>(p) + 2);
    auto after = before;
    const std::size_t k = p >= 2 ? 2 : 1;
    after[k] = after[k - 1] + (after[k + 1] - after[k - 1]) / 2.0;
    if (roughness(after) > roughness(before)) continue;
    adjust_at(beats, s.pos[p - 1], s.pos[p], s.pos[p + 1], BeatReason::kBt8);
    record(report, BeatReason::kBt8, std::move(before), std::move(after));
    ++p;
  }
}

void resolve_pass(std::vector<BeatMark>& beats, const IrregularityParams& ip) {
  const Snapshot s = snapshot(beats, ip);
  const std::size_t n = s.t.size();
  for (std::size_t p = 0; p < n; ++p) {
    BeatMark& b = beats[s.pos[p]];
    if (!is_pending(b)) continue;
    const bool before = p >= 1 && s.flags[p - 1];
    const bool after = p + 1 < n && s.flags[p];
    if (!before && !after) {
      b.cls = BeatClass::kIncluded;
      b.reason = BeatReason::kNone;
    } else if (b.reason == BeatReason::kOutlier) {
      b.reason = BeatReason::kUncorrected;
    }
  }
}

}  // namespace

bool is_pending(const BeatMark& b) {
  return b.cls == BeatClass::kExcluded &&
         (b.reason == BeatReason::kOutlier || b.reason == BeatReason::kLowScore ||
          b.reason == BeatReason::kUncorrected);
}

double roughness(std::span<const Seconds> times) {
  double sum = 0.0;
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double diff = (times[i] - times[i - 1]) - (times[i - 1] - times[i - 2]);
    sum += diff * diff;
  }
  return sum;
}

std::size_t count_class(std::span<const BeatMark> beats, BeatClass cls) {
  return static_cast<std::size_t>(
      std::count_if(beats.begin(), beats.end(), [cls](const BeatMark& b) { return b.cls == cls; }));
}

void mark_training(std::vector<BeatMark>& beats, int count) {
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < beats.size(); ++i) {
    if (is_active(beats[i])) active.push_back(i);
  }
  const auto c = static_cast<std::size_t>(std::max(count, 0));
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (k < c || k + c >= active.size()) {
      beats[active[k]].cls = BeatClass::kTraining;
      beats[active[k]].reason = BeatReason::kNone;
    }
  }
}

std::size_t identify_outliers(std::vector<BeatMark>& beats, const IrregularityParams& params) {
  validate(params);
  mark_training(beats, kTrainingBeats);
  const RriSeries rri = RriSeries::from_beats(beats);
  const auto flags = detect_outliers(rri, params);
  for (std::size_t k = 0; k < rri.size(); ++k) {
    BeatMark& b = beats[rri.intervals[k].right];
    if (flags[k] && b.cls == BeatClass::kIncluded) {
      b.cls = BeatClass::kExcluded;
      b.reason = BeatReason::kOutlier;
    }
  }
  return count_class(beats, BeatClass::kExcluded);
}

std::vector<bool> best_removal(std::span<const Seconds> times, Seconds mean) {
  const std::size_t m = times.size();
  if (m < 2) throw InvalidArgument("removal search needs two anchors");
  std::vector<double> cost(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(m, 0);
  cost[0] = 0.0;
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = j; i-- > 0;) {
      const double dev = times[j] - times[i] - mean;
      const double c = cost[i] + dev * dev;
      if (c < cost[j]) {
        cost[j] = c;
        from[j] = i;
      }
    }
  }
  std::vector<bool> keep(m - 2, false);
  for (std::size_t j = from[m - 1]; j > 0; j = from[j]) keep[j - 1] = true;
  return keep;
}

double removal_cost(std::span<const Seconds> times, const std::vector<bool>& keep_inner, Seconds mean) {
  if (times.size() < 2 || keep_inner.size() + 2 != times.size()) {
    throw InvalidArgument("keep mask must cover the inner beats");
  }
  double cost = 0.0;
  Seconds last = times.front();
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (j + 1 < times.size() && !keep_inner[j - 1]) continue;
    const double dev = times[j] - last - mean;
    cost += dev * dev;
    last = times[j];
  }
  return cost;
}

void remove_extra_beats(std::vector<BeatMark>& beats, const IrregularityParams& params, CorrectionReport* report) {
  validate(params);
  const Snapshot s = snapshot(beats, params);
  const std::size_t n = s.t.size();
  std::size_t p = 1;
  while (p < n) {
    if (!is_pending(beats[s.pos[p]])) {
      ++p;
      continue;
    }
    const std::size_t a = p;
    std::size_t b = p;
    while (b + 1 < n && is_pending(beats[s.pos[b + 1]])) ++b;
    p = b + 1;
    if (b + 1 >= n || b - a + 1 > kMaxRemovalRun) continue;
    const RegionalStats st = band(s.mean[a], params);
    if (!(st.rri_mean > 0.0)) continue;
    bool has_short = false;
    for (std::size_t k = a; k <= b + 1; ++k) {
      const Seconds d = s.t[k] - s.t[k - 1];
      if (d < st.lower() || d < params.accept_min) has_short = true;
    }
    if (!has_short) continue;

    const std::span<const Seconds> run(s.t.data() + (a - 1), b - a + 3);
    const auto keep = best_removal(run, st.rri_mean);
    if (std::all_of(keep.begin(), keep.end(), [](bool k) { return k; })) continue;
    bool in_band = true;
    Seconds last = run.front();
    for (std::size_t j = 1; j < run.size(); ++j) {
      if (j + 1 < run.size() && !keep[j - 1]) continue;
      const Seconds d = run[j] - last;
      if (d < st.lower() || d > st.upper() || d < params.accept_min || d > params.accept_max) in_band = false;
      last = run[j];
    }
    if (!in_band) continue;

    const auto lo = static_cast<long long>(a) - 2;
    const auto hi = static_cast<long long>(b) + 2;
    auto before = window(beats, s.pos, lo, hi);
    std::vector<Seconds> after;
    for (long long q = std::max(lo, 0LL); q <= std::min(hi, static_cast<long long>(n) - 1); ++q) {
      const auto uq = static_cast<std::size_t>(q);
      if (uq >= a && uq <= b && !keep[uq - a]) continue;
      after.push_back(s.t[uq]);
    }
    if (roughness(after) > roughness(before)) continue;
    for (std::size_t k = a; k <= b; ++k) {
      if (keep[k - a]) continue;
      beats[s.pos[k]].cls = BeatClass::kRemoved;
      beats[s.pos[k]].reason = BeatReason::kBt6;
    }
    record(report, BeatReason::kBt6, std::move(before), std::move(after));
  }
}

void interpolate_long(std::vector<BeatMark>& beats, std::size_t interval, int n) {
  const RriSeries rri = RriSeries::from_beats(beats);
  if (interval >= rri.size()) throw IneligibleInterval("no interval " + std::to_string(interval));
  if (n < 2) throw IneligibleInterval("need at least two sub-intervals, got " + std::to_string(n));
  const Interval iv = rri.intervals[interval];
  const Seconds start = beats[iv.left].time;
  const Seconds step = iv.duration / static_cast<double>(n);
  std::vector<BeatMark> added;
  for (int k = 1; k < n; ++k) added.push_back(interpolated(start + k * step));
  beats.insert(beats.begin() + static_cast<std::ptrdiff_t>(iv.right), added.begin(), added.end());
  std::stable_sort(beats.begin() + static_cast<std::ptrdiff_t>(iv.left),
                   beats.begin() + static_cast<std::ptrdiff_t>(iv.right + added.size() + 1),
                   [](const BeatMark& a, const BeatMark& b) { return a.time < b.time; });
}

void adjust_short_long(std::vector<BeatMark>& beats, std::size_t interval, BeatReason reason) {
  const RriSeries rri = RriSeries::from_beats(beats);
  if (interval + 1 >= rri.size()) throw NotAPair("interval " + std::to_string(interval) + " has no successor");
  adjust_at(beats, rri.intervals[interval].left, rri.intervals[interval].right, rri.intervals[interval + 1].right,
            reason);
}

CorrectionReport run_correction_loops(std::vector<BeatMark>& beats, const IrregularityParams& iparams,
                                      const CorrectionParams& cparams) {
  validate(iparams);
  validate(cparams);
  CorrectionReport report;
  report.excluded_after_identification = count_class(beats, BeatClass::kExcluded);
  for (int loop = 1; loop <= cparams.loops; ++loop) {
    if (loop > 1) {
      for (BeatMark& b : beats) {
        if (b.cls == BeatClass::kExcluded &&
            (b.reason == BeatReason::kBt2 || b.reason == BeatReason::kBt4 || b.reason == BeatReason::kUncorrected)) {
          b.reason = BeatReason::kOutlier;
        }
      }
    }
    classify_pass(beats, iparams, cparams, &report);
    remove_extra_beats(beats, iparams, &report);
    interpolate_pass(beats, iparams, &report);
    adjust_pass(beats, iparams, &report);
    resolve_pass(beats, iparams);
    report.excluded_after_loop.push_back(count_class(beats, BeatClass::kExcluded));
  }
  return report;
}

}  // namespace beatmark
