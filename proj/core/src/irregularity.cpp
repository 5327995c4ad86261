#include "beatmark/irregularity.hpp"

#include <cmath>
#include <limits>

#include "beatmark/errors.hpp"

namespace beatmark {

RriSeries RriSeries::from_beats(std::span<const BeatMark> beats) {
  RriSeries s;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < beats.size(); ++i) {
    if (!is_active(beats[i])) continue;
    if (prev) s.intervals.push_back({beats[i].time - beats[*prev].time, *prev, i});
    prev = i;
  }
  return s;
}

RriSeries RriSeries::from_times(std::span<const Seconds> times) {
  RriSeries s;
  for (std::size_t i = 1; i < times.size(); ++i) s.intervals.push_back({times[i] - times[i - 1], i - 1, i});
  return s;
}

std::vector<Seconds> RriSeries::durations() const {
  std::vector<Seconds> d;
  d.reserve(intervals.size());
  for (const auto& iv : intervals) d.push_back(iv.duration);
  return d;
}

RegionalStats regional_stats(const RriSeries& rri, std::span<const double> noise, std::size_t beat,
                             const IrregularityParams& params, const std::vector<bool>& exclude) {
  const std::size_t n = rri.size();
  if (beat > n) throw InvalidArgument("beat index out of range");
  const auto w = static_cast<std::size_t>(params.regional_window);
  RegionalStats st;
  st.lower_frac = params.rri_lower_frac;
  st.upper_frac = params.rri_upper_frac;

  // Preceding side: intervals [beat - w, beat - 1]; following: [beat, beat + w - 1].
  const std::size_t lo = beat >= w ? beat - w : 0;
  const std::size_t hi = std::min(n, beat + w);
  double sum = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    if (!exclude.empty() && exclude[k]) continue;
    sum += rri[k];
    ++st.rri_count;
  }
  if (st.rri_count < 2) throw EmptyWindow("fewer than two usable intervals around beat " + std::to_string(beat));
  st.rri_mean = sum / static_cast<double>(st.rri_count);

  if (!noise.empty()) {
    const std::size_t m = noise.size();
    const std::size_t nlo = beat >= w ? beat - w : 0;
    const std::size_t nhi = std::min(m, beat + w + 1);
    double nsum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = nlo; k < nhi; ++k) {
      if (k == beat) continue;
      nsum += noise[k];
      ++count;
    }
    st.noise_mean = count == 0 ? 0.0 : nsum / static_cast<double>(count);
  }
  return st;
}

std::vector<bool> detect_outliers(const RriSeries& rri, const IrregularityParams& params,
                                  const std::vector<bool>& exclude) {
  validate(params);
  const std::size_t n = rri.size();
  std::vector<bool> flags(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const Seconds d = rri[k];
    bool flagged = d < params.accept_min || d > params.accept_max;
    if (!flagged) {
      try {
        const RegionalStats st = regional_stats(rri, {}, k + 1, params, exclude);
        flagged = d < st.lower() || d > st.upper();
      } catch (const EmptyWindow&) {
      }
    }
    flags[k] = flagged;
  }
  return flags;
}

std::vector<bool> outlier_beats(const std::vector<bool>& interval_flags) {
  std::vector<bool> out(interval_flags.size() + 1, false);
  for (std::size_t k = 0; k < interval_flags.size(); ++k) out[k + 1] = interval_flags[k];
  return out;
}

std::vector<Seconds> cumulative_sums(const RriSeries& rri, std::size_t beat, std::size_t count) {
  std::vector<Seconds> out;
  Seconds s = 0.0;
  for (std::size_t k = beat; k < rri.size() && out.size() < count; ++k) {
    s += rri[k];
    out.push_back(s);
  }
  return out;
}

std::size_t closest_cumulative_count(std::span<const Seconds> sums, Seconds mean) {
  std::size_t best = 0;
  double best_dev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sums.size(); ++k) {
    const double dev = std::abs(sums[k] - mean);
    if (dev < best_dev) {
      best_dev = dev;
      best = k + 1;
    }
  }
  return best;
}

bool pair_sum_check(Seconds first, Seconds second, const RegionalStats& stats) {
  const Seconds sum = first + second;
  return sum >= 2.0 * stats.lower() && sum <= 2.0 * stats.upper();
}

bool pair_sum_check(const RriSeries& rri, std::size_t interval, const RegionalStats& stats) {
  if (interval + 1 >= rri.size()) throw InvalidArgument("pair check needs a successor interval");
  return pair_sum_check(rri[interval], rri[interval + 1], stats);
}

std::optional<int> split_eligibility(Seconds duration, const RegionalStats& stats) {
  if (!(stats.rri_mean > 0.0)) return std::nullopt;
  const double ratio = duration / stats.rri_mean;
  const auto n = static_cast<long long>(std::llround(ratio));
  if (n < 2 || n > 1000) return std::nullopt;
  const Seconds sub = duration / static_cast<double>(n);
  if (sub < stats.lower() || sub > stats.upper()) return std::nullopt;
  return static_cast<int>(n);
}

bool within_gradual(Seconds previous, Seconds current, const IrregularityParams& params) {
  if (!(previous > 0.0)) return false;
  const double change = (current - previous) / previous;
  return change >= 0.0 ? change <= params.grad_inc_frac : -change <= params.grad_dec_frac;
}

}  // namespace beatmark
