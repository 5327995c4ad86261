#include "beatmark/beat_detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "beatmark/errors.hpp"
#include "beatmark/filters.hpp"

namespace beatmark {

namespace {

std::size_t to_samples(Seconds s, double fs) {
  return static_cast<std::size_t>(std::llround(s * fs));
}

// Indices where the energy is a strictly positive local maximum and the
// largest value within +-half samples.
std::vector<std::size_t> candidate_peaks(std::span<const double> e, std::size_t half) {
  const std::size_t n = e.size();
  std::vector<std::size_t> out;
  std::deque<std::size_t> dq;  // indices with decreasing values, sliding window max
  std::size_t next = 0;        // next index to push
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t hi = std::min(n - 1, i + half);
    while (next <= hi) {
      while (!dq.empty() && e[dq.back()] <= e[next]) dq.pop_back();
      dq.push_back(next++);
    }
    const std::size_t lo = i >= half ? i - half : 0;
    while (dq.front() < lo) dq.pop_front();
    const bool rising = i == 0 || e[i] > e[i - 1];
    if (e[i] > 0.0 && rising && e[i] >= e[dq.front()]) out.push_back(i);
  }
  return out;
}

std::size_t refine_to_extremum(std::span<const double> x, std::size_t idx, std::size_t half) {
  const std::size_t lo = idx >= half ? idx - half : 0;
  const std::size_t hi = std::min(x.size() - 1, idx + half);
  double mean = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) mean += x[i];
  mean /= static_cast<double>(hi - lo + 1);
  std::size_t best = idx;
  double best_dev = -1.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double d = std::abs(x[i] - mean);
    if (d > best_dev) {
      best_dev = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

FilteredSignal preprocess(const EcgRecord& record, const DetectorParams& params) {
  validate(params);
  if (!record.has_waveform()) throw EmptySignal("record has no waveform samples");
  if (!(record.sample_rate > 2.0 * detector::kBandHighHz)) {
    throw InvalidArgument("sample rate too low for QRS band-pass");
  }
  const double fs = record.sample_rate;
  FilteredSignal out;
  out.sample_rate = fs;
  const double gain = params.invert ? -params.amplifier : params.amplifier;
  out.conditioned.resize(record.samples.size());
  std::transform(record.samples.begin(), record.samples.end(), out.conditioned.begin(),
                 [gain](double v) { return v * gain; });

  const std::array<dsp::Biquad, 2> band{
      dsp::Biquad::butterworth_highpass(detector::kBandLowHz, fs),
      dsp::Biquad::butterworth_lowpass(detector::kBandHighHz, fs),
  };
  out.bandpassed = dsp::filtfilt(band, out.conditioned, to_samples(1.0, fs));

  const std::size_t n = out.bandpassed.size();
  std::vector<double> slope2(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (out.bandpassed[i + 1] - out.bandpassed[i - 1]) * fs / 2.0;
    slope2[i] = d * d;
  }
  std::size_t win = to_samples(detector::kIntegrationWindow, fs);
  if (win % 2 == 0) ++win;
  out.energy = dsp::moving_average(slope2, win);
  return out;
}

std::vector<BeatMark> detect_qrs(const FilteredSignal& filtered, const DetectorParams& params) {
  validate(params);
  const auto& e = filtered.energy;
  const double fs = filtered.sample_rate;
  const std::size_t n = e.size();
  if (n == 0) return {};
  const std::size_t refractory = std::max<std::size_t>(1, to_samples(detector::kRefractory, fs));
  const std::size_t twave_window = to_samples(0.360, fs);
  const std::size_t stall = to_samples(3.0, fs);

  const auto peaks = candidate_peaks(e, refractory / 2);
  if (peaks.empty()) return {};

  // Learning phase over the first two seconds.
  const std::size_t learn = std::min(n, to_samples(2.0, fs));
  double emax = 0.0, esum = 0.0;
  for (std::size_t i = 0; i < learn; ++i) {
    emax = std::max(emax, e[i]);
    esum += e[i];
  }
  double spk = emax / 3.0;
  double npk = esum / static_cast<double>(learn) / 2.0;

  std::vector<std::size_t> beats;
  std::vector<double> beat_energy;
  std::deque<double> recent_rr;
  double rr_avg = 0.0;
  auto accept = [&](std::size_t idx, double weight) {
    if (!beats.empty()) {
      recent_rr.push_back(static_cast<double>(idx - beats.back()));
      if (recent_rr.size() > 8) recent_rr.pop_front();
      rr_avg = 0.0;
      for (double r : recent_rr) rr_avg += r;
      rr_avg /= static_cast<double>(recent_rr.size());
    }
    beats.push_back(idx);
    beat_energy.push_back(e[idx]);
    spk = weight * e[idx] + (1.0 - weight) * spk;
  };

  std::size_t cursor = 0;  // first peak not yet considered for search-back
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    const std::size_t idx = peaks[p];
    double thr = npk + params.qrs_threshold * (spk - npk);

    // Search back for a missed beat when the current gap is unusually long.
    if (!beats.empty() && rr_avg > 0.0 && static_cast<double>(idx - beats.back()) > 1.66 * rr_avg) {
      std::size_t best = peaks.size();
      for (std::size_t q = cursor; q < p; ++q) {
        const std::size_t c = peaks[q];
        if (c <= beats.back() + refractory || c + refractory > idx) continue;
        if (e[c] > 0.5 * thr && (best == peaks.size() || e[c] > e[peaks[best]])) best = q;
      }
      if (best != peaks.size()) {
        accept(peaks[best], 0.25);
        thr = npk + params.qrs_threshold * (spk - npk);
      }
    }
    const std::size_t last = beats.empty() ? 0 : beats.back();
    if (idx - last > stall || (beats.empty() && idx > stall)) {
      // Nothing detected for a while: the signal level estimate is stale.
      spk *= 0.5;
      thr = npk + params.qrs_threshold * (spk - npk);
    }

    if (e[idx] >= thr) {
      if (!beats.empty() && idx - beats.back() < refractory) {
        if (e[idx] > beat_energy.back()) {
          beats.pop_back();
          beat_energy.pop_back();
          accept(idx, 0.125);
        }
      } else if (!beats.empty() && idx - beats.back() < twave_window && e[idx] < 0.5 * beat_energy.back()) {
        npk = 0.125 * e[idx] + 0.875 * npk;
      } else {
        accept(idx, 0.125);
      }
      cursor = p + 1;
    } else {
      npk = 0.125 * e[idx] + 0.875 * npk;
    }
  }

  // Align to the raw-signal extremum and re-enforce the refractory period.
  const std::size_t half = to_samples(detector::kRefineHalfWindow, fs);
  std::vector<std::size_t> refined;
  std::vector<double> refined_energy;
  for (std::size_t k = 0; k < beats.size(); ++k) {
    const std::size_t r = refine_to_extremum(filtered.conditioned, beats[k], half);
    if (!refined.empty() && r < refined.back() + refractory) {
      if (beat_energy[k] > refined_energy.back()) {
        refined.back() = r;
        refined_energy.back() = beat_energy[k];
      }
      continue;
    }
    refined.push_back(r);
    refined_energy.push_back(beat_energy[k]);
  }

  std::vector<BeatMark> out;
  out.reserve(refined.size());
  for (std::size_t r : refined) {
    BeatMark b;
    b.time = static_cast<double>(r) / fs;
    out.push_back(b);
  }
  return out;
}

double beat_score(const FilteredSignal& filtered, Seconds time) {
  const double fs = filtered.sample_rate;
  const auto n = static_cast<long long>(filtered.energy.size());
  if (n == 0) return 0.0;
  const long long c = std::llround(time * fs);
  const long long h = std::llround(detector::kRefineHalfWindow * fs);
  const long long lo = std::clamp(c - h, 0LL, n - 1);
  const long long hi = std::clamp(c + h, 0LL, n - 1);
  double m = 0.0;
  for (long long i = lo; i <= hi; ++i) m = std::max(m, filtered.energy[static_cast<std::size_t>(i)]);
  return std::sqrt(m);
}

std::vector<BeatMark> post_filter(std::span<const BeatMark> beats, const FilteredSignal& filtered,
                                  const DetectorParams& params) {
  validate(params);
  std::vector<BeatMark> out(beats.begin(), beats.end());
  if (params.post_threshold <= 0.0 || beats.empty()) return out;
  std::vector<double> scores(beats.size());
  for (std::size_t i = 0; i < beats.size(); ++i) scores[i] = beat_score(filtered, beats[i].time);

  const auto h = static_cast<std::size_t>(detector::kPostFilterHalfWindow);
  std::vector<double> window;
  for (std::size_t i = 0; i < beats.size(); ++i) {
    const std::size_t lo = i >= h ? i - h : 0;
    const std::size_t hi = std::min(beats.size(), i + h + 1);
    window.assign(scores.begin() + static_cast<std::ptrdiff_t>(lo), scores.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
    std::nth_element(window.begin(), mid, window.end());
    double median = *mid;
    if (window.size() % 2 == 0) {
      const double lower = *std::max_element(window.begin(), mid);
      median = 0.5 * (median + lower);
    }
    if (scores[i] < params.post_threshold * median) {
      out[i].cls = BeatClass::kExcluded;
      out[i].reason = BeatReason::kLowScore;
    }
  }
  return out;
}

}  // namespace beatmark
