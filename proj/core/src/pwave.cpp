#include "beatmark/pwave.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "beatmark/errors.hpp"
#include "beatmark/filters.hpp"

namespace beatmark {

Seconds qt_span(Seconds rr) { return 0.4 * std::sqrt(std::clamp(rr, 0.3, 2.0)); }

bool detect_pwave(const EcgRecord& record, Seconds beat_time, const PWaveOptions& opt) {
  if (!record.has_waveform()) throw NoSamples("P-wave detection needs waveform samples");
  const double fs = record.sample_rate;
  Seconds start = beat_time - pwave::kSearchStart;
  const Seconds end = beat_time - pwave::kSearchEnd;
  if (std::llround(start * fs) < 0) throw WindowOutOfRange("P-wave window starts before the record");
  if (std::llround(end * fs) >= static_cast<long long>(record.samples.size())) {
    throw WindowOutOfRange("P-wave window ends after the record");
  }
  if (opt.previous_beat) start = std::max(start, *opt.previous_beat + qt_span(opt.previous_rr));
  if (end - start < pwave::kMinWindow) return false;
  const long long lo = std::llround(start * fs);
  const long long hi = std::llround(end * fs);
  if (hi - lo < 4) return false;

  const auto n = static_cast<std::size_t>(hi - lo + 1);
  const double sign = opt.inverted ? -1.0 : 1.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = sign * record.samples[static_cast<std::size_t>(lo) + i];

  // Linear detrend (least squares).
  const double xm = (static_cast<double>(n) - 1.0) / 2.0;
  double ym = 0.0;
  for (double v : w) ym += v;
  ym /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - xm;
    sxy += dx * (w[i] - ym);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  for (std::size_t i = 0; i < n; ++i) w[i] -= ym + slope * (static_cast<double>(i) - xm);

  // Residual deviation from first differences.
  double dmean = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) dmean += w[i + 1] - w[i];
  dmean /= static_cast<double>(n - 1);
  double dvar = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = w[i + 1] - w[i] - dmean;
    dvar += d * d;
  }
  const double sigma = std::sqrt(dvar / static_cast<double>(n - 2) / 2.0);

  std::size_t win = static_cast<std::size_t>(std::llround(pwave::kSmoothing * fs));
  if (win % 2 == 0) ++win;
  const auto smooth = dsp::moving_average(w, win);

  // Prominence of each interior local maximum: its height above the higher
  // of the lowest points on either side within the window.
  std::vector<double> left_min(n), right_min(n);
  left_min[0] = smooth[0];
  for (std::size_t i = 1; i < n; ++i) left_min[i] = std::min(left_min[i - 1], smooth[i]);
  right_min[n - 1] = smooth[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) right_min[i] = std::min(right_min[i + 1], smooth[i]);
  double prominence = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1]) {
      prominence = std::max(prominence, smooth[i] - std::max(left_min[i], right_min[i]));
    }
  }
  return prominence > 0.0 && prominence > pwave::kProminenceFactor * opt.sensitivity * sigma;
}

PWave evaluate_pwave(const EcgRecord& record, Seconds beat_time, const PWaveOptions& opt) {
  try {
    return detect_pwave(record, beat_time, opt) ? PWave::kYes : PWave::kNo;
  } catch (const WindowOutOfRange&) {
    return PWave::kNo;
  }
}

}  // namespace beatmark
