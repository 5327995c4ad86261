#include "beatmark/noise_profile.hpp"

#include <algorithm>
#include <cmath>

#include "beatmark/errors.hpp"

namespace beatmark {

NoiseProfile compute_noise_profile(const EcgRecord& record, std::span<const BeatMark> beats, double window_ms) {
  if (!record.has_waveform()) throw NoSamples("noise profile needs waveform samples");
  if (!(window_ms > 0.0)) throw InvalidArgument("noise window must be positive");
  const double fs = record.sample_rate;
  const auto n = static_cast<long long>(record.samples.size());
  const long long half = std::max<long long>(1, std::llround(window_ms / 1000.0 * fs));

  NoiseProfile out;
  out.window_ms = window_ms;
  out.per_beat.reserve(beats.size());
  for (const auto& b : beats) {
    const long long c = std::llround(b.time * fs);
    const long long lo = std::clamp(c - half, 0LL, n - 1);
    const long long hi = std::clamp(c + half, 0LL, n - 1);
    // Differences x[i+1] - x[i] for i in [lo, hi).
    const long long m = hi - lo;
    if (m < 2) {
      out.per_beat.push_back(0.0);
      continue;
    }
    double mean = 0.0;
    for (long long i = lo; i < hi; ++i) {
      mean += (record.samples[static_cast<std::size_t>(i + 1)] - record.samples[static_cast<std::size_t>(i)]);
    }
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (long long i = lo; i < hi; ++i) {
      const double d =
          record.samples[static_cast<std::size_t>(i + 1)] - record.samples[static_cast<std::size_t>(i)] - mean;
      var += d * d;
    }
    var /= static_cast<double>(m);
    out.per_beat.push_back(var * fs * fs);
  }
  return out;
}

std::vector<double> regional_noise_means(std::span<const double> profile, int window) {
  const std::size_t n = profile.size();
  const auto w = static_cast<std::size_t>(std::max(window, 1));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= w ? i - w : 0;
    const std::size_t hi = std::min(n, i + w + 1);
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      if (k != i) sum += profile[k];
    }
    const std::size_t count = hi - lo - 1;
    out[i] = count == 0 ? profile[i] : sum / static_cast<double>(count);
  }
  return out;
}

std::vector<bool> classify_noise(std::span<const double> profile, std::span<const double> regional_means,
                                 double upper_frac) {
  if (profile.size() != regional_means.size()) {
    throw InvalidArgument("noise profile and regional means must be aligned");
  }
  std::vector<bool> out(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out[i] = profile[i] > upper_frac * regional_means[i];
  }
  return out;
}

}  // namespace beatmark
