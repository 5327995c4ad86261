#include "beatmark/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beatmark/errors.hpp"

namespace beatmark::dsp {

namespace {

Biquad rbj(double cutoff_hz, double sample_rate, bool highpass) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate / 2.0)) {
    throw InvalidArgument("filter cutoff must lie in (0, fs/2)");
  }
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::numbers::sqrt2;  // Q = 1/sqrt(2)
  const double a0 = 1.0 + alpha;
  Biquad s;
  if (highpass) {
    s.b0 = (1.0 + cw) / 2.0 / a0;
    s.b1 = -(1.0 + cw) / a0;
    s.b2 = s.b0;
  } else {
    s.b0 = (1.0 - cw) / 2.0 / a0;
    s.b1 = (1.0 - cw) / a0;
    s.b2 = s.b0;
  }
  s.a1 = -2.0 * cw / a0;
  s.a2 = (1.0 - alpha) / a0;
  return s;
}

}  // namespace

Biquad Biquad::butterworth_lowpass(double cutoff_hz, double sample_rate) {
  return rbj(cutoff_hz, sample_rate, false);
}

Biquad Biquad::butterworth_highpass(double cutoff_hz, double sample_rate) {
  return rbj(cutoff_hz, sample_rate, true);
}

void lfilter_inplace(const Biquad& s, std::span<double> x) {
  if (x.empty()) return;
  const double c = x[0];
  const double h1 = s.dc_gain();
  double z2 = (s.b2 - s.a2 * h1) * c;
  double z1 = (s.b1 - s.a1 * h1) * c + z2;
  for (double& v : x) {
    const double in = v;
    const double y = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * y + z2;
    z2 = s.b2 * in - s.a2 * y;
    v = y;
  }
}

std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  pad = std::min(pad, n - 1);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  for (const auto& s : sections) lfilter_inplace(s, ext);
  std::reverse(ext.begin(), ext.end());
  for (const auto& s : sections) lfilter_inplace(s, ext);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> moving_average(std::span<const double> x, std::size_t window) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const std::size_t half = window / 2;
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n, i + half + 1);
    out[i] = static_cast<double>((prefix[hi] - prefix[lo]) / static_cast<long double>(hi - lo));
  }
  return out;
}

}  // namespace beatmark::dsp
