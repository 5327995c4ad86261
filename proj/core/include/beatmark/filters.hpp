#pragma once

#include <span>
#include <vector>

namespace beatmark::dsp {

// Second-order section, direct form II transposed. a0 is normalised to 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  static Biquad butterworth_lowpass(double cutoff_hz, double sample_rate);
  static Biquad butterworth_highpass(double cutoff_hz, double sample_rate);

  // DC gain, H(z = 1).
  double dc_gain() const { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

// Causal filtering starting from the steady state for a constant input equal
// to x[0], so a constant signal passes with no start-up transient.
void lfilter_inplace(const Biquad& s, std::span<double> x);

// Zero-phase filtering: forward then backward pass over an odd-reflected
// extension of `pad` samples at each end.
std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x, std::size_t pad);

// Centered moving average with an odd window, truncated at the edges.
std::vector<double> moving_average(std::span<const double> x, std::size_t window);

}  // namespace beatmark::dsp
