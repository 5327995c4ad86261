#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beatmark/annotations.hpp"
#include "beatmark/types.hpp"

namespace beatmark::synthetic {

struct RhythmOptions {
  Seconds duration = 300.0;
  Seconds mean_rr = 0.8;
  double rr_sd = 0.02;          // beat-to-beat jitter, seconds
  double pvc_rate = 0.0;        // probability per beat
  double pac_rate = 0.0;
  Seconds first_beat = 0.5;
  std::uint64_t seed = 1;
};

// Beat times with labels. PVCs arrive at 60% of the running RR and are
// followed by a full compensatory pause; PACs arrive at 70% and reset the
// sinus cycle.
std::vector<Annotation> rhythm(const RhythmOptions& opt);

struct SignalOptions {
  double sample_rate = 360.0;
  double noise_sd = 0.01;      // white noise, mV
  double wander_amp = 0.0;     // baseline wander amplitude, mV
  Seconds wander_period = 8.0;
  std::uint64_t seed = 2;
};

// Sum-of-Gaussians ECG for the given beats over [0, duration). Normal and
// atrial beats carry a P-wave at -160 ms; ventricular beats have no P-wave
// and a wide QRS.
EcgRecord ecg(std::span<const Annotation> beats, Seconds duration, const SignalOptions& opt);

// Adds white noise of standard deviation `sd` to [start, end).
void add_noise(EcgRecord& record, Seconds start, Seconds end, double sd, std::uint64_t seed);

// Noise on the stress-test schedule: from 300 s, alternating 120 s on/off.
void add_nst_noise(EcgRecord& record, double sd, std::uint64_t seed);

// Times of the labelled beats.
std::vector<Seconds> times(std::span<const Annotation> beats);

// Reference annotations for a beat list.
ReferenceAnnotations reference(std::span<const Annotation> beats);

}  // namespace beatmark::synthetic
