#include "beatmark/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "beatmark/errors.hpp"

namespace beatmark::synthetic {

namespace {

struct Wave {
  double amp;
  Seconds offset;
  Seconds width;
};

constexpr Wave kNormal[] = {
    {0.15, -0.160, 0.025},  // P
    {-0.10, -0.030, 0.010}, // Q
    {1.00, 0.000, 0.010},   // R
    {-0.20, 0.030, 0.010},  // S
    {0.30, 0.250, 0.040},   // T
};

constexpr Wave kVentricular[] = {
    {1.30, 0.000, 0.035},
    {-0.40, 0.080, 0.030},
    {-0.35, 0.320, 0.060},
};

Annotation beat(Seconds t, AnnotationLabel label, const char* code) { return Annotation{t, label, code}; }

}  // namespace

std::vector<Annotation> rhythm(const RhythmOptions& opt) {
  if (!(opt.mean_rr > 0.0) || !(opt.duration > 0.0)) throw InvalidArgument("rhythm needs positive duration and RR");
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> jitter(0.0, opt.rr_sd);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Annotation> out;
  Seconds t = opt.first_beat;
  while (t < opt.duration - 0.3) {
    out.push_back(beat(t, AnnotationLabel::kNormal, "N"));
    const Seconds rr = std::max(0.35, opt.mean_rr + jitter(rng));
    const double draw = u(rng);
    const bool near_edges = t < 30.0 || t > opt.duration - 30.0;
    if (!near_edges && draw < opt.pvc_rate) {
      const Seconds early = t + 0.6 * rr;
      if (early < opt.duration - 0.3) out.push_back(beat(early, AnnotationLabel::kPrematureVentricular, "V"));
      t += 2.0 * rr;
    } else if (!near_edges && draw < opt.pvc_rate + opt.pac_rate) {
      const Seconds early = t + 0.7 * rr;
      if (early < opt.duration - 0.3) out.push_back(beat(early, AnnotationLabel::kAtrialPremature, "A"));
      t = early + rr;
    } else {
      t += rr;
    }
  }
  return out;
}

EcgRecord ecg(std::span<const Annotation> beats, Seconds duration, const SignalOptions& opt) {
  if (!(opt.sample_rate > 0.0) || !(duration > 0.0)) throw InvalidArgument("signal needs positive rate and duration");
  const double fs = opt.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(duration * fs));
  EcgRecord rec;
  rec.sample_rate = fs;
  rec.samples.assign(n, 0.0);
  for (const auto& b : beats) {
    const bool ventricular = b.label == AnnotationLabel::kPrematureVentricular;
    const std::span<const Wave> waves = ventricular ? std::span<const Wave>(kVentricular) : std::span<const Wave>(kNormal);
    for (const Wave& w : waves) {
      const double c = (b.time + w.offset) * fs;
      const double half = 5.0 * w.width * fs;
      const auto lo = static_cast<long long>(std::max(0.0, std::floor(c - half)));
      const auto hi = std::min(static_cast<long long>(n) - 1, static_cast<long long>(std::ceil(c + half)));
      for (long long i = lo; i <= hi; ++i) {
        const double z = (static_cast<double>(i) - c) / (w.width * fs);
        rec.samples[static_cast<std::size_t>(i)] += w.amp * std::exp(-0.5 * z * z);
      }
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double v = rec.samples[i];
    if (opt.noise_sd > 0.0) v += opt.noise_sd * noise(rng);
    if (opt.wander_amp > 0.0) v += opt.wander_amp * std::sin(2.0 * std::numbers::pi * t / opt.wander_period);
    rec.samples[i] = v;
  }
  return rec;
}

void add_noise(EcgRecord& record, Seconds start, Seconds end, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  const double fs = record.sample_rate;
  const auto n = static_cast<long long>(record.samples.size());
  const long long lo = std::clamp(static_cast<long long>(std::llround(start * fs)), 0LL, n);
  const long long hi = std::clamp(static_cast<long long>(std::llround(end * fs)), 0LL, n);
  for (long long i = lo; i < hi; ++i) record.samples[static_cast<std::size_t>(i)] += noise(rng);
}

void add_nst_noise(EcgRecord& record, double sd, std::uint64_t seed) {
  const Seconds end = record.duration();
  std::uint64_t k = 0;
  for (Seconds s = 300.0; s < end; s += 240.0) add_noise(record, s, std::min(s + 120.0, end), sd, seed + k++);
}

std::vector<Seconds> times(std::span<const Annotation> beats) {
  std::vector<Seconds> out;
  out.reserve(beats.size());
  for (const auto& b : beats) out.push_back(b.time);
  return out;
}

ReferenceAnnotations reference(std::span<const Annotation> beats) {
  ReferenceAnnotations r;
  r.entries.assign(beats.begin(), beats.end());
  return r;
}

}  // namespace beatmark::synthetic
