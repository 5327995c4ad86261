#include <benchmark/benchmark.h>

#include "beatmark/beat_detection.hpp"
#include "beatmark/correction.hpp"
#include "beatmark/noise_profile.hpp"
#include "beatmark/pipeline.hpp"
#include "beatmark/synthetic.hpp"

using namespace beatmark;

namespace {

// One hour at 360 Hz with 2% PVCs and 2% PACs.
const EcgRecord& hour_record() {
  static const EcgRecord rec = [] {
    synthetic::RhythmOptions ro;
    ro.duration = 3600.0;
    ro.pvc_rate = 0.02;
    ro.pac_rate = 0.02;
    synthetic::SignalOptions so;
    so.noise_sd = 0.02;
    so.wander_amp = 0.1;
    return synthetic::ecg(synthetic::rhythm(ro), ro.duration, so);
  }();
  return rec;
}

void BM_Detection(benchmark::State& state) {
  const auto& rec = hour_record();
  const DetectorParams p;
  for (auto _ : state) {
    const auto filtered = preprocess(rec, p);
    auto beats = post_filter(detect_qrs(filtered, p), filtered, p);
    benchmark::DoNotOptimize(beats.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(rec.samples.size()));
}
BENCHMARK(BM_Detection)->Unit(benchmark::kMillisecond);

void BM_NoiseProfile(benchmark::State& state) {
  const auto& rec = hour_record();
  const DetectorParams p;
  const auto beats = detect_qrs(preprocess(rec, p), p);
  for (auto _ : state) benchmark::DoNotOptimize(compute_noise_profile(rec, beats).per_beat.data());
}
BENCHMARK(BM_NoiseProfile)->Unit(benchmark::kMillisecond);

void BM_CorrectionLoops(benchmark::State& state) {
  const auto& rec = hour_record();
  const DetectorParams p;
  auto detected = detect_qrs(preprocess(rec, p), p);
  identify_outliers(detected, IrregularityParams{});
  for (auto _ : state) {
    auto beats = detected;
    benchmark::DoNotOptimize(run_correction_loops(beats, IrregularityParams{}, CorrectionParams{}).events.size());
  }
}
BENCHMARK(BM_CorrectionLoops)->Unit(benchmark::kMillisecond);

void BM_AnalyzeRecord(benchmark::State& state) {
  const auto& rec = hour_record();
  for (auto _ : state) benchmark::DoNotOptimize(analyze_record(rec, AnalysisParams{}).beats.size());
}
BENCHMARK(BM_AnalyzeRecord)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
