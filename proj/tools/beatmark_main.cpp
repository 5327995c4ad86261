// beatmark command-line driver: one pipeline run per input, optionally in
// parallel.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/pipeline.hpp"

namespace {

constexpr const char* kExitCodes = R"(Exit codes:
  0  success
  1  unexpected failure
  2  usage error
  3  unreadable or malformed input
  4  record shorter than 120 s
  5  test region cannot be selected
  6  output cannot be written
  7  session file rejected
  8  inconsistent state or invalid parameter)";

struct Outcome {
  int code = 0;
  std::string summary;
  std::string error;
};

Outcome run_one(const beatmark::PipelineConfig& config) {
  Outcome out;
  std::string stage = "input";
  try {
    const auto result = beatmark::run_pipeline(config, &stage);
    out.summary = beatmark::format_summary(result);
  } catch (const beatmark::Error& e) {
    out.code = beatmark::exit_code(e.family());
    out.error = config.input.string() + ": " + stage + ": " + e.what();
  } catch (const std::exception& e) {
    out.code = 1;
    out.error = config.input.string() + ": " + stage + ": " + e.what();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect heartbeats, correct irregular R-R intervals and write artifact-free RRI series."};
  app.footer(kExitCodes);

  std::vector<std::string> inputs;
  std::string format = "auto";
  std::optional<double> sample_rate;
  beatmark::AnalysisParams params;
  std::string pwave = "on";
  std::optional<double> test_duration;
  std::uint64_t seed = 0;
  std::optional<std::string> reuse_region;
  std::string out_dir = ".";
  std::optional<std::string> report;
  std::vector<std::string> references;
  unsigned jobs = 1;

  app.add_option("-i,--input", inputs,
                 "ECG (.txt, .edf, .bdf, WFDB .hea), RRI list (.rri) or session export; repeatable")
      ->required();
  app.add_option("--format", format, "Input format")
      ->check(CLI::IsMember({"auto", "txt", "edf", "bdf", "wfdb", "rri"}))
      ->capture_default_str();
  app.add_option("--sample-rate", sample_rate, "Sample rate in Hz, overriding the file")->check(CLI::PositiveNumber);
  app.add_option("--qrs-threshold", params.detector.qrs_threshold, "QRS detection threshold")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--post-threshold", params.detector.post_threshold, "Post-detection score threshold")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--amplify", params.detector.amplifier, "Signal amplification factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--invert", params.detector.invert, "Invert the signal before detection");
  app.add_option("--rri-upper", params.irregularity.rri_upper_frac, "Upper regional threshold (fraction of mean)")
      ->capture_default_str();
  app.add_option("--rri-lower", params.irregularity.rri_lower_frac, "Lower regional threshold (fraction of mean)")
      ->capture_default_str();
  app.add_option("--grad-inc", params.irregularity.grad_inc_frac, "Gradual increase sensitivity (fraction)")
      ->capture_default_str();
  app.add_option("--grad-dec", params.irregularity.grad_dec_frac, "Gradual decrease sensitivity (fraction)")
      ->capture_default_str();
  app.add_option("--noise-window-ms", params.noise_window_ms, "Half-width of the noise profile window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--loops", params.correction.loops, "Correction passes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--pwave", pwave, "P-wave analysis")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  app.add_option("--pwave-sensitivity", params.correction.pwave_sensitivity,
                 "P-wave prominence multiplier; below 1 is more sensitive")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* dur = app.add_option("--test-duration", test_duration, "Analyse a random span of this many seconds");
  app.add_option("--seed", seed, "Seed for the random test span")->capture_default_str();
  app.add_option("--reuse-region", reuse_region, "Session file whose test span is analysed again")
      ->check(CLI::ExistingFile)
      ->excludes(dur);
  app.add_option("--out-dir", out_dir, "Directory for .rtimes, .bi, session and report")->capture_default_str();
  app.add_option("--report", report, "Report path (a directory when several inputs are given)");
  app.add_option("--reference", references, "Reference annotations, one per input, for validation");
  app.add_option("--jobs", jobs, "Records processed in parallel")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!references.empty() && references.size() != inputs.size()) {
    std::cerr << "beatmark: --reference must be given once per --input\n";
    return 2;
  }
  const auto fmt = beatmark::parse_input_format(format);
  if (!fmt) {
    std::cerr << "beatmark: unknown format " << format << "\n";
    return 2;
  }
  params.correction.analyze_pwaves = pwave == "on";

  std::vector<beatmark::PipelineConfig> configs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    beatmark::PipelineConfig c;
    c.input = inputs[i];
    c.format = *fmt;
    c.sample_rate_override = sample_rate;
    c.params = params;
    c.test_duration = test_duration;
    c.seed = seed;
    if (reuse_region) {
      c.test_region = beatmark::TestRegionMode::kReuse;
      c.reuse_session = *reuse_region;
    }
    c.out_dir = out_dir;
    if (report) {
      if (inputs.size() == 1) {
        c.report_path = *report;
      } else {
        c.report_path = std::filesystem::path(*report) / (c.input.stem().string() + ".report.json");
      }
    }
    if (!references.empty()) c.reference = references[i];
    configs.push_back(std::move(c));
  }

  std::vector<Outcome> outcomes(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) outcomes[i] = run_one(configs[i]);
  };
  const unsigned threads = std::min<unsigned>(jobs, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int rc = 0;
  for (const auto& o : outcomes) {
    if (o.code == 0) {
      std::cout << o.summary;
    } else {
      std::cerr << "beatmark: " << o.error << "\n";
      if (rc == 0) rc = o.code;
    }
  }
  return rc;
}
