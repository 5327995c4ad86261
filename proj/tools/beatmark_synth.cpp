// Writes a synthetic single-lead ECG with labelled beats, for demos,
// fixtures and benchmarks.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "beatmark/edf.hpp"
#include "beatmark/errors.hpp"
#include "beatmark/signal_io.hpp"
#include "beatmark/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic ECG record and its reference annotations."};
  std::string out;
  std::string format = "txt";
  beatmark::synthetic::RhythmOptions rhythm;
  beatmark::synthetic::SignalOptions signal;
  bool nst = false;
  double nst_sd = 0.1;
  app.add_option("-o,--output", out, "Output path without extension")->required();
  app.add_option("--format", format, "txt, edf or bdf")->check(CLI::IsMember({"txt", "edf", "bdf"}));
  app.add_option("--duration", rhythm.duration, "Seconds")->capture_default_str();
  app.add_option("--mean-rr", rhythm.mean_rr, "Mean R-R interval, seconds")->capture_default_str();
  app.add_option("--rr-sd", rhythm.rr_sd, "Beat-to-beat jitter, seconds")->capture_default_str();
  app.add_option("--pvc-rate", rhythm.pvc_rate, "Premature ventricular beats per beat")->capture_default_str();
  app.add_option("--pac-rate", rhythm.pac_rate, "Premature atrial beats per beat")->capture_default_str();
  app.add_option("--sample-rate", signal.sample_rate, "Hz")->capture_default_str();
  app.add_option("--noise", signal.noise_sd, "White noise SD, mV")->capture_default_str();
  app.add_option("--wander", signal.wander_amp, "Baseline wander amplitude, mV")->capture_default_str();
  app.add_option("--seed", rhythm.seed, "Rhythm seed; the signal uses seed + 1")->capture_default_str();
  app.add_flag("--nst", nst, "Add noise on the stress-test schedule (from 300 s, 120 s on/off)");
  app.add_option("--nst-sd", nst_sd, "SD of the stress-test noise, mV")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    signal.seed = rhythm.seed + 1;
    const auto beats = beatmark::synthetic::rhythm(rhythm);
    auto record = beatmark::synthetic::ecg(beats, rhythm.duration, signal);
    if (nst) beatmark::synthetic::add_nst_noise(record, nst_sd, rhythm.seed + 2);

    std::string ann;
    for (const auto& b : beats) {
      char line[64];
      std::snprintf(line, sizeof line, "%.4f %s\n", b.time, b.code.c_str());
      ann += line;
    }
    beatmark::write_text_file(out + ".ann", ann);
    if (format == "txt") {
      std::string text = "fs=" + std::to_string(static_cast<int>(signal.sample_rate)) + "\n";
      char line[32];
      for (double v : record.samples) {
        std::snprintf(line, sizeof line, "%.5f\n", v);
        text += line;
      }
      beatmark::write_text_file(out + ".txt", text);
    } else {
      beatmark::edf::WriteOptions opt;
      opt.bdf = format == "bdf";
      beatmark::edf::write(out + "." + format, record.samples, signal.sample_rate, opt);
    }
  } catch (const beatmark::Error& e) {
    std::cerr << "beatmark-synth: " << e.what() << '\n';
    return beatmark::exit_code(e.family());
  }
  return 0;
}
