#include "beatmark/validation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "beatmark/errors.hpp"

namespace beatmark {

namespace {

double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

Matching match_beats(std::span<const Seconds> detected, std::span<const Seconds> reference, Seconds tolerance) {
  Matching m;
  m.detected_to_reference.assign(detected.size(), std::nullopt);
  m.reference_to_detected.assign(reference.size(), std::nullopt);

  std::vector<std::size_t> det_order(detected.size());
  for (std::size_t i = 0; i < det_order.size(); ++i) det_order[i] = i;
  std::stable_sort(det_order.begin(), det_order.end(),
                   [&](std::size_t a, std::size_t b) { return detected[a] < detected[b]; });

  struct Pair {
    double dist;
    std::size_t ref;
    std::size_t det;
  };
  std::vector<Pair> pairs;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    auto it = std::lower_bound(det_order.begin(), det_order.end(), reference[r] - tolerance,
                               [&](std::size_t i, double v) { return detected[i] < v; });
    for (; it != det_order.end() && detected[*it] <= reference[r] + tolerance; ++it) {
      pairs.push_back({std::abs(detected[*it] - reference[r]), r, *it});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.dist, a.ref, a.det) < std::tie(b.dist, b.ref, b.det);
  });
  for (const Pair& p : pairs) {
    if (m.reference_to_detected[p.ref] || m.detected_to_reference[p.det]) continue;
    m.reference_to_detected[p.ref] = p.det;
    m.detected_to_reference[p.det] = p.ref;
    ++m.matched;
  }
  return m;
}

std::map<std::string, double> ValidationReport::metrics() const {
  return {
      {"accuracy", accuracy},
      {"detected_beats", static_cast<double>(detected_beats)},
      {"epochs_post", static_cast<double>(epochs_post)},
      {"epochs_pre", static_cast<double>(epochs_pre)},
      {"irregular_prop", irregular_prop},
      {"matched_beats", static_cast<double>(matched_beats)},
      {"not_present_prop", not_present_prop},
      {"pac_excluded_prop", pac_excluded_prop},
      {"pac_found_prop", pac_found_prop},
      {"ppv", ppv},
      {"precision", precision},
      {"proportion_normal", proportion_normal},
      {"pvc_found_prop", pvc_found_prop},
      {"pvc_included_prop", pvc_included_prop},
      {"reference_beats", static_cast<double>(reference_beats)},
      {"valid_prop", valid_prop},
  };
}

ValidationReport compute_metrics(const Matching& matching, std::span<const BeatMark> detected,
                                 std::span<const Annotation> reference) {
  if (matching.detected_to_reference.size() != detected.size() ||
      matching.reference_to_detected.size() != reference.size()) {
    throw InvalidArgument("matching does not fit the beat lists");
  }
  ValidationReport r;
  r.reference_beats = reference.size();
  r.detected_beats = detected.size();
  r.matched_beats = matching.matched;

  std::size_t valid = 0, irregular = 0;
  std::size_t n_total = 0, n_in = 0;
  std::size_t v_total = 0, v_found = 0, v_in = 0;
  std::size_t a_total = 0, a_found = 0, a_out = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto& match = matching.reference_to_detected[i];
    const bool found = match.has_value();
    const bool output = found && is_output_class(detected[*match].cls);
    if (found) (output ? valid : irregular) += 1;
    switch (reference[i].label) {
      case AnnotationLabel::kNormal:
        ++n_total;
        if (output) ++n_in;
        break;
      case AnnotationLabel::kPrematureVentricular:
        ++v_total;
        if (found) ++v_found;
        if (output) ++v_in;
        break;
      case AnnotationLabel::kAtrialPremature:
        ++a_total;
        if (found) ++a_found;
        if (found && !output) ++a_out;
        break;
      default:
        break;
    }
  }
  const std::size_t not_present = reference.size() - valid - irregular;
  r.accuracy = ratio(matching.matched, reference.size());
  r.precision = ratio(detected.size(), reference.size());
  r.ppv = ratio(matching.matched, detected.size());
  r.proportion_normal = ratio(n_in, n_total);
  r.pvc_found_prop = ratio(v_found, v_total);
  r.pvc_included_prop = ratio(v_in, v_total);
  r.pac_found_prop = ratio(a_found, a_total);
  r.pac_excluded_prop = ratio(a_out, a_total);
  r.valid_prop = ratio(valid, reference.size());
  r.irregular_prop = ratio(irregular, reference.size());
  r.not_present_prop = ratio(not_present, reference.size());
  return r;
}

ValidationReport validate_beats(std::span<const BeatMark> beats, const ReferenceAnnotations& reference,
                                Seconds tolerance) {
  std::vector<BeatMark> active;
  std::vector<Seconds> det_times;
  for (const auto& b : beats) {
    if (!is_active(b)) continue;
    active.push_back(b);
    det_times.push_back(b.time);
  }
  std::vector<Annotation> ref;
  std::vector<Seconds> ref_times;
  for (const auto& a : reference.entries) {
    if (!a.is_beat()) continue;
    ref.push_back(a);
    ref_times.push_back(a.time);
  }
  const Matching m = match_beats(det_times, ref_times, tolerance);
  return compute_metrics(m, active, ref);
}

bool in_nst_noise_segment(Seconds t, Seconds first, Seconds segment) {
  if (t < first) return false;
  const auto k = static_cast<long long>(std::floor((t - first) / segment));
  return k % 2 == 0;
}

double noise_accuracy(const std::vector<bool>& noisy, const std::vector<bool>& truth) {
  if (noisy.size() != truth.size()) throw InvalidArgument("noise flags and truth must be aligned");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] == truth[i]) ++agree;
  }
  return ratio(agree, noisy.size());
}

double nst_noise_accuracy(std::span<const BeatMark> beats) {
  std::vector<bool> flags, truth;
  for (const auto& b : beats) {
    if (!is_active(b)) continue;
    flags.push_back(b.noisy);
    truth.push_back(in_nst_noise_segment(b.time));
  }
  return noise_accuracy(flags, truth);
}

}  // namespace beatmark
