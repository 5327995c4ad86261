#include "beatmark/classify.hpp"

#include "beatmark/errors.hpp"
#include "beatmark/irregularity.hpp"

namespace beatmark {

Action action_for(BeatReason label) {
  switch (label) {
    case BeatReason::kBt1:
    case BeatReason::kBt8:
      return Action::kAdjust;
    case BeatReason::kBt2:
    case BeatReason::kBt4:
      return Action::kExclude;
    case BeatReason::kBt3:
    case BeatReason::kBt5:
      return Action::kInclude;
    default:
      return Action::kNone;
  }
}

namespace {

void check_shapes(const ClassifyInput& in) {
  const std::size_t n = in.times.size();
  const bool ok = in.candidate.size() == n && in.pwave.size() == n && in.noisy.size() == n &&
                  in.low_score.size() == n && in.excluded.size() == n && in.regional_mean.size() == n &&
                  in.interval_flags.size() == (n == 0 ? 0 : n - 1);
  if (!ok) throw InvalidArgument("classifier inputs must be aligned with the beat positions");
}

Decision make(BeatReason label, std::optional<std::size_t> partner = std::nullopt) {
  return Decision{label, action_for(label), partner};
}

}  // namespace

bool isolated_valid(const ClassifyInput& in, std::size_t p) {
  const std::size_t n = in.times.size();
  if (p < 2 || p + 2 >= n) return false;
  if (in.interval_flags[p - 2] || in.interval_flags[p + 1]) return false;
  if (in.low_score[p - 1] || in.low_score[p + 1]) return false;
  return !in.excluded[p - 1];
}

std::vector<Decision> classify_candidates(const ClassifyInput& in, const IrregularityParams& params) {
  check_shapes(in);
  const std::size_t n = in.times.size();
  std::vector<Decision> out(n);
  std::vector<bool> consumed(n, false);
  auto d = [&](std::size_t p) { return in.times[p] - in.times[p - 1]; };
  auto has_p = [&](std::size_t p) { return in.analyze_pwaves && in.pwave[p] == PWave::kYes; };
  auto neighbours_clear = [&](std::size_t p) {
    return !in.candidate[p - 1] && (p + 1 >= n || !in.candidate[p + 1]);
  };

  for (std::size_t p = 1; p < n; ++p) {
    if (!in.candidate[p] || consumed[p]) continue;
    const Seconds dp = d(p);
    const bool has_prev = p >= 2;
    const bool has_next = p + 1 < n;
    const Seconds dprev = has_prev ? d(p - 1) : 0.0;
    const bool yes = has_p(p);

    if (!yes && has_prev && has_next && dp < dprev && isolated_valid(in, p)) {
      RegionalStats stats;
      stats.rri_mean = in.regional_mean[p];
      stats.lower_frac = params.rri_lower_frac;
      stats.upper_frac = params.rri_upper_frac;
      if (pair_sum_check(dp, d(p + 1), stats)) {
        out[p] = make(BeatReason::kBt1, p + 1);
        consumed[p + 1] = true;
        continue;
      }
    }
    if (!in.analyze_pwaves || !yes) continue;

    if (has_next && in.candidate[p + 1] && !consumed[p + 1]) {
      out[p] = make(BeatReason::kBt2, p + 1);
      out[p + 1] = make(BeatReason::kBt2, p);
      consumed[p + 1] = true;
      continue;
    }
    const bool clear = neighbours_clear(p);
    if (clear && !in.noisy[p] && has_prev && dp >= dprev && dp <= params.hard_upper_bound &&
        within_gradual(dprev, dp, params)) {
      out[p] = make(BeatReason::kBt3);
      continue;
    }
    if (dp > params.hard_upper_bound) {
      out[p] = make(BeatReason::kBt4);
      continue;
    }
    if (clear && !in.noisy[p] && has_prev && dp < dprev && within_gradual(dprev, dp, params)) {
      out[p] = make(BeatReason::kBt5);
      continue;
    }
  }

  if (!in.analyze_pwaves) return out;

  // Gradual runs: consecutive unresolved (or pair-excluded) candidates whose
  // every successive change, including into and out of the run, is gradual.
  auto open = [&](std::size_t p) {
    return in.candidate[p] && (out[p].label == BeatReason::kNone || out[p].label == BeatReason::kBt2);
  };
  std::size_t p = 2;
  while (p < n) {
    if (!open(p)) {
      ++p;
      continue;
    }
    std::size_t b = p;
    while (b + 1 < n && open(b + 1)) ++b;
    if (b > p) {
      bool ok = true;
      for (std::size_t k = p; k <= b && ok; ++k) {
        ok = has_p(k) && !in.noisy[k] && d(k) <= params.hard_upper_bound && within_gradual(d(k - 1), d(k), params);
      }
      if (ok && b + 1 < n) ok = d(b + 1) <= params.hard_upper_bound && within_gradual(d(b), d(b + 1), params);
      if (ok) {
        const BeatReason label = d(b) >= d(p - 1) ? BeatReason::kBt3 : BeatReason::kBt5;
        for (std::size_t k = p; k <= b; ++k) out[k] = make(label);
      }
    }
    p = b + 1;
  }
  return out;
}

}  // namespace beatmark
