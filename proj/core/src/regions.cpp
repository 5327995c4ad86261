#include "beatmark/regions.hpp"

#include <algorithm>

#include "beatmark/errors.hpp"

namespace beatmark {

std::vector<Region> normalize_regions(std::vector<Region> regions) {
  std::stable_sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.start < b.start; });
  std::vector<Region> out;
  for (const Region& r : regions) {
    if (!(r.end > r.start)) continue;
    if (!out.empty() && r.start <= out.back().end) {
      out.back().end = std::max(out.back().end, r.end);
      continue;
    }
    out.push_back(r);
  }
  return out;
}

std::vector<Region> mark_regions(std::span<const BeatMark> beats, Seconds record_duration, int training) {
  std::vector<const BeatMark*> act;
  for (const auto& b : beats) {
    if (is_active(b)) act.push_back(&b);
  }
  std::vector<Region> regions;
  const std::size_t n = act.size();
  if (n == 0) return regions;
  const auto w = static_cast<std::size_t>(std::max(training, 0));
  auto mid = [&](std::size_t i) { return 0.5 * (act[i]->time + act[i + 1]->time); };

  if (w > 0) {
    if (n <= 2 * w) {
      regions.push_back({0.0, record_duration, RegionReason::kTraining});
    } else {
      regions.push_back({0.0, mid(w - 1), RegionReason::kTraining});
      regions.push_back({mid(n - w - 1), record_duration, RegionReason::kTraining});
    }
  }

  std::size_t i = 0;
  while (i < n) {
    if (act[i]->cls != BeatClass::kExcluded) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::size_t noisy = 0;
    while (j < n && act[j]->cls == BeatClass::kExcluded) {
      if (act[j]->noisy) ++noisy;
      ++j;
    }
    const Seconds start = i == 0 ? 0.0 : mid(i - 1);
    const Seconds end = j == n ? record_duration : mid(j - 1);
    const auto reason = 2 * noisy >= j - i ? RegionReason::kNoise : RegionReason::kIrregular;
    regions.push_back({start, std::max(end, start), reason});
    i = j;
  }
  return normalize_regions(std::move(regions));
}

std::size_t count_spectral_epochs(std::span<const Seconds> output_times, std::span<const Region> regions,
                                  Seconds record_duration, Seconds accept_min, Seconds accept_max, Seconds epoch) {
  if (!(epoch > 0.0)) throw InvalidArgument("epoch length must be positive");
  Seconds anchor = 0.0;
  for (const Region& r : regions) {
    if (r.reason == RegionReason::kTraining && r.start <= 0.0) anchor = std::max(anchor, r.end);
  }
  std::size_t count = 0;
  for (Seconds s = anchor; s + epoch <= record_duration; s += epoch) {
    const Seconds e = s + epoch;
    bool ok = std::none_of(regions.begin(), regions.end(), [&](const Region& r) {
      return r.reason != RegionReason::kTraining && r.start < e && r.end > s;
    });
    if (ok) {
      // Every interval overlapping the window, including those crossing its edges.
      auto it = std::lower_bound(output_times.begin(), output_times.end(), s);
      if (it == output_times.end() || *it >= e) ok = false;
      if (it != output_times.begin()) --it;
      for (; ok && it + 1 != output_times.end() && *it < e; ++it) {
        const Seconds d = *(it + 1) - *it;
        if (d < accept_min || d > accept_max) ok = false;
      }
    }
    if (ok) ++count;
  }
  return count;
}

std::vector<Seconds> output_times(std::span<const BeatMark> beats) {
  std::vector<Seconds> out;
  for (const auto& b : beats) {
    if (is_output_class(b.cls)) out.push_back(b.time);
  }
  return out;
}

}  // namespace beatmark
