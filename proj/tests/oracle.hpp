#pragma once

// Brute-force reference for the KS-minimizing threshold fit. Written without
// the library's prefix sums, pruning or candidate thinning: for every
// admissible candidate it recomputes the tail MLE and KS distance from
// scratch and keeps the first minimum in descending-threshold order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

struct Fit {
  double threshold = 0.0;
  double zeta = 0.0;
  double ks = 0.0;
  std::size_t k = 0;
};

inline std::optional<Fit> exhaustive_csn(const std::vector<double>& xs, double lo_fraction,
                                         double hi_fraction, std::size_t min_tail) {
  std::vector<double> desc = xs;
  std::sort(desc.begin(), desc.end(), std::greater<>{});
  const double n = static_cast<double>(xs.size());
  auto r_lo = static_cast<std::size_t>(std::ceil(lo_fraction * n));
  if (r_lo < 1) {
    r_lo = 1;
  }
  const auto r_hi = static_cast<std::size_t>(std::floor(hi_fraction * n));

  std::vector<double> thresholds;
  for (std::size_t r = r_lo; r <= r_hi && r <= xs.size(); ++r) {
    if (std::find(thresholds.begin(), thresholds.end(), desc[r - 1]) == thresholds.end()) {
      thresholds.push_back(desc[r - 1]);
    }
  }

  std::optional<Fit> best;
  for (double t : thresholds) {
    std::size_t k = 0;
    double sum = 0.0;
    for (double q : xs) {
      if (q >= t) {
        ++k;
        sum += std::log(q / t);
      }
    }
    if (k < min_tail || !(sum > 0.0)) {
      continue;
    }
    const double zeta = static_cast<double>(k) / sum;

    std::vector<double> tail;
    for (double q : xs) {
      if (q >= t) {
        tail.push_back(q);
      }
    }
    std::sort(tail.begin(), tail.end());
    double d = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
      const double f = 1.0 - std::pow(tail[i] / t, -zeta);
      d = std::max(d, std::abs(f - static_cast<double>(i) / static_cast<double>(k)));
      d = std::max(d, std::abs(static_cast<double>(i + 1) / static_cast<double>(k) - f));
    }
    if (!best || d < best->ks) {
      best = Fit{t, zeta, d, k};
    }
  }
  return best;
}

} // namespace oracle
