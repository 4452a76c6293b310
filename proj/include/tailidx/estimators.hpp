#pragma once

#include "tailidx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tailidx {

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286;

enum class Method { mse, hill_k, csn, shifted_csn };

inline std::string_view method_name(Method m) noexcept {
  switch (m) {
  case Method::mse:
    return "MSE";
  case Method::hill_k:
    return "HILL_K";
  case Method::csn:
    return "CSN";
  case Method::shifted_csn:
    return "SHIFTED_CSN";
  }
  return "?";
}

/// Output of every tail-index estimator. Fields that do not apply to a
/// method stay empty.
struct Estimate {
  Method method = Method::mse;
  double zeta_hat = 0.0;
  std::optional<double> std_err;
  std::optional<double> threshold;
  std::optional<std::size_t> k;
  std::optional<double> shift_hat;
  std::optional<double> ks_distance;
  /// Size of the sample the estimate was computed from.
  std::size_t n = 0;
  /// Set when the formula was evaluated on a degenerate sample (N = 1 MSE).
  bool degenerate = false;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Which observations count as tail for a threshold t.
enum class TailBoundary {
  closed, ///< q >= t
  open    ///< q > t
};

struct MleOptions {
  std::size_t min_tail_count = 1;
  TailBoundary boundary = TailBoundary::closed;
};

/// Candidate-threshold rule for the KS-minimizing fit.
///
/// Candidates are the distinct order statistics q_(r) (r-th largest) for
/// r in [ceil(lo_fraction * N), floor(hi_fraction * N)], thinned to at most
/// `max_candidates` evenly rank-spaced values.
struct CsnConfig {
  double lo_fraction = 0.005;
  double hi_fraction = 0.5;
  std::size_t max_candidates = 2000;
  std::size_t min_tail_count = 10;

  void validate() const {
    if (min_tail_count < 2) {
      throw std::invalid_argument("csn: min_tail_count must be at least 2");
    }
    if (!(lo_fraction >= 0.0 && lo_fraction <= hi_fraction && hi_fraction <= 1.0)) {
      throw std::invalid_argument("csn: need 0 <= lo_fraction <= hi_fraction <= 1");
    }
    if (max_candidates < 1) {
      throw std::invalid_argument("csn: max_candidates must be positive");
    }
  }
};

/// Evenly spaced additive shifts lo, ..., hi (count points; count == 1 means {lo}).
struct ShiftGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? lo
                               : lo + (hi - lo) * static_cast<double>(i) /
                                          static_cast<double>(count - 1));
    }
    return out;
  }
};

namespace detail {

inline void require_nonempty_finite(std::span<const double> xs, const char* who) {
  if (xs.empty()) {
    throw std::invalid_argument(std::string(who) + ": empty sample");
  }
  for (double x : xs) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(who) + ": non-finite value in sample");
    }
  }
}

inline void require_positive(std::span<const double> xs, const char* who) {
  require_nonempty_finite(xs, who);
  if (*std::min_element(xs.begin(), xs.end()) <= 0.0) {
    throw estimator_error(std::string(who) + ": sample contains non-positive values");
  }
}

/// Mean with one refinement pass; exact enough that shifting by c and
/// re-centering reproduces the deviations to rounding.
inline double mean(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double corr = 0.0;
  for (double x : xs) {
    corr += x - m;
  }
  return m + corr / n;
}

inline std::vector<double> sorted_descending(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end(), std::greater<>{});
  return v;
}

} // namespace detail

/// Meerschaert-Scheffler moment estimator
///
///   zeta = 2 (gamma + ln N) / (gamma + ln_+ S),  S = sum (q_i - mean)^2.
///
/// Consistent only for zeta < 2; converges to 2 when the variance is finite.
/// N = 1 is evaluated (S = 0) and flagged `degenerate`.
inline Estimate mse(std::span<const double> sample) {
  detail::require_nonempty_finite(sample, "mse");
  const double m = detail::mean(sample);
  double s = 0.0;
  for (double q : sample) {
    const double d = q - m;
    s += d * d;
  }
  const double n = static_cast<double>(sample.size());
  const double ln_plus = s > 1.0 ? std::log(s) : 0.0;
  Estimate e;
  e.method = Method::mse;
  e.zeta_hat = 2.0 * (euler_gamma + std::log(n)) / (euler_gamma + ln_plus);
  e.n = sample.size();
  e.degenerate = sample.size() < 2;
  return e;
}

/// Mean absolute deviation (1/N) sum |q_i - mean|.
inline double mean_absolute_deviation(std::span<const double> sample) {
  detail::require_nonempty_finite(sample, "mad");
  const double m = detail::mean(sample);
  double acc = 0.0;
  for (double q : sample) {
    acc += std::abs(q - m);
  }
  return acc / static_cast<double>(sample.size());
}

/// Divides every value by the sample's mean absolute deviation.
inline std::vector<double> mad_rescale(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw estimator_error("mad_rescale: need at least two observations");
  }
  const double mad = mean_absolute_deviation(sample);
  if (!(mad > 0.0)) {
    throw estimator_error("mad_rescale: mean absolute deviation is zero");
  }
  std::vector<double> out(sample.begin(), sample.end());
  for (auto& q : out) {
    q /= mad;
  }
  return out;
}

/// Hill estimator with a fixed number k of upper order statistics:
/// 1 / mean_{i<=k} ln(q_(i) / q_(k+1)).
inline Estimate hill_fixed_k(std::span<const double> sample, std::size_t k) {
  detail::require_positive(sample, "hill");
  if (k < 1 || k >= sample.size()) {
    throw std::invalid_argument("hill: k must satisfy 1 <= k <= N-1");
  }
  auto v = detail::sorted_descending(sample);
  const double threshold = v[k];
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sum += std::log(v[i] / threshold);
  }
  if (!(sum > 0.0)) {
    throw estimator_error("hill: top-k values all equal the threshold");
  }
  Estimate e;
  e.method = Method::hill_k;
  e.zeta_hat = static_cast<double>(k) / sum;
  e.std_err = e.zeta_hat / std::sqrt(static_cast<double>(k));
  e.threshold = threshold;
  e.k = k;
  e.n = sample.size();
  return e;
}

/// Continuous power-law maximum likelihood above a fixed x_min, CCDF
/// convention: zeta = n / sum ln(q_i / x_min) over the tail. The sum runs in
/// sample order.
inline Estimate power_law_mle(std::span<const double> sample, double x_min,
                              const MleOptions& opts = {}) {
  detail::require_nonempty_finite(sample, "power_law_mle");
  if (!(x_min > 0.0)) {
    throw std::invalid_argument("power_law_mle: x_min must be positive");
  }
  const bool closed = opts.boundary == TailBoundary::closed;
  std::size_t n = 0;
  double sum = 0.0;
  for (double q : sample) {
    if (closed ? q >= x_min : q > x_min) {
      ++n;
      sum += std::log(q / x_min);
    }
  }
  if (n == 0 || n < opts.min_tail_count) {
    throw estimator_error("power_law_mle: too few observations above x_min");
  }
  if (!(sum > 0.0)) {
    throw estimator_error("power_law_mle: all tail observations equal x_min");
  }
  Estimate e;
  e.method = Method::csn;
  e.zeta_hat = static_cast<double>(n) / sum;
  e.std_err = e.zeta_hat / std::sqrt(static_cast<double>(n));
  e.threshold = x_min;
  e.k = n;
  e.n = sample.size();
  return e;
}

/// Kolmogorov-Smirnov distance between the empirical CDF of the tail
/// {q >= x_min} and the fitted law F(x) = 1 - (x / x_min)^(-zeta). Both step
/// edges of the empirical CDF are compared at every tail point.
inline double ks_distance(std::span<const double> sample, double x_min, double zeta) {
  if (!(x_min > 0.0) || !(zeta > 0.0)) {
    throw std::invalid_argument("ks_distance: x_min and zeta must be positive");
  }
  std::vector<double> tail;
  for (double q : sample) {
    if (q >= x_min) {
      tail.push_back(q);
    }
  }
  if (tail.empty()) {
    throw estimator_error("ks_distance: no observations at or above x_min");
  }
  std::sort(tail.begin(), tail.end());
  const double n = static_cast<double>(tail.size());
  double d = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double model = 1.0 - std::pow(tail[i] / x_min, -zeta);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(model - below), std::abs(above - model)});
  }
  return d;
}

namespace detail {

struct Candidate {
  double threshold;
  std::size_t tail_count;
};

/// Distinct admissible thresholds in descending order (increasing tail count).
inline std::vector<Candidate> csn_candidates(std::span<const double> desc,
                                             const CsnConfig& cfg) {
  const std::size_t n = desc.size();
  const auto r_lo = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(cfg.lo_fraction * static_cast<double>(n))));
  const auto r_hi = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::floor(cfg.hi_fraction * static_cast<double>(n))));
  std::vector<Candidate> out;
  std::size_t end = 0; // one past the last index with desc[i] >= threshold
  for (std::size_t r = r_lo; r <= r_hi; ++r) {
    const double t = desc[r - 1];
    if (!out.empty() && out.back().threshold == t) {
      continue;
    }
    end = std::max(end, r);
    while (end < n && desc[end] >= t) {
      ++end;
    }
    if (end >= cfg.min_tail_count) {
      out.push_back({t, end});
    }
  }
  if (out.size() > cfg.max_candidates) {
    std::vector<Candidate> thinned;
    thinned.reserve(cfg.max_candidates);
    const std::size_t last = out.size() - 1;
    for (std::size_t i = 0; i < cfg.max_candidates; ++i) {
      const std::size_t j =
          cfg.max_candidates == 1 ? 0 : (i * last + (cfg.max_candidates - 1) / 2) /
                                            (cfg.max_candidates - 1);
      thinned.push_back(out[j]);
    }
    out = std::move(thinned);
  }
  return out;
}

} // namespace detail

/// KS-minimizing threshold selection with a continuous power-law MLE at each
/// candidate (Clauset-Shalizi-Newman scheme, CCDF convention).
///
/// The scan works in log space with prefix sums and abandons a candidate as
/// soon as its running KS exceeds the best so far. Candidates within rounding
/// of the minimum are re-evaluated with power_law_mle / ks_distance, and the
/// returned fields come from that canonical evaluation. Ties go to the higher
/// threshold.
inline Estimate csn_fit(std::span<const double> sample, const CsnConfig& cfg = {}) {
  cfg.validate();
  detail::require_positive(sample, "csn_fit");
  if (sample.size() < 2 * cfg.min_tail_count) {
    throw estimator_error("csn_fit: sample smaller than 2 * min_tail_count");
  }
  const auto desc = detail::sorted_descending(sample);
  const auto candidates = detail::csn_candidates(desc, cfg);
  if (candidates.empty()) {
    throw estimator_error("csn_fit: no admissible threshold candidate");
  }

  const std::size_t n = desc.size();
  std::vector<double> logs(n);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    logs[i] = std::log(desc[i]);
    prefix[i + 1] = prefix[i] + logs[i];
  }

  constexpr double rel_slack = 1e-9;
  constexpr double abs_slack = 1e-15;
  constexpr double not_evaluated = -1.0;
  std::vector<double> fast_d(candidates.size(), not_evaluated);
  // Coarse pass over every 32nd candidate first to tighten the pruning bound.
  constexpr std::size_t stride = 32;
  std::vector<std::size_t> order;
  order.reserve(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); c += stride) {
    order.push_back(c);
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (c % stride != 0) {
      order.push_back(c);
    }
  }
  double best = 2.0;
  for (std::size_t c : order) {
    const auto [t, k] = candidates[c];
    const double lt = std::log(t);
    const double sum = prefix[k] - static_cast<double>(k) * lt;
    if (!(sum > 0.0)) {
      continue;
    }
    const double zeta = static_cast<double>(k) / sum;
    const double bound = best * (1.0 + rel_slack) + abs_slack;
    const double kk = static_cast<double>(k);
    // Deviation at the j-th smallest tail point, both step edges.
    auto deviation = [&](std::size_t j) {
      const double model = -std::expm1(-zeta * (logs[k - 1 - j] - lt));
      const double below = static_cast<double>(j) / kk;
      return std::max(std::abs(model - below), std::abs(below + 1.0 / kk - model));
    };
    // A sparse probe rejects clearly worse candidates cheaply; the dense pass
    // then runs ascending from the threshold, where misfits usually show up.
    constexpr std::size_t probe_stride = 32;
    double d = 0.0;
    for (std::size_t j = 0; j < k && d <= bound; j += probe_stride) {
      d = std::max(d, deviation(j));
    }
    for (std::size_t j = 0; j < k && d <= bound; ++j) {
      d = std::max(d, deviation(j));
    }
    if (d > bound) {
      continue;
    }
    fast_d[c] = d;
    best = std::min(best, d);
  }

  const double cutoff = best * (1.0 + rel_slack) + abs_slack;
  std::optional<Estimate> chosen;
  const MleOptions mle_opts{cfg.min_tail_count, TailBoundary::closed};
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (fast_d[c] == not_evaluated || fast_d[c] > cutoff) {
      continue;
    }
    Estimate e;
    try {
      e = power_law_mle(sample, candidates[c].threshold, mle_opts);
    } catch (const estimator_error&) {
      continue;
    }
    e.ks_distance = ks_distance(sample, candidates[c].threshold, e.zeta_hat);
    if (!chosen || *e.ks_distance < *chosen->ks_distance) {
      chosen = e;
    }
  }
  if (!chosen) {
    throw estimator_error("csn_fit: no admissible threshold candidate");
  }
  chosen->method = Method::csn;
  return *chosen;
}

/// Default shift grid: 41 shifts spanning [-0.5 * min, 2 * median].
inline ShiftGrid default_shift_grid(std::span<const double> sample) {
  detail::require_nonempty_finite(sample, "shift grid");
  std::vector<double> v(sample.begin(), sample.end());
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double median = *mid;
  if (v.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(v.begin(), mid));
  }
  const double smallest = *std::min_element(v.begin(), v.end());
  return {-0.5 * smallest, 2.0 * median, 41};
}

/// Joint KS minimization over (shift, threshold): csn_fit on {q_i + s} for
/// each grid shift s. Shifts that leave a non-positive value, or for which
/// csn_fit fails, are skipped. The reported exponent and threshold refer to
/// the shifted variable. Ties go to the earlier shift in the grid.
inline Estimate shifted_csn_fit(std::span<const double> sample, const CsnConfig& cfg,
                                const ShiftGrid& grid) {
  cfg.validate();
  detail::require_nonempty_finite(sample, "shifted_csn_fit");
  if (grid.count == 0) {
    throw std::invalid_argument("shifted_csn_fit: empty shift grid");
  }
  const double smallest = *std::min_element(sample.begin(), sample.end());
  std::optional<Estimate> best;
  std::vector<double> shifted(sample.size());
  for (double s : grid.values()) {
    if (!(smallest + s > 0.0)) {
      continue;
    }
    std::transform(sample.begin(), sample.end(), shifted.begin(),
                   [s](double q) { return q + s; });
    Estimate e;
    try {
      e = csn_fit(shifted, cfg);
    } catch (const estimator_error&) {
      continue;
    }
    if (!best || *e.ks_distance < *best->ks_distance) {
      e.shift_hat = s;
      best = e;
    }
  }
  if (!best) {
    throw estimator_error("shifted_csn_fit: every shifted sample is inadmissible");
  }
  best->method = Method::shifted_csn;
  return *best;
}

inline Estimate shifted_csn_fit(std::span<const double> sample, const CsnConfig& cfg = {}) {
  return shifted_csn_fit(sample, cfg, default_shift_grid(sample));
}

} // namespace tailidx
