#pragma once

#include "tailidx/estimators.hpp"
#include "tailidx/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

namespace tailidx {

enum class StudyEstimator { mse, hill_k, csn };

inline std::string_view study_estimator_name(StudyEstimator e) noexcept {
  switch (e) {
  case StudyEstimator::mse:
    return "MSE";
  case StudyEstimator::hill_k:
    return "HILL_K";
  case StudyEstimator::csn:
    return "CSN";
  }
  return "?";
}

struct McStudyConfig {
  std::vector<double> zeta_grid{1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0};
  std::vector<std::size_t> sample_sizes{10'000, 100'000, 1'000'000};
  std::size_t runs = 100;
  std::vector<StudyEstimator> estimators{StudyEstimator::mse};
  /// x_min, scale and shift of the generated law; zeta is taken from the grid.
  ParetoSpec spec_base{};
  std::uint64_t master_seed = 0;
  /// Divide each sample by its mean absolute deviation before estimating.
  bool mad_rescale = false;
  CsnConfig csn{};
  /// HILL_K uses k = max(1, round(hill_fraction * N)).
  double hill_fraction = 0.01;

  void validate() const {
    if (runs < 1) {
      throw std::invalid_argument("mc-study: runs must be at least 1");
    }
    if (zeta_grid.empty() || sample_sizes.empty() || estimators.empty()) {
      throw std::invalid_argument("mc-study: empty zeta grid, size list or estimator list");
    }
    for (double z : zeta_grid) {
      ParetoSpec s = spec_base;
      s.zeta = z;
      s.validate();
    }
    csn.validate();
    for (std::size_t n : sample_sizes) {
      if (n < 2 * csn.min_tail_count) {
        throw std::invalid_argument("mc-study: sample sizes must be >= 2 * min_tail_count");
      }
    }
    if (!(hill_fraction > 0.0 && hill_fraction < 1.0)) {
      throw std::invalid_argument("mc-study: hill_fraction must lie in (0, 1)");
    }
  }
};

struct McCellResult {
  double zeta_true = 0.0;
  std::size_t n = 0;
  StudyEstimator estimator = StudyEstimator::mse;
  /// Mean over successful runs; NaN when every run failed.
  double mean_estimate = 0.0;
  /// Sample standard deviation across successful runs (0 for a single run).
  double std_across_runs = 0.0;
  std::size_t runs_failed = 0;
  /// Mean of the per-run reported standard errors; NaN for MSE.
  double mean_std_err = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

} // namespace detail

/// Substream index for one Monte Carlo run. Depends only on the cell's
/// coordinates by value (not on grid position), so adding or removing cells
/// leaves every other cell's draws unchanged.
inline std::uint64_t study_stream_index(double zeta, std::size_t n, StudyEstimator est,
                                        std::size_t run) noexcept {
  std::uint64_t h = detail::splitmix64(std::bit_cast<std::uint64_t>(zeta));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(est));
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(run));
  return h;
}

/// Runs one estimator on one sample; returns (estimate, std_err or NaN).
inline std::pair<double, double> study_estimate(std::span<const double> xs,
                                                StudyEstimator est,
                                                const McStudyConfig& cfg) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  switch (est) {
  case StudyEstimator::mse:
    return {mse(xs).zeta_hat, nan};
  case StudyEstimator::hill_k: {
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.hill_fraction * static_cast<double>(xs.size()))));
    const auto e = hill_fixed_k(xs, std::min(k, xs.size() - 1));
    return {e.zeta_hat, *e.std_err};
  }
  case StudyEstimator::csn: {
    const auto e = csn_fit(xs, cfg.csn);
    return {e.zeta_hat, *e.std_err};
  }
  }
  return {nan, nan};
}

/// Estimator bias over a (zeta x N x estimator) grid. Results come back in
/// grid order (zeta outermost, estimator innermost) and are bit-identical for
/// any worker count: every run owns its substream, and per-cell sums run in
/// run order after all workers finish.
inline std::vector<McCellResult> run_study(const McStudyConfig& cfg, unsigned jobs = 1) {
  cfg.validate();
  struct Cell {
    double zeta;
    std::size_t n;
    StudyEstimator est;
  };
  std::vector<Cell> cells;
  for (double z : cfg.zeta_grid) {
    for (std::size_t n : cfg.sample_sizes) {
      for (auto est : cfg.estimators) {
        cells.push_back({z, n, est});
      }
    }
  }
  const std::size_t runs = cfg.runs;
  const std::size_t total = cells.size() * runs;
  std::vector<double> values(total);
  std::vector<double> errs(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= total) {
        return;
      }
      const Cell& cell = cells[task / runs];
      const std::size_t run = task % runs;
      try {
        ParetoSpec spec = cfg.spec_base;
        spec.zeta = cell.zeta;
        auto xs = sample(cell.n, spec,
                         {cfg.master_seed, study_stream_index(cell.zeta, cell.n, cell.est, run)});
        try {
          if (cfg.mad_rescale) {
            xs = mad_rescale(xs);
          }
          std::tie(values[task], errs[task]) = study_estimate(xs, cell.est, cfg);
        } catch (const std::exception&) {
          values[task] = std::numeric_limits<double>::quiet_NaN();
          errs[task] = std::numeric_limits<double>::quiet_NaN();
        }
      } catch (...) {
        std::lock_guard lock{fatal_mutex};
        if (!fatal) {
          fatal = std::current_exception();
        }
        next.store(total);
      }
    }
  };

  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
  }
  if (fatal) {
    std::rethrow_exception(fatal);
  }

  std::vector<McCellResult> out;
  out.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    McCellResult r;
    r.zeta_true = cells[c].zeta;
    r.n = cells[c].n;
    r.estimator = cells[c].est;
    double sum = 0.0;
    double err_sum = 0.0;
    std::size_t ok = 0;
    for (std::size_t run = 0; run < runs; ++run) {
      const double v = values[c * runs + run];
      if (std::isnan(v)) {
        ++r.runs_failed;
        continue;
      }
      sum += v;
      err_sum += errs[c * runs + run];
      ++ok;
    }
    if (ok == 0) {
      r.mean_estimate = std::numeric_limits<double>::quiet_NaN();
      r.std_across_runs = std::numeric_limits<double>::quiet_NaN();
      out.push_back(r);
      continue;
    }
    r.mean_estimate = sum / static_cast<double>(ok);
    r.mean_std_err = err_sum / static_cast<double>(ok);
    double ss = 0.0;
    for (std::size_t run = 0; run < runs; ++run) {
      const double v = values[c * runs + run];
      if (!std::isnan(v)) {
        ss += (v - r.mean_estimate) * (v - r.mean_estimate);
      }
    }
    r.std_across_runs = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1)) : 0.0;
    out.push_back(r);
  }
  return out;
}

/// Large-N limit of the moment estimator on Pareto data: zeta below 2,
/// saturating at 2 once the variance is finite.
inline double mse_asymptote(double zeta_true) {
  if (!(zeta_true > 0.0)) {
    throw std::invalid_argument("mse_asymptote: zeta must be positive");
  }
  return std::min(zeta_true, 2.0);
}

struct DemoRow {
  std::size_t n = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  double mean_csn = 0.0;
  double std_csn = 0.0;
  double mean_csn_std_err = 0.0;
  std::size_t runs_failed = 0;
};

/// Mean MSE and CSN estimates side by side on Pareto data with a known
/// exponent, one row per sample size.
inline std::vector<DemoRow> underestimation_demo(double zeta_true,
                                                 const std::vector<std::size_t>& sizes,
                                                 std::size_t runs, std::uint64_t seed,
                                                 unsigned jobs = 1,
                                                 const CsnConfig& csn = {}) {
  if (runs == 0) {
    throw std::invalid_argument("underestimation_demo: runs must be at least 1");
  }
  McStudyConfig cfg;
  cfg.zeta_grid = {zeta_true};
  cfg.sample_sizes = sizes;
  cfg.runs = runs;
  cfg.estimators = {StudyEstimator::mse, StudyEstimator::csn};
  cfg.master_seed = seed;
  cfg.csn = csn;
  const auto cells = run_study(cfg, jobs);
  std::vector<DemoRow> rows;
  for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
    DemoRow row;
    row.n = cells[i].n;
    row.mean_mse = cells[i].mean_estimate;
    row.std_mse = cells[i].std_across_runs;
    row.mean_csn = cells[i + 1].mean_estimate;
    row.std_csn = cells[i + 1].std_across_runs;
    row.mean_csn_std_err = cells[i + 1].mean_std_err;
    row.runs_failed = cells[i].runs_failed + cells[i + 1].runs_failed;
    rows.push_back(row);
  }
  return rows;
}

} // namespace tailidx
