// Full-scale Monte Carlo checks of estimator consistency and bias
// (100 runs per cell, N up to 10^6). Slow: minutes on one core.

#include "oracle.hpp"
#include "study_cache.hpp"

#include "tailidx/estimators.hpp"
#include "tailidx/mcstudy.hpp"
#include "tailidx/sampler.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace tailidx;
using study_cache::cell;

TEST_CASE("MSE reads well below 2 on Pareto data with zeta = 2.02", "[statistical][mse]") {
  const auto& c = cell(2.02, 100'000, StudyEstimator::mse);
  INFO("mean MSE " << c.mean_estimate);
  CHECK(c.runs_failed == 0);
  CHECK(c.mean_estimate < 1.9);
}

TEST_CASE("MSE saturates at 2 for finite-variance data", "[statistical][mse]") {
  const auto& c = cell(3.0, 1'000'000, StudyEstimator::mse);
  INFO("mean MSE " << c.mean_estimate);
  CHECK(std::abs(c.mean_estimate - 2.0) <= 0.15);
}

TEST_CASE("Hill with k = 1000 is consistent on exact Pareto data", "[statistical][hill]") {
  const auto& c = cell(2.0, 100'000, StudyEstimator::hill_k, 100, 0.01);
  INFO("mean Hill " << c.mean_estimate);
  CHECK(c.runs_failed == 0);
  CHECK(std::abs(c.mean_estimate - 2.0) <= 0.05);
}

TEST_CASE("MLE at the true x_min lands within 3 standard errors", "[statistical][mle]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto xs = sample(100'000, {1.65, 1.0, 1.0, 0.0}, {4711, seed});
    const auto est = power_law_mle(xs, 1.0);
    INFO("seed " << seed << " zeta_hat " << est.zeta_hat << " se " << *est.std_err);
    CHECK(std::abs(est.zeta_hat - 1.65) <= 3 * *est.std_err);
  }
}

TEST_CASE("CSN is consistent on exact Pareto data", "[statistical][csn]") {
  for (double zeta : {1.5, 2.0, 2.5}) {
    const auto& c = cell(zeta, 100'000, StudyEstimator::csn);
    INFO("zeta " << zeta << " mean " << c.mean_estimate << " std " << c.std_across_runs
                 << " mean se " << c.mean_std_err);
    CHECK(c.runs_failed == 0);
    CHECK(std::abs(c.mean_estimate - zeta) <= 0.05);
    CHECK(c.std_across_runs <= 3 * c.mean_std_err);
  }
}

TEST_CASE("Thinned candidate grid agrees with the full exhaustive grid", "[statistical][csn]") {
  // N = 10^4 has 4950 candidate ranks, so the 2000-candidate cap applies.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto xs = sample(10'000, {2.0, 1.0, 1.0, 0.0}, {3141, seed});
    const auto est = csn_fit(xs);
    const auto ref = oracle::exhaustive_csn(xs, 0.005, 0.5, 10);
    REQUIRE(ref);
    INFO("seed " << seed << " thinned " << est.zeta_hat << " full " << ref->zeta);
    CHECK(std::abs(est.zeta_hat - ref->zeta) <= *est.std_err);
    CHECK(*est.ks_distance >= ref->ks);
    CHECK(*est.ks_distance <= ref->ks * 1.5);
  }
}

TEST_CASE("Shifted CSN recovers a known shift", "[statistical][shifted]") {
  // Pareto(2, 1) - 0.9; the shift that restores a pure power law is +0.9.
  constexpr int runs = 100;
  double shift_sum = 0.0;
  double zeta_sum = 0.0;
  for (int r = 0; r < runs; ++r) {
    const auto xs = sample(100'000, {2.0, 1.0, 1.0, -0.9}, {2718, static_cast<std::uint64_t>(r)});
    const auto est = shifted_csn_fit(xs, {}, ShiftGrid{0.0, 2.0, 21});
    shift_sum += *est.shift_hat;
    zeta_sum += est.zeta_hat;
  }
  const double mean_shift = shift_sum / runs;
  const double mean_zeta = zeta_sum / runs;
  INFO("mean shift " << mean_shift << " mean zeta " << mean_zeta);
  CHECK(std::abs(mean_shift - 0.9) <= 0.1);
  CHECK(std::abs(mean_zeta - 2.0) <= 0.1);
}

TEST_CASE("Underestimation demo at zeta = 2.02", "[statistical][demo]") {
  const auto rows = underestimation_demo(2.02, {10'000, 100'000, 1'000'000}, 100,
                                         study_cache::master_seed, study_cache::jobs());
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    INFO("N " << row.n << " MSE " << row.mean_mse << " CSN " << row.mean_csn);
    CHECK(row.mean_mse < 1.9);
    CHECK(row.runs_failed == 0);
  }
  CHECK(std::abs(rows[2].mean_csn - 2.02) <= 0.05);
}

TEST_CASE("MSE cannot tell 2.0 from 2.5 while CSN can", "[statistical][mcstudy]") {
  const double mse_gap = cell(2.5, 100'000, StudyEstimator::mse).mean_estimate -
                         cell(2.0, 100'000, StudyEstimator::mse).mean_estimate;
  const double csn_gap = cell(2.5, 100'000, StudyEstimator::csn).mean_estimate -
                         cell(2.0, 100'000, StudyEstimator::csn).mean_estimate;
  INFO("MSE gap " << mse_gap << " CSN gap " << csn_gap);
  CHECK(std::abs(mse_gap) < 0.25);
  CHECK(csn_gap >= 0.4);
}
