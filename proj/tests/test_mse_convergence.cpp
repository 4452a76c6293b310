// Finite-sample convergence of the moment estimator toward min(zeta, 2) on
// Pareto data with x_min = 1, 100 runs per cell.

#include "study_cache.hpp"

#include "tailidx/mcstudy.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace tailidx;
using study_cache::cell;

namespace {

double gap(double zeta, std::size_t n) {
  return std::abs(cell(zeta, n, StudyEstimator::mse).mean_estimate - mse_asymptote(zeta));
}

} // namespace

TEST_CASE("MSE mean is within 0.1 of zeta = 1.5 at N = 10^6", "[mse-convergence]") {
  const double m = cell(1.5, 1'000'000, StudyEstimator::mse).mean_estimate;
  INFO("mean MSE " << m);
  CHECK(std::abs(m - 1.5) <= 0.1);
}

TEST_CASE("MSE mean is within 0.1 of zeta = 1.5 at N = 10^5", "[mse-convergence]") {
  const double m = cell(1.5, 100'000, StudyEstimator::mse).mean_estimate;
  INFO("mean MSE " << m);
  CHECK(std::abs(m - 1.5) <= 0.1);
}

TEST_CASE("MSE approaches its asymptote monotonically in N", "[mse-convergence]") {
  for (double zeta : {1.25, 2.75}) {
    const double g4 = gap(zeta, 10'000);
    const double g5 = gap(zeta, 100'000);
    const double g6 = gap(zeta, 1'000'000);
    INFO("zeta " << zeta << " gaps " << g4 << " " << g5 << " " << g6);
    CHECK(g5 <= g4);
    CHECK(g6 <= g5);
  }
}

TEST_CASE("MSE is near its asymptote at N = 10^6 and closer than at 10^4", "[mse-convergence]") {
  for (double zeta : {1.0, 1.5, 1.75, 2.5, 3.0}) {
    const double g4 = gap(zeta, 10'000);
    const double g6 = gap(zeta, 1'000'000);
    INFO("zeta " << zeta << " gap@1e4 " << g4 << " gap@1e6 " << g6);
    CHECK(g6 <= 0.15);
    CHECK(g6 < g4);
  }
}

TEST_CASE("At zeta = 1.49 both estimators are within 0.1 at N = 10^6", "[mse-convergence]") {
  const auto rows = underestimation_demo(1.49, {1'000'000}, 100, study_cache::master_seed,
                                         study_cache::jobs());
  REQUIRE(rows.size() == 1);
  INFO("MSE " << rows[0].mean_mse << " CSN " << rows[0].mean_csn);
  CHECK(std::abs(rows[0].mean_csn - 1.49) <= 0.1);
  CHECK(std::abs(rows[0].mean_mse - 1.49) <= 0.1);
}
