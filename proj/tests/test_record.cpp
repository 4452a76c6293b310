#include "tailidx/record.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

using namespace tailidx;

TEST_CASE("format_double round-trips every double", "[record][property]") {
  std::mt19937_64 rng{17};
  for (int i = 0; i < 100'000; ++i) {
    const double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) {
      continue;
    }
    const auto text = format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    REQUIRE(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(x));
  }
  CHECK(format_double(8.0) == "8");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.25) == "1.25");
}

TEST_CASE("JSON record is flat and round-trips exactly", "[record]") {
  Estimate e;
  e.method = Method::shifted_csn;
  e.zeta_hat = 2.0 / 3.0;
  e.std_err = std::sqrt(2.0) / 7.0;
  e.threshold = 1e-300;
  e.k = 1234;
  e.shift_hat = -0.1;
  e.ks_distance = 0.00123456789012345678;
  e.n = 99'999;

  const auto text = to_json_record(e);
  CHECK(text.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.size() == 8);
  CHECK(j["method"] == "SHIFTED_CSN");
  CHECK(j["zeta_hat"].get<double>() == e.zeta_hat);
  CHECK(j["std_err"].get<double>() == *e.std_err);
  CHECK(j["threshold"].get<double>() == *e.threshold);
  CHECK(j["k"].get<std::size_t>() == *e.k);
  CHECK(j["shift_hat"].get<double>() == *e.shift_hat);
  CHECK(j["ks_distance"].get<double>() == *e.ks_distance);
  CHECK(j["n"].get<std::size_t>() == e.n);
}

TEST_CASE("absent fields are omitted from JSON and empty in CSV", "[record]") {
  Estimate e;
  e.method = Method::mse;
  e.zeta_hat = 1.5;
  e.n = 4;
  CHECK(to_json_record(e) == R"({"method":"MSE","zeta_hat":1.5,"n":4})");
  CHECK(estimate_csv_header() == "method,zeta_hat,std_err,threshold,k,shift_hat,ks_distance,n");
  CHECK(to_csv_row(e) == "MSE,1.5,,,,,,4");
}

TEST_CASE("study CSV has the fixed header and an asymptote comment", "[record]") {
  std::vector<McCellResult> cells(2);
  cells[0] = {1.5, 10'000, StudyEstimator::mse, 1.375, 0.08, 0, std::nan("")};
  cells[1] = {2.5, 10'000, StudyEstimator::csn, 2.49, 0.02, 3, 0.01};
  std::ostringstream os;
  write_study_csv(os, cells, {1.5, 2.5});
  CHECK(os.str() ==
        "# mse_asymptote 1.5=1.5 2.5=2\n"
        "zeta_true,n,estimator,mean_estimate,std_across_runs,runs_failed\n"
        "1.5,10000,MSE,1.375,0.080000000000000002,0\n"
        "2.5,10000,CSN,2.4900000000000002,0.02,3\n");
}
