#pragma once

#include "tailidx/estimators.hpp"
#include "tailidx/mcstudy.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tailidx {

/// Shortest text that is guaranteed to round-trip: 17 significant digits,
/// no locale dependence. Non-finite values print as nan / inf / -inf.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, res.ptr};
}

/// Flat key/value view of an Estimate, keys in fixed order:
/// method, zeta_hat, std_err, threshold, k, shift_hat, ks_distance, n.
/// Absent optional fields are omitted from JSON and left empty in CSV.
inline const std::vector<std::string>& estimate_keys() {
  static const std::vector<std::string> keys{"method",    "zeta_hat", "std_err",
                                             "threshold", "k",        "shift_hat",
                                             "ks_distance", "n"};
  return keys;
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> estimate_fields(const Estimate& e) {
  std::vector<std::pair<std::string, std::string>> f;
  f.emplace_back("method", std::string(method_name(e.method)));
  f.emplace_back("zeta_hat", format_double(e.zeta_hat));
  f.emplace_back("std_err", e.std_err ? format_double(*e.std_err) : "");
  f.emplace_back("threshold", e.threshold ? format_double(*e.threshold) : "");
  f.emplace_back("k", e.k ? std::to_string(*e.k) : "");
  f.emplace_back("shift_hat", e.shift_hat ? format_double(*e.shift_hat) : "");
  f.emplace_back("ks_distance", e.ks_distance ? format_double(*e.ks_distance) : "");
  f.emplace_back("n", std::to_string(e.n));
  return f;
}

} // namespace detail

/// Single-line flat JSON object.
inline std::string to_json_record(const Estimate& e) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : detail::estimate_fields(e)) {
    if (value.empty()) {
      continue;
    }
    if (!first) {
      out += ',';
    }
    first = false;
    out += '"' + key + "\":";
    out += key == "method" ? '"' + value + '"' : value;
  }
  out += '}';
  return out;
}

inline std::string estimate_csv_header() {
  std::string out;
  for (const auto& k : estimate_keys()) {
    out += (out.empty() ? "" : ",") + k;
  }
  return out;
}

inline std::string to_csv_row(const Estimate& e) {
  std::string out;
  bool first = true;
  for (const auto& [key, value] : detail::estimate_fields(e)) {
    if (!first) {
      out += ',';
    }
    first = false;
    out += value;
  }
  return out;
}

inline constexpr const char* study_csv_header =
    "zeta_true,n,estimator,mean_estimate,std_across_runs,runs_failed";

/// Long-form study table. The leading comment line lists the large-N MSE
/// limit for every zeta in the grid, for plot overlays.
inline void write_study_csv(std::ostream& os, const std::vector<McCellResult>& cells,
                            const std::vector<double>& zeta_grid) {
  os << "# mse_asymptote";
  for (double z : zeta_grid) {
    os << ' ' << format_double(z) << '=' << format_double(mse_asymptote(z));
  }
  os << '\n' << study_csv_header << '\n';
  for (const auto& c : cells) {
    os << format_double(c.zeta_true) << ',' << c.n << ',' << study_estimator_name(c.estimator)
       << ',' << format_double(c.mean_estimate) << ',' << format_double(c.std_across_runs)
       << ',' << c.runs_failed << '\n';
  }
}

} // namespace tailidx
