#pragma once

#include "tailidx/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace tailidx {

/// One transaction: integer epoch seconds and traded volume (shares).
struct TradeRecord {
  std::int64_t timestamp = 0;
  double volume = 0.0;

  friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

/// Calendar-aligned windows [origin + m*window, origin + (m+1)*window).
struct AggregationSpec {
  std::int64_t window = 900;
  std::int64_t origin = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Locale-independent full-field parse. Accepts a leading '+'.
template <class T>
bool parse_number(std::string_view s, T& out) noexcept {
  s = trim(s);
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  if (s.empty()) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace detail

/// One real per line; blank lines and '#' comments are skipped.
inline std::vector<double> read_values(std::istream& in, bool require_positive = false) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto field = detail::trim(line);
    if (field.empty() || field.front() == '#') {
      continue;
    }
    double v = 0.0;
    if (!detail::parse_number(field, v) || !std::isfinite(v)) {
      throw parse_error(lineno, "not a finite number: '" + std::string(field) + "'");
    }
    if (require_positive && !(v > 0.0)) {
      throw parse_error(lineno, "value must be positive");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw parse_error(0, "empty sample");
  }
  return out;
}

/// CSV "timestamp,volume" lines; a first line whose first field is not an
/// integer is treated as a header.
inline std::vector<TradeRecord> read_trades(std::istream& in) {
  std::vector<TradeRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = detail::trim(line);
    if (row.empty()) {
      continue;
    }
    const auto comma = row.find(',');
    const auto ts_field = row.substr(0, comma);
    TradeRecord rec;
    if (!detail::parse_number(ts_field, rec.timestamp)) {
      if (first) {
        first = false;
        continue;
      }
      throw parse_error(lineno, "bad timestamp: '" + std::string(ts_field) + "'");
    }
    first = false;
    if (comma == std::string_view::npos) {
      throw parse_error(lineno, "expected 'timestamp,volume'");
    }
    const auto vol_field = row.substr(comma + 1);
    if (!detail::parse_number(vol_field, rec.volume) || !std::isfinite(rec.volume)) {
      throw parse_error(lineno, "bad volume: '" + std::string(vol_field) + "'");
    }
    if (!(rec.volume > 0.0)) {
      throw parse_error(lineno, "volume must be positive");
    }
    out.push_back(rec);
  }
  return out;
}

/// Total volume per non-empty window, in window order. Empty windows are
/// omitted. Ordering by (timestamp, volume) makes the result independent of
/// input order down to the last bit.
inline std::vector<double> aggregate(std::vector<TradeRecord> trades,
                                     const AggregationSpec& spec) {
  if (spec.window <= 0) {
    throw std::invalid_argument("aggregate: window must be positive");
  }
  if (trades.empty()) {
    throw std::invalid_argument("aggregate: no trades");
  }
  std::sort(trades.begin(), trades.end(), [](const TradeRecord& a, const TradeRecord& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.volume < b.volume;
  });
  auto window_of = [&](std::int64_t ts) {
    const std::int64_t d = ts - spec.origin;
    std::int64_t q = d / spec.window;
    if (d % spec.window != 0 && d < 0) {
      --q;
    }
    return q;
  };
  std::vector<double> out;
  std::int64_t current = window_of(trades.front().timestamp);
  double acc = 0.0;
  for (const auto& t : trades) {
    const auto w = window_of(t.timestamp);
    if (w != current) {
      out.push_back(acc);
      acc = 0.0;
      current = w;
    }
    acc += t.volume;
  }
  out.push_back(acc);
  return out;
}

} // namespace tailidx
