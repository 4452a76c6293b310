#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tailidx {

/// Raised when a sample is valid input but an estimator cannot produce a
/// finite exponent from it (all values equal, empty tail, ...).
class estimator_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based; 0 means "whole input".
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ": " + what),
      line_{line} {
  }

  [[nodiscard]] std::size_t line() const noexcept {
    return line_;
  }

private:
  std::size_t line_;
};

} // namespace tailidx
