#pragma once

#include "tailidx/philox.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tailidx {

/// Shifted, scaled Pareto law: X = shift + scale * x_min * U^(-1/zeta),
/// so that P(X0 > x) = (x / x_min)^(-zeta) for the unshifted, unscaled X0.
struct ParetoSpec {
  double zeta = 2.0;
  double x_min = 1.0;
  double scale = 1.0;
  double shift = 0.0;

  void validate() const {
    if (!(zeta > 0) || !std::isfinite(zeta)) {
      throw std::invalid_argument("pareto: zeta must be a finite positive number");
    }
    if (!(x_min > 0) || !std::isfinite(x_min)) {
      throw std::invalid_argument("pareto: x_min must be a finite positive number");
    }
    if (!(scale > 0) || !std::isfinite(scale)) {
      throw std::invalid_argument("pareto: scale must be a finite positive number");
    }
    if (!std::isfinite(shift) || !(shift + scale * x_min > 0)) {
      throw std::invalid_argument("pareto: shift + scale * x_min must be positive");
    }
  }

  /// Smallest value the law can emit.
  [[nodiscard]] double lower_bound() const noexcept {
    return shift + scale * x_min;
  }
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

/// Inverse CCDF of the Pareto law. Strictly decreasing in u.
inline double pareto_quantile(double u, const ParetoSpec& spec) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::domain_error("pareto_quantile: u must lie in (0, 1)");
  }
  const double base = spec.x_min * std::pow(u, -1.0 / spec.zeta);
  return spec.shift + spec.scale * base;
}

/// Draws n variates from the substream selected by `seed`. The same
/// (n, spec, seed) always yields the same bits.
inline std::vector<double> sample(std::size_t n, const ParetoSpec& spec,
                                  const SeedSpec& seed) {
  if (n == 0) {
    throw std::invalid_argument("sample: n must be at least 1");
  }
  spec.validate();
  uniform_stream uniforms{seed.master_seed, seed.stream_index};
  const double inv_zeta = -1.0 / spec.zeta;
  std::vector<double> out(n);
  for (auto& x : out) {
    const double base = spec.x_min * std::pow(uniforms.next_open01(), inv_zeta);
    x = spec.shift + spec.scale * base;
  }
  return out;
}

} // namespace tailidx
