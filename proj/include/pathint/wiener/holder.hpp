#pragma once

#include <algorithm>
#include <cmath>

#include "pathint/core/error.hpp"
#include "pathint/wiener/brownian.hpp"

namespace pathint::wiener {

/// Empirical Hoelder quotient: max over dyadic lags l = 1, 2, 4, ... of
/// max_i |x(t_{i+l}) - x(t_i)| / (l dt)^alpha on a uniform grid.
inline double holder_statistic(const ScalarPath& path, double alpha) {
  pathint::detail::require(path.nodes() >= 2, "holder_statistic: need at least two nodes");
  const double dt = path.times[1] - path.times[0];
  for (std::size_t i = 1; i + 1 < path.nodes(); ++i)
    if (std::abs(path.times[i + 1] - path.times[i] - dt) > 1e-9 * dt)
      throw invalid_input("holder_statistic: grid must be uniform");
  const std::size_t n = path.nodes() - 1;
  double best = 0.0;
  for (std::size_t lag = 1; lag <= n; lag *= 2) {
    double m = 0.0;
    for (std::size_t i = 0; i + lag <= n; ++i) m = std::max(m, std::abs(path.values[i + lag] - path.values[i]));
    best = std::max(best, m / std::pow(static_cast<double>(lag) * dt, alpha));
  }
  return best;
}

}  // namespace pathint::wiener
