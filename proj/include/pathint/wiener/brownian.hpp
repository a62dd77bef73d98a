#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/mechanics/path.hpp"

namespace pathint::wiener {

/// Real-valued discretized path.
struct ScalarPath {
  std::vector<double> times;
  std::vector<double> values;

  [[nodiscard]] std::size_t nodes() const noexcept { return times.size(); }

  [[nodiscard]] mechanics::Path to_path() const {
    Eigen::MatrixXd v(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i), 0) = values[i];
    return {times, std::move(v)};
  }
};

/// Brownian path: x(0) = 0 on a uniform grid of [0, T].
using BrownianPath = ScalarPath;

/// Samples standard Brownian motion at steps+1 uniform times on [0, T]:
/// independent N(0, dt) increments from x(0) = 0.
inline BrownianPath sample_brownian(double t_end, int steps, RngStream& rng) {
  pathint::detail::require(steps >= 1, "sample_brownian: steps must be >= 1");
  pathint::detail::require(t_end > 0.0, "sample_brownian: T must be positive");
  BrownianPath path;
  path.times.resize(static_cast<std::size_t>(steps) + 1);
  path.values.resize(static_cast<std::size_t>(steps) + 1);
  const double dt = t_end / steps;
  const double sd = std::sqrt(dt);
  path.times[0] = 0.0;
  path.values[0] = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const auto k = static_cast<std::size_t>(i);
    path.times[k] = t_end * i / steps;
    path.values[k] = path.values[k - 1] + sd * rng.normal();
  }
  return path;
}

}  // namespace pathint::wiener
