#pragma once

#include <cmath>
#include <numbers>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/wiener/brownian.hpp"

namespace pathint::wiener {

/// Brownian bridge from x at time a to y at time b on steps+1 uniform times,
/// by sequential exact Gaussian conditioning: given v at s, the value at
/// s + dt has mean v + dt (y - v)/(b - s) and variance dt (b - s - dt)/(b - s).
inline ScalarPath sample_bridge(double x, double y, double a, double b, int steps, RngStream& rng) {
  pathint::detail::require(b > a, "sample_bridge: need b > a");
  pathint::detail::require(steps >= 1, "sample_bridge: steps must be >= 1");
  ScalarPath path;
  path.times.resize(static_cast<std::size_t>(steps) + 1);
  path.values.resize(static_cast<std::size_t>(steps) + 1);
  const double dt = (b - a) / steps;
  path.times[0] = a;
  path.values[0] = x;
  for (int i = 1; i < steps; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double s = a + (i - 1) * dt;
    const double remaining = b - s;
    const double v = path.values[k - 1];
    const double mean = v + dt * (y - v) / remaining;
    const double var = dt * (remaining - dt) / remaining;
    path.times[k] = a + i * dt;
    path.values[k] = mean + std::sqrt(var) * rng.normal();
  }
  path.times.back() = b;
  path.values.back() = y;
  return path;
}

/// Total mass of the conditional Wiener measure from x at a to y at b: the
/// heat kernel (2 pi (b - a))^{-1/2} e^{-(x - y)^2 / 2(b - a)}.
inline double bridge_weight(double x, double y, double a, double b) {
  pathint::detail::require(b > a, "bridge_weight: need b > a");
  const double s = b - a;
  return std::exp(-(x - y) * (x - y) / (2.0 * s)) / std::sqrt(2.0 * std::numbers::pi * s);
}

}  // namespace pathint::wiener
