#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "pathint/core/error.hpp"

namespace pathint::quantum {

enum class TimeMode { realtime, euclidean };

/// Free-particle propagator K(t, x, y).
///
/// realtime:  sqrt(m / (2 pi i hbar t)) exp((i/hbar) m (x-y)^2 / (2t)),
///            with sqrt(i) = e^{i pi/4};
/// euclidean: sqrt(m / (2 pi hbar t)) exp(-m (x-y)^2 / (2 hbar t)), the heat
///            kernel, equal to (2 pi t)^{-1/2} e^{-(x-y)^2/2t} at m = hbar = 1.
inline std::complex<double> free_kernel(double t, double x, double y, double mass = 1.0, double hbar = 1.0,
                                        TimeMode mode = TimeMode::realtime) {
  if (!(t > 0.0)) throw domain_error("free_kernel: t must be positive");
  const double amp = std::sqrt(mass / (2.0 * std::numbers::pi * hbar * t));
  const double d2 = (x - y) * (x - y);
  if (mode == TimeMode::euclidean) return amp * std::exp(-mass * d2 / (2.0 * hbar * t));
  return amp * std::polar(1.0, -std::numbers::pi / 4.0 + mass * d2 / (2.0 * hbar * t));
}

}  // namespace pathint::quantum
