#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/numerics/quadrature.hpp"

namespace pathint::wiener {

/// {x : x(t_i) in (lower_i, upper_i] for all i}, with infinite bounds allowed.
struct CylinderSet {
  std::vector<double> times;
  std::vector<double> lower;
  std::vector<double> upper;

  CylinderSet(std::vector<double> t, std::vector<double> lo, std::vector<double> hi)
      : times(std::move(t)), lower(std::move(lo)), upper(std::move(hi)) {
    if (times.empty() || times.size() != lower.size() || times.size() != upper.size())
      throw invalid_input("CylinderSet: times and boxes must be non-empty and of equal length");
    if (!(times[0] > 0.0)) throw invalid_input("CylinderSet: times must be positive");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0 && !(times[i] > times[i - 1])) throw invalid_input("CylinderSet: times must increase strictly");
      if (lower[i] > upper[i]) throw invalid_input("CylinderSet: empty box");
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  [[nodiscard]] bool contains(const std::vector<double>& values_at_times) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!(values_at_times[i] > lower[i] && values_at_times[i] <= upper[i])) return false;
    return true;
  }
};

namespace detail {

inline double normal_cdf(double z) {
  if (z == std::numeric_limits<double>::infinity()) return 1.0;
  if (z == -std::numeric_limits<double>::infinity()) return 0.0;
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// P(x_prev + N(0, var) in (lo, hi]) from the last level onwards, integrating
// out intermediate levels by adaptive quadrature.
inline double cylinder_level(const CylinderSet& c, std::size_t level, double x_prev, double t_prev) {
  const double var = c.times[level] - t_prev;
  const double sd = std::sqrt(var);
  if (level + 1 == c.size())
    return normal_cdf((c.upper[level] - x_prev) / sd) - normal_cdf((c.lower[level] - x_prev) / sd);
  constexpr double reach = 10.0;
  const double lo = std::max(c.lower[level], x_prev - reach * sd);
  const double hi = std::min(c.upper[level], x_prev + reach * sd);
  if (!(hi > lo)) return 0.0;
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
  auto integrand = [&](double x) {
    const double d = x - x_prev;
    return norm * std::exp(-d * d / (2.0 * var)) * cylinder_level(c, level + 1, x, c.times[level]);
  };
  return numerics::integrate(integrand, lo, hi, 1e-12, 1e-11).value;
}

}  // namespace detail

/// Wiener measure of a cylinder set: the iterated Gaussian integral
///   \int_{box_1} ... \int_{box_k} prod_i p(t_i - t_{i-1}, x_{i-1}, x_i) dx,
/// x_0 = 0, t_0 = 0. The last level is done in closed form (normal CDF), the
/// others by nested adaptive quadrature. Supports k <= 4.
inline double cylinder_probability(const CylinderSet& c) {
  if (c.size() > 4) throw unsupported_error("cylinder_probability: more than four times; use Monte Carlo");
  return detail::cylinder_level(c, 0, 0.0, 0.0);
}

}  // namespace pathint::wiener
