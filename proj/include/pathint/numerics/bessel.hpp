#pragma once

#include <cmath>
#include <limits>

#include "pathint/core/error.hpp"
#include "pathint/numerics/quadrature.hpp"

namespace pathint::numerics {

/// Modified Bessel function of the second kind,
///
///   K_nu(z) = \int_0^\infty e^{-z cosh t} cosh(nu t) dt,
///
/// by adaptive Gauss-Kronrod on [0, T] where the scaled integrand
/// e^{-z (cosh t - 1)} cosh(nu t) has dropped below 1e-17. Relative accuracy
/// is about 1e-12 for z in [1e-3, 50] and moderate nu.
inline double bessel_k(double nu, double z) {
  if (!(z > 0.0)) throw domain_error("bessel_k: z must be positive");
  if (!(nu >= 0.0)) throw domain_error("bessel_k: order must be non-negative");
  // log of the scaled integrand: -z (cosh t - 1) + log cosh(nu t).
  auto log_integrand = [nu, z](double t) {
    const double lc = nu * t + std::log1p(std::exp(-2.0 * nu * t)) - std::log(2.0);
    return -z * (std::cosh(t) - 1.0) + lc;
  };
  double upper = 1.0;
  while (log_integrand(upper) > -40.0 || nu * upper > z * std::sinh(upper)) upper *= 1.25;
  // Scaled integrand stays O(1) near t = 0 regardless of z.
  auto f = [nu, z](double t) { return std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
  const auto r = integrate(f, 0.0, upper, 0.0, 1e-13);
  return std::exp(-z) * r.value;
}

}  // namespace pathint::numerics
