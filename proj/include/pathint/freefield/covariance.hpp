#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/numerics/bessel.hpp"

namespace pathint::freefield {

/// Integral kernel of (Delta + m^2)^{-1} on R^n, Delta = -sum d^2.
struct CovarianceKernel {
  int n;
  double m;

  CovarianceKernel(int dim, double mass) : n(dim), m(mass) {
    if (n < 1 || n > 3) throw invalid_input("CovarianceKernel: dimension must be 1, 2 or 3");
    if (!(m > 0.0)) throw invalid_input("CovarianceKernel: mass must be positive");
  }
};

/// C(r) for |x - y| = r:
///   n = 1: e^{-mr} / (2m)
///   n = 2: K_0(mr) / (2 pi)
///   n = 3: e^{-mr} / (4 pi r)
inline double covariance(const CovarianceKernel& k, double r) {
  if (!(r > 0.0)) throw domain_error("covariance: kernel is singular at r = 0");
  switch (k.n) {
    case 1:
      return std::exp(-k.m * r) / (2.0 * k.m);
    case 2:
      return numerics::bessel_k(0.0, k.m * r) / (2.0 * std::numbers::pi);
    default:
      return std::exp(-k.m * r) / (4.0 * std::numbers::pi * r);
  }
}

/// Euclidean two-point Schwinger function of the free field, S_2(y) = G(y),
/// which coincides with the covariance; the dimension is y.size().
inline double schwinger_two_point(double m, const Eigen::VectorXd& y) {
  const double r = y.norm();
  if (!(r > 0.0)) throw domain_error("schwinger_two_point: y must be non-zero");
  return covariance(CovarianceKernel(static_cast<int>(y.size()), m), r);
}

}  // namespace pathint::freefield
