#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/numerics/fresnel.hpp"

namespace pathint::quantum {

/// Time-sliced path integral of the free particle,
///
///   A(n) \int_{R^{n-1}} exp((i/hbar) S(x, x_1, ..., x_{n-1}, y)) dx_1..dx_{n-1},
///   S = (m / 2 dt) sum_k (x_k - x_{k-1})^2,   dt = t/n,
///   A(n) = (m / (2 pi i hbar dt))^{n/2},
///
/// evaluated in closed form: the exponent is (i/2)<Qu,u> + i<b,u> + (i/2)c
/// with Q = (m/hbar dt) tridiag(-1, 2, -1), so the integral is a Fresnel
/// integral with linear term w = i b.
inline std::complex<double> timeslice_free_kernel(double t, double x, double y, double mass, double hbar, int n) {
  using cplx = std::complex<double>;
  if (!(t > 0.0)) throw domain_error("timeslice_free_kernel: t must be positive");
  pathint::detail::require(n >= 1, "timeslice_free_kernel: need at least one slice");
  const double dt = t / n;
  const double lam = mass / (hbar * dt);
  // (m / (2 pi i hbar dt))^{n/2} with the principal branch of sqrt(i).
  const cplx norm = std::pow(lam / (2.0 * std::numbers::pi), 0.5 * n) * std::polar(1.0, -std::numbers::pi * n / 4.0);
  if (n == 1) return norm * std::polar(1.0, 0.5 * lam * (x - y) * (x - y));

  const int k = n - 1;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    q(i, i) = 2.0 * lam;
    if (i + 1 < k) q(i, i + 1) = q(i + 1, i) = -lam;
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  b(0) -= lam * x;
  b(k - 1) -= lam * y;
  const double c = lam * (x * x + y * y);
  const Eigen::VectorXcd w = cplx(0.0, 1.0) * b.cast<cplx>();
  const cplx gauss = numerics::fresnel_integral(numerics::QuadraticForm(q), w);
  return norm * gauss * std::polar(1.0, 0.5 * c);
}

}  // namespace pathint::quantum
