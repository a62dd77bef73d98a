#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/freefield/covariance.hpp"
#include "pathint/numerics/quadrature.hpp"

using namespace pathint::freefield;
using pathint::numerics::integrate;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// Proper-time oracle: (Delta + m^2)^{-1} = \int_0^inf e^{-s m^2} e^{-s Delta} ds
// with heat kernel (4 pi s)^{-n/2} e^{-r^2/4s}; integrated in u = log s.
double proper_time(int n, double m, double r) {
  auto f = [=](double u) {
    const double s = std::exp(u);
    return s * std::exp(-m * m * s - r * r / (4 * s)) * std::pow(4 * pi * s, -n / 2.0);
  };
  // The integrand peaks near s = r/(2m); cover many decades on both sides.
  const double centre = std::log(r / (2 * m));
  return integrate(f, centre - 12.0, centre + 8.0, 1e-16, 1e-13, 20000).value;
}

// Direct Fourier oracle in one dimension, (1/pi) \int_0^inf cos(xi r)/(xi^2 + m^2) d xi,
// integrated over half-periods with the tail beyond Xi bounded by 1/(pi Xi^2 r).
double fourier_1d(double m, double r) {
  const double period = pi / r;
  double sum = 0.0;
  const int pieces = 4000;
  for (int k = 0; k < pieces; ++k)
    sum += integrate([=](double xi) { return std::cos(xi * r) / (xi * xi + m * m); }, k * period, (k + 1) * period,
                     1e-16, 1e-12)
               .value;
  return sum / pi;
}

}  // namespace

TEST_CASE("covariance closed forms", "[freefield][covariance]") {
  CHECK_THAT(covariance({3, 1.0}, 1.0), WithinRel(std::exp(-1.0) / (4 * pi), 1e-15));
  CHECK_THAT(covariance({1, 2.0}, 1.0), WithinRel(std::exp(-2.0) / 4.0, 1e-15));
  // K_0(1) from an independent high-precision evaluation.
  CHECK_THAT(covariance({2, 1.0}, 1.0), WithinRel(0.42102443824070834 / (2 * pi), 1e-11));
}

TEST_CASE("covariance agrees with the proper-time integral", "[freefield][covariance][oracle]") {
  for (int n = 1; n <= 3; ++n)
    for (double m : {0.5, 1.0, 2.0})
      for (double r : {0.05, 0.3, 1.0, 4.0}) {
        INFO("n=" << n << " m=" << m << " r=" << r);
        CHECK_THAT(covariance({n, m}, r), WithinRel(proper_time(n, m, r), 1e-9));
      }
}

TEST_CASE("one-dimensional constant settled by Fourier quadrature", "[freefield][covariance][oracle]") {
  const double oracle = fourier_1d(2.0, 1.0);
  CHECK_THAT(oracle, WithinAbs(std::exp(-2.0) / 4.0, 1e-7));
  CHECK_THAT(covariance({1, 2.0}, 1.0), WithinAbs(oracle, 1e-7));
  // The alternative constant e^{-mr}/m is off by a factor of two.
  CHECK(std::abs(std::exp(-2.0) / 2.0 - oracle) > 1e-2);
}

TEST_CASE("two-dimensional logarithmic short-distance behaviour", "[freefield][covariance]") {
  // Least-squares slope of C(r) against -log r on r in [1e-4, 1e-2].
  std::vector<double> xs, ys;
  for (int i = 0; i <= 20; ++i) {
    const double r = std::pow(10.0, -4.0 + 2.0 * i / 20);
    xs.push_back(-std::log(r));
    ys.push_back(covariance({2, 1.0}, r));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  CHECK_THAT(slope, WithinRel(1.0 / (2 * pi), 0.05));
  CHECK_THAT(slope, WithinRel(1.0 / (2 * pi), 1e-3));
  // Ratio form: C(r) / (-log(m r)) -> 1/(2 pi).
  CHECK_THAT(covariance({2, 1.0}, 1e-8) / -std::log(1e-8), WithinRel(1.0 / (2 * pi), 0.05));
}

TEST_CASE("three-dimensional exponential decay bound", "[freefield][covariance]") {
  CHECK(covariance({3, 1.0}, 10.0) <= std::exp(-10.0) / (4 * pi * 10.0) * (1 + 1e-14));
  for (double r : {2.0, 5.0, 10.0, 20.0})
    for (int n = 1; n <= 3; ++n) CHECK(covariance({n, 1.0}, r) < covariance({n, 1.0}, r / 2));
}

TEST_CASE("covariance preconditions", "[freefield][covariance]") {
  CHECK_THROWS_AS(covariance({2, 1.0}, 0.0), pathint::domain_error);
  CHECK_THROWS_AS(covariance({3, 1.0}, -1.0), pathint::domain_error);
  CHECK_THROWS_AS(CovarianceKernel(4, 1.0), pathint::invalid_input);
  CHECK_THROWS_AS(CovarianceKernel(2, 0.0), pathint::invalid_input);
}

TEST_CASE("schwinger two-point function is the free covariance", "[freefield][schwinger]") {
  Eigen::VectorXd y(3);
  y << 1.2, -0.4, 1.5;
  CHECK(schwinger_two_point(0.7, y) == covariance({3, 0.7}, y.norm()));
  CHECK(schwinger_two_point(0.7, y) == schwinger_two_point(0.7, -y));
  Eigen::VectorXd y2(2);
  y2 << 0.3, 0.9;
  CHECK(schwinger_two_point(1.3, y2) == covariance({2, 1.3}, y2.norm()));
  Eigen::VectorXd two = Eigen::VectorXd::Zero(3);
  two[1] = 2.0;
  CHECK_THAT(schwinger_two_point(1.0, two), WithinRel(std::exp(-2.0) / (8 * pi), 1e-15));
  CHECK_THROWS_AS(schwinger_two_point(1.0, Eigen::VectorXd::Zero(2)), pathint::domain_error);
}
