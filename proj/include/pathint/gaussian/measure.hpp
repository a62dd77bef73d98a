#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"

namespace pathint::gaussian {

/// Gaussian measure on R^n with mean a and covariance Sigma.
class GaussianSpec {
 public:
  GaussianSpec(Eigen::VectorXd mean, Eigen::MatrixXd cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (cov_.rows() != cov_.cols() || cov_.rows() != mean_.size() || mean_.size() == 0)
      throw invalid_input("GaussianSpec: mean and covariance dimensions disagree");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw invalid_input("GaussianSpec: covariance is not symmetric");
    llt_.compute(cov_);
    if (llt_.info() != Eigen::Success)
      throw not_positive_definite_error("GaussianSpec: covariance is not positive definite");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 0.0))
      throw not_positive_definite_error("GaussianSpec: covariance is not positive definite");
  }

  /// Centered measure with covariance Sigma.
  explicit GaussianSpec(const Eigen::MatrixXd& cov) : GaussianSpec(Eigen::VectorXd::Zero(cov.rows()), cov) {}

  [[nodiscard]] Eigen::Index dim() const noexcept { return mean_.size(); }
  [[nodiscard]] const Eigen::VectorXd& mean() const noexcept { return mean_; }
  [[nodiscard]] const Eigen::MatrixXd& cov() const noexcept { return cov_; }
  /// Lower Cholesky factor L, Sigma = L L^T.
  [[nodiscard]] Eigen::MatrixXd factor() const { return llt_.matrixL(); }
  [[nodiscard]] bool centered() const { return mean_.isZero(0.0); }

  /// Pairing q(u, v) = <Sigma u, v>.
  [[nodiscard]] double pairing(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return (cov_ * u).dot(v);
  }

  /// Density with respect to Lebesgue measure,
  /// (2 pi)^{-n/2} det(Sigma)^{-1/2} exp(-<Sigma^{-1}(x - a), x - a>/2).
  [[nodiscard]] double density(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd d = x - mean_;
    const Eigen::VectorXd w = llt_.matrixL().solve(d);
    const double log_det = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double n = static_cast<double>(dim());
    return std::exp(-0.5 * w.squaredNorm() - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi));
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Draws a + L z with z standard normal.
inline Eigen::VectorXd sample(const GaussianSpec& spec, RngStream& rng) {
  Eigen::VectorXd z(spec.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return spec.mean() + spec.factor().triangularView<Eigen::Lower>() * z;
}

/// Characteristic function e^{i<a,y> - <Sigma y, y>/2}. Complex y evaluates
/// the analytic continuation (bilinear pairing).
template <class Vec>
std::complex<double> characteristic(const GaussianSpec& spec, const Vec& y) {
  if (y.size() != spec.dim()) throw invalid_input("characteristic: dimension mismatch");
  using Scalar = typename Vec::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> yy = y;
  const std::complex<double> lin = (spec.mean().template cast<Scalar>().transpose() * yy)(0);
  const std::complex<double> quad = (yy.transpose() * spec.cov().template cast<Scalar>() * yy)(0);
  return std::exp(std::complex<double>(0.0, 1.0) * lin - 0.5 * quad);
}

}  // namespace pathint::gaussian
