#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::numerics {

/// Real symmetric matrix with its eigenvalue-sign counts.
class QuadraticForm {
 public:
  explicit QuadraticForm(Eigen::MatrixXd q) : q_(std::move(q)) {
    if (q_.rows() != q_.cols()) throw invalid_input("QuadraticForm: matrix must be square");
    if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw invalid_input("QuadraticForm: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q_, Eigen::EigenvaluesOnly);
    eigenvalues_ = es.eigenvalues();
    const double scale = std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
      const double ev = eigenvalues_(i);
      if (ev > 1e-14 * scale) ++positive_;
      else if (ev < -1e-14 * scale) ++negative_;
    }
  }

  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return q_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return q_.rows(); }
  [[nodiscard]] int positive() const noexcept { return positive_; }
  [[nodiscard]] int negative() const noexcept { return negative_; }
  /// n_+ - n_-
  [[nodiscard]] int signature() const noexcept { return positive_ - negative_; }
  [[nodiscard]] bool singular() const noexcept { return positive_ + negative_ < dim(); }
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd eigenvalues_;
  int positive_ = 0;
  int negative_ = 0;
};

/// Closed form of the oscillatory Gaussian integral
///
///   \int e^{(i/2)<Qx,x>} e^{<w,x>} dx
///     = e^{i pi sign(Q)/4} |det(Q / 2pi)|^{-1/2} e^{(i/2)<Q^{-1}w, w>},
///
/// understood as the eps -> 0 limit of the e^{-eps|x|^2/2}-damped integral.
/// The bilinear pairing <Q^{-1}w, w> is not conjugated, so complex w (as in
/// e^{i<b,x>} = e^{<ib,x>}) is supported.
template <class Vec>
std::complex<double> fresnel_integral(const QuadraticForm& q, const Vec& w) {
  using cplx = std::complex<double>;
  if (w.size() != q.dim()) throw invalid_input("fresnel_integral: dimension mismatch");
  if (q.singular()) throw singular_matrix_error("fresnel_integral: Q is singular");
  double log_abs_det = 0.0;
  for (Eigen::Index i = 0; i < q.eigenvalues().size(); ++i)
    log_abs_det += std::log(std::abs(q.eigenvalues()(i)) / (2.0 * std::numbers::pi));
  const Eigen::VectorXcd wc = w.template cast<cplx>();
  const Eigen::VectorXcd qinv_w = q.matrix().cast<cplx>().partialPivLu().solve(wc);
  const cplx quad = (qinv_w.transpose() * wc)(0);
  const cplx phase = std::polar(1.0, std::numbers::pi * q.signature() / 4.0);
  return phase * std::exp(-0.5 * log_abs_det) * std::exp(cplx(0.0, 0.5) * quad);
}

inline std::complex<double> fresnel_integral(const QuadraticForm& q) {
  return fresnel_integral(q, Eigen::VectorXd::Zero(q.dim()));
}

}  // namespace pathint::numerics
