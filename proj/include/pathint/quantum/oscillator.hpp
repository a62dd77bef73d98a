#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::quantum {

using cplx = std::complex<double>;

/// Physical constants of a one-dimensional oscillator.
struct OscillatorParams {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
};

/// Operator truncated to the first N orthonormal oscillator states
/// e_n = psi_n / sqrt(n!).
///
/// Products of truncated matrices differ from truncations of products in the
/// bottom-right corner; identities are only meaningful on an interior block.
struct TruncatedOperator {
  Eigen::MatrixXcd matrix;
  OscillatorParams params;

  [[nodiscard]] Eigen::Index dim() const noexcept { return matrix.rows(); }

  [[nodiscard]] TruncatedOperator adjoint() const { return {matrix.adjoint(), params}; }

  /// Leading k x k block.
  [[nodiscard]] Eigen::MatrixXcd interior(Eigen::Index k) const { return matrix.topLeftCorner(k, k); }

  [[nodiscard]] double self_adjoint_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  }

  friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
    return {a.matrix * b.matrix, a.params};
  }
  friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
    return {a.matrix + b.matrix, a.params};
  }
  friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
    return {a.matrix - b.matrix, a.params};
  }
  friend TruncatedOperator operator*(cplx s, const TruncatedOperator& a) { return {s * a.matrix, a.params}; }
};

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
  return a * b - b * a;
}

inline TruncatedOperator identity(Eigen::Index n, const OscillatorParams& params) {
  return {Eigen::MatrixXcd::Identity(n, n), params};
}

struct Ladder {
  TruncatedOperator a;     ///< annihilation: a e_n = sqrt(n) e_{n-1}
  TruncatedOperator adag;  ///< creation: a^dag e_n = sqrt(n+1) e_{n+1}

  /// x = sqrt(hbar / 2 m omega) (a + a^dag)
  [[nodiscard]] TruncatedOperator position() const {
    const auto& pr = a.params;
    return cplx(std::sqrt(pr.hbar / (2.0 * pr.mass * pr.omega))) * (a + adag);
  }
  /// p = i sqrt(hbar m omega / 2) (a^dag - a)
  [[nodiscard]] TruncatedOperator momentum() const {
    const auto& pr = a.params;
    return cplx(0.0, std::sqrt(pr.hbar * pr.mass * pr.omega / 2.0)) * (adag - a);
  }
  /// hbar omega (a^dag a + 1/2)
  [[nodiscard]] TruncatedOperator number_hamiltonian() const {
    const auto& pr = a.params;
    return cplx(pr.hbar * pr.omega) * (adag * a + cplx(0.5) * identity(a.dim(), pr));
  }
};

inline Ladder ladder_operators(int n, const OscillatorParams& params = {}) {
  if (n < 2) throw invalid_input("ladder_operators: truncation must be >= 2");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {{a, params}, {a.adjoint(), params}};
}

/// p^2 / 2m + m omega^2 x^2 / 2 assembled from the truncated x and p.
inline TruncatedOperator oscillator_hamiltonian(int n, const OscillatorParams& params = {}) {
  const auto lad = ladder_operators(n, params);
  const auto x = lad.position();
  const auto p = lad.momentum();
  return cplx(1.0 / (2.0 * params.mass)) * (p * p) +
         cplx(0.5 * params.mass * params.omega * params.omega) * (x * x);
}

/// Ascending eigenvalues of a self-adjoint truncated operator.
inline Eigen::VectorXd spectrum(const TruncatedOperator& h, double tol = 1e-12) {
  if (h.self_adjoint_defect() > tol) throw invalid_input("spectrum: operator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// U(t) = sum_j e^{-i t lambda_j / hbar} phi_j phi_j^* for self-adjoint H.
inline TruncatedOperator eigen_propagator(const TruncatedOperator& h, double t, double tol = 1e-12) {
  if (h.self_adjoint_defect() > tol) throw invalid_input("eigen_propagator: operator is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
  Eigen::VectorXcd phases(h.dim());
  for (Eigen::Index j = 0; j < h.dim(); ++j)
    phases(j) = std::polar(1.0, -t * es.eigenvalues()(j) / h.params.hbar);
  return {es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint(), h.params};
}

}  // namespace pathint::quantum
