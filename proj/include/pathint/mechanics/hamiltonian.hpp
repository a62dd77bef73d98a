#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/mechanics/phase_polynomial.hpp"

namespace pathint::mechanics {

struct PhaseState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
};

/// H = T(p) + V(x) split of a separable polynomial Hamiltonian, with the
/// gradient polynomials precomputed.
class SeparableHamiltonian {
 public:
  explicit SeparableHamiltonian(const PhasePolynomial& h) : h_(h) {
    if (!h.is_separable())
      throw unsupported_error("hamiltonian_flow: Hamiltonian is not of the form T(p) + V(x)");
    const int n = h.dim();
    const auto kinetic = h.momentum_part();
    const auto potential = h.position_part();
    for (int i = 0; i < n; ++i) {
      grad_t_.push_back(kinetic.dp(i));
      grad_v_.push_back(potential.dx(i));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        hess_t_.push_back(grad_t_[static_cast<std::size_t>(i)].dp(j));
        hess_v_.push_back(grad_v_[static_cast<std::size_t>(i)].dx(j));
      }
    }
  }

  [[nodiscard]] int dim() const noexcept { return h_.dim(); }
  [[nodiscard]] double energy(const PhaseState& s) const { return h_(s.x, s.p); }

  [[nodiscard]] Eigen::VectorXd grad_kinetic(const PhaseState& s) const { return eval(grad_t_, s); }
  [[nodiscard]] Eigen::VectorXd grad_potential(const PhaseState& s) const { return eval(grad_v_, s); }
  [[nodiscard]] Eigen::MatrixXd hess_kinetic(const PhaseState& s) const { return eval_matrix(hess_t_, s); }
  [[nodiscard]] Eigen::MatrixXd hess_potential(const PhaseState& s) const { return eval_matrix(hess_v_, s); }

  /// One kick-drift-kick leapfrog step of size h.
  [[nodiscard]] PhaseState step(PhaseState s, double h) const {
    s.p -= 0.5 * h * grad_potential(s);
    s.x += h * grad_kinetic(s);
    s.p -= 0.5 * h * grad_potential(s);
    return s;
  }

  /// Jacobian d(x', p') / d(x, p) of one leapfrog step, as the product of the
  /// three shear maps.
  [[nodiscard]] Eigen::MatrixXd step_jacobian(const PhaseState& s, double h) const {
    const int n = dim();
    PhaseState half = s;
    half.p -= 0.5 * h * grad_potential(s);
    PhaseState moved = half;
    moved.x += h * grad_kinetic(half);

    Eigen::MatrixXd kick1 = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    kick1.block(n, 0, n, n) = -0.5 * h * hess_potential(s);
    Eigen::MatrixXd drift = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    drift.block(0, n, n, n) = h * hess_kinetic(half);
    Eigen::MatrixXd kick2 = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    kick2.block(n, 0, n, n) = -0.5 * h * hess_potential(moved);
    return kick2 * drift * kick1;
  }

 private:
  Eigen::VectorXd eval(const std::vector<PhasePolynomial>& polys, const PhaseState& s) const {
    Eigen::VectorXd out(dim());
    for (int i = 0; i < dim(); ++i) out(i) = polys[static_cast<std::size_t>(i)](s.x, s.p);
    return out;
  }
  Eigen::MatrixXd eval_matrix(const std::vector<PhasePolynomial>& polys, const PhaseState& s) const {
    const int n = dim();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) = polys[static_cast<std::size_t>(i * n + j)](s.x, s.p);
    return out;
  }

  PhasePolynomial h_;
  std::vector<PhasePolynomial> grad_t_, grad_v_, hess_t_, hess_v_;
};

/// Integrates Hamilton's equations dx/dt = dH/dp, dp/dt = -dH/dx with the
/// leapfrog scheme; returns the states at the steps+1 uniform times.
/// Negative t integrates backwards.
inline std::vector<PhaseState> hamiltonian_flow(const PhasePolynomial& h, const PhaseState& s0, double t,
                                                int steps) {
  pathint::detail::require(steps >= 1, "hamiltonian_flow: steps must be >= 1");
  pathint::detail::require(s0.x.size() == h.dim() && s0.p.size() == h.dim(),
                  "hamiltonian_flow: state dimension mismatch");
  const SeparableHamiltonian sep(h);
  const double dt = t / steps;
  std::vector<PhaseState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(s0);
  for (int k = 0; k < steps; ++k) out.push_back(sep.step(out.back(), dt));
  return out;
}

}  // namespace pathint::mechanics
