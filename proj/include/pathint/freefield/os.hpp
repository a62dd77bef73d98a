#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/freefield/covariance.hpp"
#include "pathint/freefield/lattice.hpp"
#include "pathint/numerics/quadrature.hpp"

namespace pathint::freefield {

namespace detail {

inline double min_eigenvalue(Eigen::MatrixXd m) {
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

/// Gram matrix M_ij = C(f_i, theta f_j) on the torus, theta(t, x) = (-t mod L, x),
/// with sum_x a^2 as the integral. Test functions are L x L arrays that must
/// vanish outside rows 1 .. L/2 - 1.
inline Eigen::MatrixXd reflection_gram(const LatticeSpec& s, const std::vector<Eigen::MatrixXd>& fs) {
  struct Site {
    int t, x;
    double v;
  };
  std::vector<std::vector<Site>> supp(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].rows() != s.L || fs[i].cols() != s.L) throw invalid_input("reflection_gram: test functions must be L x L");
    for (int t = 0; t < s.L; ++t)
      for (int x = 0; x < s.L; ++x) {
        const double v = fs[i](t, x);
        if (v == 0.0) continue;
        if (t < 1 || t > s.L / 2 - 1)
          throw invalid_support_error("reflection_gram: test function not supported at positive time");
        supp[i].push_back({t, x, v});
      }
  }
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  const auto n = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      double sum = 0.0;
      for (const Site& p : supp[static_cast<std::size_t>(i)])
        for (const Site& q : supp[static_cast<std::size_t>(j)])
          sum += p.v * q.v * c((p.t + q.t) % s.L, (p.x - q.x + s.L) % s.L);
      m(i, j) = m(j, i) = std::pow(s.a, 4) * sum;
    }
  return m;
}

/// Smallest eigenvalue of the lattice reflection Gram matrix.
inline double reflection_positivity_check(const LatticeSpec& s, const std::vector<Eigen::MatrixXd>& fs) {
  if (fs.empty()) throw invalid_input("reflection_positivity_check: no test functions");
  return detail::min_eigenvalue(reflection_gram(s, fs));
}

/// Finite combination of point masses sum_p w_p delta_{x_p}; coordinate 0 is time.
struct PointFunction {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
};

/// Continuum Gram matrix M_ij = sum_{p,q} w_p w_q C(|x_p - theta y_q|),
/// theta flipping the sign of coordinate 0.
inline Eigen::MatrixXd reflection_gram(const CovarianceKernel& k, const std::vector<PointFunction>& fs) {
  for (const auto& f : fs) {
    if (f.points.size() != f.weights.size()) throw invalid_input("reflection_gram: one weight per point");
    for (const auto& p : f.points) {
      if (p.size() != k.n) throw invalid_input("reflection_gram: point dimension differs from the kernel's");
      if (!(p[0] > 0.0)) throw invalid_support_error("reflection_gram: point not at positive time");
    }
  }
  const auto n = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& fi = fs[static_cast<std::size_t>(i)];
      const auto& fj = fs[static_cast<std::size_t>(j)];
      double sum = 0.0;
      for (std::size_t p = 0; p < fi.points.size(); ++p)
        for (std::size_t q = 0; q < fj.points.size(); ++q) {
          Eigen::VectorXd reflected = fj.points[q];
          reflected[0] = -reflected[0];
          sum += fi.weights[p] * fj.weights[q] * covariance(k, (fi.points[p] - reflected).norm());
        }
      m(i, j) = m(j, i) = sum;
    }
  return m;
}

inline double reflection_positivity_check(const CovarianceKernel& k, const std::vector<PointFunction>& fs) {
  if (fs.empty()) throw invalid_input("reflection_positivity_check: no test functions");
  return detail::min_eigenvalue(reflection_gram(k, fs));
}

/// Rigid motion of the plane: x -> R(angle) x + shift.
struct EuclideanMotion {
  double angle = 0.0;
  Eigen::Vector2d shift = Eigen::Vector2d::Zero();

  [[nodiscard]] Eigen::Matrix2d rotation() const {
    Eigen::Matrix2d r;
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
  }
  [[nodiscard]] bool is_identity() const { return angle == 0.0 && shift.isZero(0.0); }
};

/// Anisotropic Gaussian bump amplitude * exp(-(x - c)^T P (x - c) / 2),
/// negligible (below e^{-32}) outside 8 standard deviations.
struct Bump {
  Eigen::Vector2d center;
  Eigen::Matrix2d precision;
  double amplitude = 1.0;

  [[nodiscard]] double operator()(const Eigen::Vector2d& x) const {
    const Eigen::Vector2d d = x - center;
    return amplitude * std::exp(-0.5 * d.dot(precision * d));
  }

  /// (T f)(x) = f(T^{-1} x).
  [[nodiscard]] Bump transformed(const EuclideanMotion& t) const {
    const Eigen::Matrix2d r = t.rotation();
    return {r * center + t.shift, r * precision * r.transpose(), amplitude};
  }

  [[nodiscard]] Eigen::Matrix2d cov() const { return precision.inverse(); }
};

struct PairingGrid {
  int inner = 40;      // Gauss-Legendre nodes per axis for the correlation
  int angular = 128;   // trapezoid nodes in the angle
  int radial_panels = 8;
  int radial_order = 16;
};

/// C(f, g) = \int\int f(x) C(|x - y|) g(y) dx dy for a 2D kernel, computed as
/// \int C(|z|) h(z) dz with h(z) = \int f(y + z) g(y) dy. The outer integral
/// is done in polar coordinates with r = R u^2, which smooths the logarithmic
/// singularity at r = 0; h is evaluated by tensor Gauss-Legendre over the
/// axis-aligned bounding box of g.
inline double bump_pairing(const CovarianceKernel& k, const Bump& f, const Bump& g, const PairingGrid& grid = {}) {
  if (k.n != 2) throw unsupported_error("bump_pairing: only the planar kernel is supported");
  const Eigen::Matrix2d cg = g.cov();
  const double hx = 8.0 * std::sqrt(cg(0, 0));
  const double hy = 8.0 * std::sqrt(cg(1, 1));
  const auto rx = numerics::gauss_legendre_rule(grid.inner, g.center[0] - hx, g.center[0] + hx);
  const auto ry = numerics::gauss_legendre_rule(grid.inner, g.center[1] - hy, g.center[1] + hy);
  std::vector<Eigen::Vector2d> ys;
  std::vector<double> wy;
  for (std::size_t i = 0; i < rx.nodes.size(); ++i)
    for (std::size_t j = 0; j < ry.nodes.size(); ++j) {
      const Eigen::Vector2d y(rx.nodes[i], ry.nodes[j]);
      ys.push_back(y);
      wy.push_back(rx.weights[i] * ry.weights[j] * g(y));
    }
  auto h = [&](const Eigen::Vector2d& z) {
    double s = 0.0;
    for (std::size_t p = 0; p < ys.size(); ++p) s += wy[p] * f(ys[p] + z);
    return s;
  };
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(f.cov() + cg);
  const double radius = (f.center - g.center).norm() + 8.0 * std::sqrt(es.eigenvalues().maxCoeff());
  const auto ru = numerics::composite_legendre_rule(grid.radial_order, grid.radial_panels, 0.0, 1.0);
  const double dphi = 2.0 * std::numbers::pi / grid.angular;
  double total = 0.0;
  for (std::size_t i = 0; i < ru.nodes.size(); ++i) {
    const double u = ru.nodes[i];
    const double r = radius * u * u;
    double ang = 0.0;
    for (int a = 0; a < grid.angular; ++a) {
      const double phi = a * dphi;
      ang += h(Eigen::Vector2d(r * std::cos(phi), r * std::sin(phi)));
    }
    // r dr = 2 R^2 u^3 du.
    total += ru.weights[i] * 2.0 * radius * radius * u * u * u * covariance(k, r) * ang * dphi;
  }
  return total;
}

/// |C(T f, T g) - C(f, g)| by quadrature; exactly 0 for the identity motion.
inline double euclidean_invariance_check(const CovarianceKernel& k, const Bump& f, const Bump& g,
                                         const EuclideanMotion& t, const PairingGrid& grid = {}) {
  if (k.n != 2) throw unsupported_error("euclidean_invariance_check: only the planar kernel is supported");
  if (t.is_identity()) return 0.0;
  return std::abs(bump_pairing(k, f.transformed(t), g.transformed(t), grid) - bump_pairing(k, f, g, grid));
}

}  // namespace pathint::freefield
