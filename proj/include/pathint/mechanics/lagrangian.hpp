#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/mechanics/path.hpp"

namespace pathint::mechanics {

namespace detail {

// Potentials may take either a vector or, for one-dimensional paths, a scalar.
template <class V>
double call_potential(V&& v, const Eigen::VectorXd& q) {
  if constexpr (std::is_invocable_v<V, const Eigen::VectorXd&>) {
    return v(q);
  } else {
    return v(q(0));
  }
}

template <class G>
Eigen::VectorXd call_gradient(G&& g, const Eigen::VectorXd& q) {
  if constexpr (std::is_invocable_v<G, const Eigen::VectorXd&>) {
    return g(q);
  } else {
    Eigen::VectorXd out(1);
    out(0) = g(q(0));
    return out;
  }
}

}  // namespace detail

/// Legendre transform (Lf)(p) = max_x (p x - f(x)) for convex f.
///
/// Golden-section search on [lo, hi]; throws boundary_hit_error if the
/// maximizer lies at either end, in which case the interval must be widened.
template <class F>
double legendre_transform(F&& f, double p, double lo, double hi) {
  pathint::detail::require(hi > lo, "legendre_transform: empty search interval");
  auto g = [&](double x) { return p * x - f(x); };
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++iter) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double edge = 1e-7 * (hi - lo);
  if (x - lo < edge || hi - x < edge)
    throw boundary_hit_error("legendre_transform: maximizer at the search boundary");
  return std::max({g(x), gc, gd});
}

/// Time-sliced action of a piecewise-linear path,
///
///   S = sum_i dt_i [ (m/2) |(q_{i+1} - q_i)/dt_i|^2 - V(q_i) ],
///
/// with the potential sampled at the left end of each slice.
template <class V>
double action(double mass, V&& potential, const Path& path) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < path.nodes(); ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    const Eigen::VectorXd qi = path.at(i);
    const Eigen::VectorXd v = (path.at(i + 1) - qi) / dt;
    s += dt * (0.5 * mass * v.squaredNorm() - detail::call_potential(potential, qi));
  }
  return s;
}

/// Discrete Euler-Lagrange residual -grad V(q_i) - m (q_{i+1} - 2 q_i + q_{i-1}) / dt^2
/// at the interior nodes (row i-1 holds node i).
template <class V, class G>
Eigen::MatrixXd euler_lagrange_residual(double mass, V&& /*potential*/, G&& grad_potential,
                                        const Path& path) {
  if (!path.is_uniform()) throw invalid_input("euler_lagrange_residual: grid must be uniform");
  const auto nodes = static_cast<Eigen::Index>(path.nodes());
  const double dt = path.times[1] - path.times[0];
  Eigen::MatrixXd out(std::max<Eigen::Index>(nodes - 2, 0), path.dim());
  for (Eigen::Index i = 1; i + 1 < nodes; ++i) {
    const Eigen::VectorXd q = path.values.row(i).transpose();
    const Eigen::VectorXd accel =
        (path.values.row(i + 1) - 2.0 * path.values.row(i) + path.values.row(i - 1)).transpose() / (dt * dt);
    out.row(i - 1) = (-detail::call_gradient(grad_potential, q) - mass * accel).transpose();
  }
  return out;
}

}  // namespace pathint::mechanics
