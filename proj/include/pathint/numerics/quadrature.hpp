#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::numerics {

/// Nodes and weights of a fixed quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Result of an adaptive integration.
struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// Bisects the panel with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol * |I|) or max_panels is reached.
template <class F>
IntegrationResult integrate(F&& f, double a, double b, double abs_tol = 1e-13,
                            double rel_tol = 1e-13, std::size_t max_panels = 4000) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw invalid_input("integrate: interval must be finite");
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::kronrod_panel(f, a, b));
  double total = panels.top().value;
  double err = panels.top().error;
  std::size_t evals = 15;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && panels.size() < max_panels) {
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::kronrod_panel(f, worst.a, mid);
    const auto right = detail::kronrod_panel(f, mid, worst.b);
    evals += 30;
    panels.push(left);
    panels.push(right);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
  }
  return {total, err, evals};
}

/// Integrate over consecutive breakpoints, summing the pieces.
template <class F>
IntegrationResult integrate_pieces(F&& f, const std::vector<double>& breaks, double abs_tol = 1e-13,
                                   double rel_tol = 1e-13) {
  IntegrationResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto r = integrate(f, breaks[i], breaks[i + 1], abs_tol, rel_tol);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
  }
  return out;
}

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre_rule(int n) {
  if (n < 1) throw invalid_input("gauss_legendre_rule: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gauss_legendre_rule(int n, double a, double b) {
  auto rule = gauss_legendre_rule(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = c + h * rule.nodes[i];
    rule.weights[i] *= h;
  }
  return rule;
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points each.
inline QuadratureRule composite_legendre_rule(int order, int panels, double a, double b) {
  QuadratureRule out;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto r = gauss_legendre_rule(order, a + p * width, a + (p + 1) * width);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

/// Gauss-Hermite rule for the standard normal density e^{-x^2/2}/sqrt(2 pi).
///
/// Nodes are the roots of the probabilists' Hermite polynomial He_n, found by
/// Newton iteration on the orthonormal recurrence; weights are Christoffel
/// numbers 1 / sum_k p_k(x)^2, so the weights sum to one.
inline QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1) throw invalid_input("gauss_hermite_rule: order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Orthonormal p_k = He_k / sqrt(k!), returns (p_n, p_{n-1}, sum_{k<n} p_k^2).
  auto eval = [order](double x) {
    double pm1 = 0.0, p = 1.0, sumsq = 0.0;
    for (int k = 0; k < order; ++k) {
      sumsq += p * p;
      const double next = (x * p - std::sqrt(static_cast<double>(k)) * pm1) / std::sqrt(k + 1.0);
      pm1 = p;
      p = next;
    }
    return std::array<double, 3>{p, pm1, sumsq};
  };

  // Golub-Welsch eigenvalues of the Jacobi matrix as starting points,
  // polished by Newton on p_n.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(std::max(order - 1, 0));
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi;
  jacobi.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = jacobi.eigenvalues()(static_cast<Eigen::Index>(i));
    for (int iter = 0; iter < 20; ++iter) {
      const auto [p, pm1, s] = eval(x);
      const double dx = p / (std::sqrt(static_cast<double>(order)) * pm1);
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    all[i] = x;
  }
  // Enforce exact symmetry of the rule.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double r = 0.5 * (all[n - 1 - i] - all[i]);
    all[i] = -r;
    all[n - 1 - i] = r;
  }
  if (n % 2 == 1) all[n / 2] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = all[i];
    rule.weights[i] = 1.0 / eval(all[i])[2];
  }
  return rule;
}

/// E[g(X)] for X ~ N(0, 1) by Gauss-Hermite quadrature of the given order.
///
/// Exact for polynomials of degree <= 2 * order - 1.
template <class G>
double gauss_hermite_expect(G&& g, int order) {
  const auto rule = gauss_hermite_rule(order);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return s;
}

}  // namespace pathint::numerics
