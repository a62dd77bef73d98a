#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::gaussian {

/// Cameron-Martin density of the standard Gaussian shifted by h, relative to
/// the standard Gaussian: w -> exp(<h, w> - |h|^2/2).
inline std::function<double(const Eigen::VectorXd&)> cameron_martin_density(Eigen::VectorXd h) {
  if (!h.allFinite()) throw invalid_input("cameron_martin_density: h must be finite");
  const double half_norm = 0.5 * h.squaredNorm();
  return [h = std::move(h), half_norm](const Eigen::VectorXd& w) {
    if (w.size() != h.size()) throw invalid_input("cameron_martin_density: dimension mismatch");
    return std::exp(h.dot(w) - half_norm);
  };
}

struct TruncatedSum {
  double value;
  double remainder_bound;
};

/// <Exp(h1), Exp(h2)> truncated at degree N: sum_{n <= N} <h1, h2>^n / n!,
/// with the Lagrange bound |s|^{N+1} e^{|s|} / (N+1)! on the omitted tail.
inline TruncatedSum fock_exp_inner(const Eigen::VectorXd& h1, const Eigen::VectorXd& h2, int trunc) {
  if (trunc < 0) throw invalid_input("fock_exp_inner: truncation must be >= 0");
  if (h1.size() != h2.size()) throw invalid_input("fock_exp_inner: dimension mismatch");
  const double s = h1.dot(h2);
  double term = 1.0, sum = 0.0;
  for (int n = 0; n <= trunc; ++n) {
    sum += term;
    term *= s / (n + 1);
  }
  const double a = std::abs(s);
  const double bound = a == 0.0 ? 0.0 : std::exp((trunc + 1) * std::log(a) - std::lgamma(trunc + 2.0) + a);
  return {sum, bound};
}

/// h_1 (x)_s ... (x)_s h_n = (n!)^{-1/2} sum_sigma h_sigma(1) (x) ... (x) h_sigma(n),
/// flattened row-major into R^{d^n}.
inline Eigen::VectorXd symmetric_tensor(const std::vector<Eigen::VectorXd>& hs) {
  if (hs.empty()) return Eigen::VectorXd::Ones(1);
  const Eigen::Index d = hs.front().size();
  for (const auto& h : hs)
    if (h.size() != d) throw invalid_input("symmetric_tensor: dimension mismatch");
  const std::size_t n = hs.size();
  if (n > 10) throw unsupported_error("symmetric_tensor: degree above 10");
  Eigen::Index size = 1;
  for (std::size_t i = 0; i < n; ++i) size *= d;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    Eigen::VectorXd t = Eigen::VectorXd::Ones(1);
    for (std::size_t k = 0; k < n; ++k) {
      const Eigen::VectorXd& h = hs[perm[k]];
      Eigen::VectorXd next(t.size() * d);
      for (Eigen::Index i = 0; i < t.size(); ++i) next.segment(i * d, d) = t[i] * h;
      t = std::move(next);
    }
    out += t;
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out / std::sqrt(count);
}

}  // namespace pathint::gaussian
