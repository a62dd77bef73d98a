#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/mechanics/phase_polynomial.hpp"
#include "pathint/quantum/oscillator.hpp"

namespace pathint::quantum {

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline void require_one_dimensional(const mechanics::PhasePolynomial& f, const char* who) {
  if (f.dim() != 1) throw invalid_input(std::string(who) + ": only one-dimensional polynomials are supported");
}

}  // namespace detail

/// Weyl (symmetric) quantization: each monomial x^a p^b maps to the average
/// of all (a+b)! orderings of its letters, i.e. the sum over the C(a+b, a)
/// distinct words divided by C(a+b, a).
inline TruncatedOperator weyl_quantize(const mechanics::PhasePolynomial& f, int n,
                                       const OscillatorParams& params = {}) {
  detail::require_one_dimensional(f, "weyl_quantize");
  const auto lad = ladder_operators(n, params);
  const Eigen::MatrixXcd x = lad.position().matrix;
  const Eigen::MatrixXcd p = lad.momentum().matrix;
  int max_a = 0, max_b = 0;
  for (const auto& [e, c] : f.terms()) {
    max_a = std::max(max_a, e[0]);
    max_b = std::max(max_b, e[1]);
  }
  // words[i][j] = sum over distinct words with i x-letters and j p-letters,
  // built as X * words[i-1][j] + P * words[i][j-1].
  std::vector<std::vector<Eigen::MatrixXcd>> words(
      static_cast<std::size_t>(max_a + 1), std::vector<Eigen::MatrixXcd>(static_cast<std::size_t>(max_b + 1)));
  for (int i = 0; i <= max_a; ++i) {
    for (int j = 0; j <= max_b; ++j) {
      auto& w = words[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == 0 && j == 0) {
        w = Eigen::MatrixXcd::Identity(n, n);
        continue;
      }
      w = Eigen::MatrixXcd::Zero(n, n);
      if (i > 0) w += x * words[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
      if (j > 0) w += p * words[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [e, c] : f.terms())
    out += (c / detail::binomial(e[0] + e[1], e[0])) *
           words[static_cast<std::size_t>(e[0])][static_cast<std::size_t>(e[1])];
  return {out, params};
}

/// Polynomial in (zbar, z): key (j, k) is the coefficient of zbar^j z^k.
using ZPolynomial = std::map<std::pair<int, int>, std::complex<double>>;

/// Rewrites f(x, p) in z = x + i alpha p, zbar = x - i alpha p.
inline ZPolynomial to_z_coordinates(const mechanics::PhasePolynomial& f, double alpha) {
  detail::require_one_dimensional(f, "wick_quantize");
  ZPolynomial out;
  for (const auto& [e, c] : f.terms()) {
    const int a = e[0], b = e[1];
    if (b > 0 && alpha == 0.0) throw invalid_input("wick_quantize: alpha must be non-zero for momentum terms");
    // x = (z + zbar)/2, p = (z - zbar)/(2 i alpha)
    const std::complex<double> pre =
        c * std::pow(0.5, a) * (b > 0 ? std::pow(std::complex<double>(0.0, 2.0 * alpha), -b) : 1.0);
    for (int r = 0; r <= a; ++r) {
      for (int s = 0; s <= b; ++s) {
        const double sign = ((b - s) % 2 == 0) ? 1.0 : -1.0;
        const int zbar = (a - r) + (b - s), z = r + s;
        out[{zbar, z}] += pre * detail::binomial(a, r) * detail::binomial(b, s) * sign;
      }
    }
  }
  return out;
}

/// Wick quantization: f is rewritten in (zbar, z) and every zbar^j z^k
/// becomes (z^dag)^j z^k, all z^dag = x - i alpha p factors to the left of
/// all z = x + i alpha p factors.
inline TruncatedOperator wick_quantize(const mechanics::PhasePolynomial& f, double alpha, int n,
                                       const OscillatorParams& params = {}) {
  const auto zpoly = to_z_coordinates(f, alpha);
  const auto lad = ladder_operators(n, params);
  const Eigen::MatrixXcd x = lad.position().matrix;
  const Eigen::MatrixXcd p = lad.momentum().matrix;
  const Eigen::MatrixXcd z = x + std::complex<double>(0.0, alpha) * p;
  const Eigen::MatrixXcd zdag = x - std::complex<double>(0.0, alpha) * p;
  int max_j = 0, max_k = 0;
  for (const auto& [jk, c] : zpoly) {
    max_j = std::max(max_j, jk.first);
    max_k = std::max(max_k, jk.second);
  }
  std::vector<Eigen::MatrixXcd> zpow{Eigen::MatrixXcd::Identity(n, n)}, zdpow{Eigen::MatrixXcd::Identity(n, n)};
  for (int k = 1; k <= max_k; ++k) zpow.push_back(z * zpow.back());
  for (int j = 1; j <= max_j; ++j) zdpow.push_back(zdag * zdpow.back());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [jk, c] : zpoly) {
    if (std::abs(c) == 0.0) continue;
    out += c * (zdpow[static_cast<std::size_t>(jk.first)] * zpow[static_cast<std::size_t>(jk.second)]);
  }
  return {out, params};
}

}  // namespace pathint::quantum
