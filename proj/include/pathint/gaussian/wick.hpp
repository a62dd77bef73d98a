#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/gaussian/pairings.hpp"

namespace pathint::gaussian {

/// Polynomial in generators f_1..f_k (Gaussian random variables with pairing
/// matrix q), stored as ordinary monomials: exponent tuple -> coefficient.
class WickPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit WickPolynomial(Eigen::MatrixXd q) : q_(std::move(q)) {
    if (q_.rows() != q_.cols() || q_.rows() == 0) throw invalid_input("WickPolynomial: q must be square and non-empty");
    const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
    if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw invalid_input("WickPolynomial: q must be symmetric");
    if (q_.diagonal().minCoeff() < 0.0) throw invalid_input("WickPolynomial: q(f, f) must be >= 0");
  }

  [[nodiscard]] int generators() const noexcept { return static_cast<int>(q_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& pairing() const noexcept { return q_; }
  [[nodiscard]] const std::map<Exponents, double>& terms() const noexcept { return terms_; }

  void add(const Exponents& e, double c) {
    if (static_cast<int>(e.size()) != generators()) throw invalid_input("WickPolynomial: exponent arity mismatch");
    for (int x : e)
      if (x < 0) throw invalid_input("WickPolynomial: negative exponent");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  [[nodiscard]] double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  [[nodiscard]] int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  /// Value at generator values f.
  [[nodiscard]] double operator()(const std::vector<double>& f) const {
    if (static_cast<int>(f.size()) != generators()) throw invalid_input("WickPolynomial: wrong number of values");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (std::size_t i = 0; i < e.size(); ++i) m *= std::pow(f[i], e[i]);
      s += m;
    }
    return s;
  }

  [[nodiscard]] double operator()(double f) const { return (*this)(std::vector<double>{f}); }

  /// Expectation under the centered Gaussian with pairing q (Wick's theorem
  /// on each monomial).
  [[nodiscard]] double expectation() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      std::vector<int> labels;
      for (std::size_t i = 0; i < e.size(); ++i) labels.insert(labels.end(), static_cast<std::size_t>(e[i]), static_cast<int>(i));
      s += c * pairing_moment(q_, labels);
    }
    return s;
  }

  [[nodiscard]] std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      os << (first ? "" : " + ") << c;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) os << "*f" << i + 1 << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
      first = false;
    }
    return first ? "0" : os.str();
  }

 private:
  Eigen::MatrixXd q_;
  std::map<Exponents, double> terms_;
};

namespace detail {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Eigen::MatrixXd scalar_q(double q) {
  if (!(q >= 0.0)) throw invalid_input("wick: q must be >= 0");
  return Eigen::MatrixXd::Constant(1, 1, q);
}

}  // namespace detail

/// (:f^n:) = sum_k n!/(k!(n-2k)!) f^{n-2k} (-q/2)^k for one generator with
/// q = q(f, f).
inline WickPolynomial wick_order(int n, double q) {
  if (n < 0) throw invalid_input("wick_order: n must be >= 0");
  WickPolynomial p(detail::scalar_q(q));
  for (int k = 0; 2 * k <= n; ++k)
    p.add({n - 2 * k},
          detail::factorial(n) / (detail::factorial(k) * detail::factorial(n - 2 * k)) * std::pow(-q / 2.0, k));
  return p;
}

/// Inverse relation f^n = sum_k n!/(k!(n-2k)!) (q/2)^k (:f^{n-2k}:).
/// Entry j of the result is the coefficient of (:f^j:).
inline std::vector<double> wick_expand(int n, double q) {
  if (n < 0) throw invalid_input("wick_expand: n must be >= 0");
  if (!(q >= 0.0)) throw invalid_input("wick_expand: q must be >= 0");
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; 2 * k <= n; ++k)
    c[static_cast<std::size_t>(n - 2 * k)] =
        detail::factorial(n) / (detail::factorial(k) * detail::factorial(n - 2 * k)) * std::pow(q / 2.0, k);
  return c;
}

/// Probabilists' Hermite polynomial: H_0 = 1, H_1 = x,
/// H_{n+1} = x H_n - n H_{n-1}.
inline double hermite(int n, double x) {
  if (n < 0) throw invalid_input("hermite: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// (:f^n:) evaluated at f for pairing q, via P_{n+1} = f P_n - n q P_{n-1}.
inline double wick_power(int n, double q, double f) {
  if (n < 0) throw invalid_input("wick_power: n must be >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = f;
  for (int k = 1; k < n; ++k) {
    const double next = f * cur - k * q * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// <(:f^n:), (:g^m:)>_{L^2} = delta_{nm} n! q(f, g)^n.
inline double wick_inner(int n, int m, double qff, double qgg, double qfg) {
  if (n < 0 || m < 0) throw invalid_input("wick_inner: degrees must be >= 0");
  if (!(qff >= 0.0) || !(qgg >= 0.0) || std::abs(qfg) > std::sqrt(qff * qgg) * (1.0 + 1e-12) + 1e-300)
    throw invalid_input("wick_inner: pairing values violate Cauchy-Schwarz");
  if (n != m) return 0.0;
  return detail::factorial(n) * std::pow(qfg, n);
}

/// Truncated series of (:e^{alpha f}:) = sum_k alpha^k/k! (:f^k:) together
/// with its closed form e^{alpha f - alpha^2 q/2}.
struct WickExponential {
  double alpha;
  double q;
  std::vector<double> coefficients;  // alpha^k / k!, k = 0..truncation

  [[nodiscard]] int truncation() const { return static_cast<int>(coefficients.size()) - 1; }

  [[nodiscard]] double series(double f) const {
    double s = 0.0;
    double prev = 1.0, cur = f;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      if (k == 0) {
        s += coefficients[0];
        continue;
      }
      if (k > 1) {
        const double next = f * cur - static_cast<double>(k - 1) * q * prev;
        prev = cur;
        cur = next;
      }
      s += coefficients[k] * cur;
    }
    return s;
  }

  [[nodiscard]] double closed_form(double f) const { return std::exp(alpha * f - 0.5 * alpha * alpha * q); }

  /// Bound on the L^2(mu) norm of the omitted tail,
  /// sqrt(sum_{k > N} (alpha^2 q)^k / k!).
  [[nodiscard]] double l2_remainder() const {
    const int n = truncation();
    const double s2 = alpha * alpha * q;
    if (s2 == 0.0) return 0.0;
    const double ratio = s2 / (n + 2);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::exp((n + 1) * std::log(s2) - std::lgamma(n + 2.0)) / (1.0 - ratio));
  }

  /// Pointwise bound on |closed_form(f) - series(f)|. Uses Cramer's
  /// inequality |H_k(x)| <= 1.0865 sqrt(k!) e^{x^2/4} for q > 0 and the
  /// Lagrange remainder of e^{alpha f} for q = 0.
  [[nodiscard]] double remainder_bound(double f) const {
    const int n = truncation();
    if (alpha == 0.0) return 0.0;
    if (q == 0.0) {
      const double a = std::abs(alpha * f);
      return std::exp((n + 1) * std::log(a) - std::lgamma(n + 2.0) + a);
    }
    const double s = std::abs(alpha) * std::sqrt(q);
    const double ratio = s / std::sqrt(n + 2.0);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    const double first = 1.0865 * std::exp(f * f / (4.0 * q) + (n + 1) * std::log(s) - 0.5 * std::lgamma(n + 2.0));
    return first / (1.0 - ratio);
  }
};

inline WickExponential wick_exp(double alpha, double q, int truncation = 30) {
  if (truncation < 0) throw invalid_input("wick_exp: truncation must be >= 0");
  if (!(q >= 0.0)) throw invalid_input("wick_exp: q must be >= 0");
  WickExponential w{alpha, q, std::vector<double>(static_cast<std::size_t>(truncation) + 1)};
  double c = 1.0;
  for (int k = 0; k <= truncation; ++k) {
    w.coefficients[static_cast<std::size_t>(k)] = c;
    c *= alpha / (k + 1);
  }
  return w;
}

/// Value of a diagram: product of q over its edges times the monomial of the
/// unpaired vertices; vertex v carries generator which[v].
inline WickPolynomial eval_diagram(const Diagram& d, const Eigen::MatrixXd& q, const std::vector<int>& which) {
  if (static_cast<int>(which.size()) != d.vertices())
    throw invalid_input("eval_diagram: one generator label per vertex required");
  WickPolynomial p(q);
  for (int l : which)
    if (l < 0 || l >= p.generators()) throw invalid_input("eval_diagram: generator label out of range");
  double c = 1.0;
  for (auto [i, j] : d.edges()) c *= q(which[static_cast<std::size_t>(i)], which[static_cast<std::size_t>(j)]);
  WickPolynomial::Exponents e(static_cast<std::size_t>(p.generators()), 0);
  for (int v : d.unpaired()) ++e[static_cast<std::size_t>(which[static_cast<std::size_t>(v)])];
  p.add(e, c);
  return p;
}

/// (:f_{which_1} ... f_{which_n}:) as an ordinary polynomial: the sum over
/// all diagrams of (-1)^rank times the diagram value.
inline WickPolynomial wick_monomial(const Eigen::MatrixXd& q, const std::vector<int>& which) {
  WickPolynomial p(q);
  for (const Diagram& d : enumerate_diagrams(static_cast<int>(which.size()))) {
    const WickPolynomial v = eval_diagram(d, q, which);
    const double sign = d.rank() % 2 == 0 ? 1.0 : -1.0;
    for (const auto& [e, c] : v.terms()) p.add(e, sign * c);
  }
  return p;
}

/// Integral of prod_b (:prod_{i in block b} f_i:): sum over complete
/// diagrams without intra-block edges. Blocks hold generator labels into q.
inline double generalized_wick_expectation(const Eigen::MatrixXd& q, const std::vector<std::vector<int>>& blocks) {
  if (blocks.empty()) throw invalid_input("generalized_wick_expectation: no blocks");
  std::vector<int> labels, ids;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int l : blocks[b]) {
      labels.push_back(l);
      ids.push_back(static_cast<int>(b));
    }
  return detail::hafnian(q, labels, ids);
}

/// Same, with blocks of vectors u and pairing q(u, v) = <Sigma u, v>.
inline double generalized_wick_expectation(const std::vector<std::vector<Eigen::VectorXd>>& blocks,
                                           const Eigen::MatrixXd& sigma) {
  if (blocks.empty()) throw invalid_input("generalized_wick_expectation: no blocks");
  std::vector<Eigen::VectorXd> flat;
  std::vector<std::vector<int>> ids(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& u : blocks[b]) {
      if (u.size() != sigma.rows()) throw invalid_input("generalized_wick_expectation: dimension mismatch");
      ids[b].push_back(static_cast<int>(flat.size()));
      flat.push_back(u);
    }
  Eigen::MatrixXd q(static_cast<Eigen::Index>(flat.size()), static_cast<Eigen::Index>(flat.size()));
  for (std::size_t i = 0; i < flat.size(); ++i)
    for (std::size_t j = 0; j < flat.size(); ++j)
      q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (sigma * flat[i]).dot(flat[j]);
  if (flat.empty()) return 1.0;
  return generalized_wick_expectation(q, ids);
}

}  // namespace pathint::gaussian
