#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::mechanics {

/// Exact polynomial observable on phase space R^{2n}.
///
/// Monomials are keyed by exponent vectors (x_1..x_n, p_1..p_n). Zero
/// coefficients are never stored, so equality is structural.
class PhasePolynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, double>;

  explicit PhasePolynomial(int n = 1) : n_(n) {
    pathint::detail::require(n >= 1, "PhasePolynomial: dimension must be >= 1");
  }

  static PhasePolynomial constant(int n, double c) {
    PhasePolynomial out(n);
    out.add_term(Exponents(static_cast<std::size_t>(2 * n), 0), c);
    return out;
  }
  /// Coordinate x_i (0-based).
  static PhasePolynomial x(int n, int i) { return coordinate(n, i); }
  /// Momentum p_i (0-based).
  static PhasePolynomial p(int n, int i) { return coordinate(n, n + i); }
  /// c * prod x_i^{a_i} p_i^{b_i} with exponents laid out as (a..., b...).
  static PhasePolynomial monomial(int n, Exponents e, double c = 1.0) {
    pathint::detail::require(e.size() == static_cast<std::size_t>(2 * n), "PhasePolynomial: bad exponent length");
    PhasePolynomial out(n);
    out.add_term(std::move(e), c);
    return out;
  }

  [[nodiscard]] int dim() const noexcept { return n_; }
  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

  [[nodiscard]] int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(Exponents e, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  /// Coefficient of a monomial (0 if absent).
  [[nodiscard]] double coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  PhasePolynomial& operator+=(const PhasePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  PhasePolynomial& operator-=(const PhasePolynomial& o) {
    check_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  PhasePolynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(PhasePolynomial a, double s) { return a *= s; }
  friend PhasePolynomial operator*(double s, PhasePolynomial a) { return a *= s; }
  friend PhasePolynomial operator-(PhasePolynomial a) { return a *= -1.0; }

  friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
    a.check_dim(b);
    PhasePolynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const PhasePolynomial& a, const PhasePolynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// Partial derivative with respect to variable `var` in (x..., p...) order.
  [[nodiscard]] PhasePolynomial derivative(int var) const {
    pathint::detail::require(var >= 0 && var < 2 * n_, "PhasePolynomial: variable index out of range");
    PhasePolynomial out(n_);
    for (const auto& [e, c] : terms_) {
      const int k = e[static_cast<std::size_t>(var)];
      if (k == 0) continue;
      Exponents d = e;
      d[static_cast<std::size_t>(var)] -= 1;
      out.add_term(std::move(d), c * k);
    }
    return out;
  }
  [[nodiscard]] PhasePolynomial dx(int i) const { return derivative(i); }
  [[nodiscard]] PhasePolynomial dp(int i) const { return derivative(n_ + i); }

  [[nodiscard]] double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
    pathint::detail::require(x.size() == n_ && p.size() == n_, "PhasePolynomial: state dimension mismatch");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (int i = 0; i < n_; ++i) {
        t *= std::pow(x(i), e[static_cast<std::size_t>(i)]);
        t *= std::pow(p(i), e[static_cast<std::size_t>(n_ + i)]);
      }
      s += t;
    }
    return s;
  }

  /// True when every monomial depends on x only or on p only.
  [[nodiscard]] bool is_separable() const {
    for (const auto& [e, c] : terms_) {
      bool has_x = false, has_p = false;
      for (int i = 0; i < n_; ++i) {
        has_x |= e[static_cast<std::size_t>(i)] > 0;
        has_p |= e[static_cast<std::size_t>(n_ + i)] > 0;
      }
      if (has_x && has_p) return false;
    }
    return true;
  }

  /// Terms without any momentum factor (includes the constant term).
  [[nodiscard]] PhasePolynomial position_part() const { return filter(false); }
  /// Terms carrying at least one momentum factor.
  [[nodiscard]] PhasePolynomial momentum_part() const { return filter(true); }

  [[nodiscard]] std::string to_string() const {
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += std::to_string(c);
      for (int i = 0; i < 2 * n_; ++i) {
        const int k = e[static_cast<std::size_t>(i)];
        if (k == 0) continue;
        s += (i < n_ ? "*x" : "*p") + std::to_string(i % n_ + 1);
        if (k > 1) s += "^" + std::to_string(k);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  static PhasePolynomial coordinate(int n, int var) {
    Exponents e(static_cast<std::size_t>(2 * n), 0);
    e[static_cast<std::size_t>(var)] = 1;
    return monomial(n, std::move(e));
  }

  PhasePolynomial filter(bool with_p) const {
    PhasePolynomial out(n_);
    for (const auto& [e, c] : terms_) {
      bool has_p = false;
      for (int i = 0; i < n_; ++i) has_p |= e[static_cast<std::size_t>(n_ + i)] > 0;
      if (has_p == with_p) out.add_term(e, c);
    }
    return out;
  }

  void check_dim(const PhasePolynomial& o) const {
    if (o.n_ != n_) throw invalid_input("PhasePolynomial: dimension mismatch");
  }

  int n_;
  Terms terms_;
};

/// {f, g} = sum_j (df/dx_j dg/dp_j - dg/dx_j df/dp_j), computed exactly.
inline PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
  if (f.dim() != g.dim()) throw invalid_input("poisson_bracket: dimension mismatch");
  PhasePolynomial out(f.dim());
  for (int j = 0; j < f.dim(); ++j) {
    out += f.dx(j) * g.dp(j);
    out -= g.dx(j) * f.dp(j);
  }
  return out;
}

}  // namespace pathint::mechanics
