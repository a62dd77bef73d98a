#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/core/stats.hpp"
#include "pathint/gaussian/wick.hpp"
#include "pathint/numerics/fourier.hpp"

namespace pathint::freefield {

/// Periodic L x L lattice with spacing a and mass m.
struct LatticeSpec {
  int L;
  double a;
  double m;

  LatticeSpec(int side, double spacing, double mass) : L(side), a(spacing), m(mass) {
    if (L < 4 || L % 2 != 0) throw invalid_input("LatticeSpec: L must be even and >= 4");
    if (!(a > 0.0)) throw invalid_input("LatticeSpec: spacing must be positive");
    if (!(m > 0.0)) throw invalid_input("LatticeSpec: mass must be positive");
  }

  [[nodiscard]] std::size_t sites() const noexcept { return static_cast<std::size_t>(L) * static_cast<std::size_t>(L); }
};

/// Eigenvalue of the nonnegative lattice Laplacian at momentum (k1, k2):
/// (4/a^2)(sin^2(pi k1/L) + sin^2(pi k2/L)).
inline double lattice_eigenvalue(const LatticeSpec& s, int k1, int k2) {
  const double s1 = std::sin(std::numbers::pi * k1 / s.L);
  const double s2 = std::sin(std::numbers::pi * k2 / s.L);
  return 4.0 / (s.a * s.a) * (s1 * s1 + s2 * s2);
}

/// Lattice Green function of (Delta_a + m^2)^{-1}, with sum_x a^2 as the
/// integral: (1/(L a)^2) sum_k e^{2 pi i k.(dx, dy)/L} / (lambda_k + m^2).
inline double lattice_covariance(const LatticeSpec& s, int dx, int dy) {
  double sum = 0.0;
  for (int k1 = 0; k1 < s.L; ++k1)
    for (int k2 = 0; k2 < s.L; ++k2) {
      const double phase = 2.0 * std::numbers::pi * (static_cast<double>(k1) * dx + static_cast<double>(k2) * dy) / s.L;
      sum += std::cos(phase) / (lattice_eigenvalue(s, k1, k2) + s.m * s.m);
    }
  return sum / (static_cast<double>(s.L) * s.L * s.a * s.a);
}

/// Full table C(dt, dx), dt, dx in [0, L), via one inverse 2D FFT.
inline Eigen::MatrixXd lattice_covariance_table(const LatticeSpec& s) {
  const auto n = static_cast<std::size_t>(s.L);
  std::vector<numerics::cplx> buf(n * n);
  for (int k1 = 0; k1 < s.L; ++k1)
    for (int k2 = 0; k2 < s.L; ++k2)
      buf[static_cast<std::size_t>(k1) * n + static_cast<std::size_t>(k2)] =
          1.0 / (lattice_eigenvalue(s, k1, k2) + s.m * s.m);
  numerics::dft2(buf, n, n, numerics::Direction::inverse);
  Eigen::MatrixXd out(s.L, s.L);
  const double norm = 1.0 / (static_cast<double>(s.L) * s.L * s.a * s.a);
  for (int i = 0; i < s.L; ++i)
    for (int j = 0; j < s.L; ++j)
      out(i, j) = norm * buf[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)].real();
  return out;
}

/// Field configuration; values(t, x) with rows as the time direction.
struct LatticeField {
  LatticeSpec spec;
  Eigen::MatrixXd values;
  double c0;

  LatticeField(LatticeSpec s, Eigen::MatrixXd v, double local_variance)
      : spec(s), values(std::move(v)), c0(local_variance) {
    if (values.rows() != spec.L || values.cols() != spec.L) throw invalid_input("LatticeField: shape must be L x L");
    if (!(c0 > 0.0)) throw invalid_input("LatticeField: c0 must be positive");
  }

  LatticeField(LatticeSpec s, Eigen::MatrixXd v) : LatticeField(s, std::move(v), lattice_covariance(s, 0, 0)) {}
};

/// Spectral sampler: white noise filtered by (a^2 (lambda_k + m^2))^{-1/2}
/// in momentum space, so Cov(phi(x), phi(y)) = lattice_covariance(x - y).
class GffSampler {
 public:
  explicit GffSampler(const LatticeSpec& s) : spec_(s), c0_(lattice_covariance(s, 0, 0)) {
    const auto n = static_cast<std::size_t>(s.L);
    filter_.resize(n * n);
    for (int k1 = 0; k1 < s.L; ++k1)
      for (int k2 = 0; k2 < s.L; ++k2)
        filter_[static_cast<std::size_t>(k1) * n + static_cast<std::size_t>(k2)] =
            1.0 / (s.a * std::sqrt(lattice_eigenvalue(s, k1, k2) + s.m * s.m));
  }

  [[nodiscard]] const LatticeSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] double c0() const noexcept { return c0_; }

  LatticeField operator()(RngStream& rng) const {
    const auto n = static_cast<std::size_t>(spec_.L);
    std::vector<numerics::cplx> buf(n * n);
    for (auto& z : buf) z = rng.normal();
    numerics::dft2(buf, n, n, numerics::Direction::forward);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= filter_[i];
    numerics::dft2(buf, n, n, numerics::Direction::inverse);
    Eigen::MatrixXd v(spec_.L, spec_.L);
    const double norm = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = norm * buf[i * n + j].real();
    return {spec_, std::move(v), c0_};
  }

 private:
  LatticeSpec spec_;
  double c0_;
  std::vector<double> filter_;
};

inline LatticeField sample_gff(const LatticeSpec& s, RngStream& rng) { return GffSampler(s)(rng); }

/// Pointwise (:phi(x)^k:) with q = c0.
inline Eigen::MatrixXd wick_power_field(const LatticeField& f, int k) {
  if (k < 0) throw invalid_input("wick_power_field: k must be >= 0");
  return f.values.unaryExpr([&](double v) { return gaussian::wick_power(k, f.c0, v); });
}

/// Rectangular block of sites [t0, t1) x [x0, x1).
struct Region {
  int t0, t1, x0, x1;

  static Region full(const LatticeSpec& s) { return {0, s.L, 0, s.L}; }

  void validate(const LatticeSpec& s) const {
    if (t0 < 0 || x0 < 0 || t1 > s.L || x1 > s.L || t0 >= t1 || x0 >= x1)
      throw invalid_input("Region: empty or outside the lattice");
  }
  [[nodiscard]] std::size_t sites() const {
    return static_cast<std::size_t>(t1 - t0) * static_cast<std::size_t>(x1 - x0);
  }
};

namespace detail {

inline void check_polynomial(const std::vector<double>& p) {
  int deg = -1;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] != 0.0) deg = static_cast<int>(j);
  if (deg < 0) return;
  if (deg % 2 != 0 || p[static_cast<std::size_t>(deg)] <= 0.0)
    throw invalid_input("interaction: P needs even degree and a positive leading coefficient");
}

}  // namespace detail

/// S_I = sum_{x in region} a^2 sum_j P_j (:phi(x)^j:), P given by its
/// coefficients P_0, P_1, ...
inline double interaction_action(const LatticeField& f, const std::vector<double>& p, const Region& region) {
  detail::check_polynomial(p);
  region.validate(f.spec);
  std::vector<double> terms;
  terms.reserve(region.sites());
  for (int t = region.t0; t < region.t1; ++t)
    for (int x = region.x0; x < region.x1; ++x) {
      const double v = f.values(t, x);
      double s = 0.0;
      // (:v^j:) by the three-term recurrence, accumulated on the fly.
      double prev = 1.0, cur = v;
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == 0) {
          s += p[0];
          continue;
        }
        if (j > 1) {
          const double next = v * cur - static_cast<double>(j - 1) * f.c0 * prev;
          prev = cur;
          cur = next;
        }
        s += p[j] * cur;
      }
      terms.push_back(s);
    }
  return f.spec.a * f.spec.a * pairwise_sum(terms);
}

/// sum_x a^2 g(x) (:e^{alpha phi(x)}:) = sum_x a^2 g(x) e^{alpha phi(x) - alpha^2 c0/2}.
inline double exp_interaction(const LatticeField& f, double alpha, const Eigen::MatrixXd& g) {
  if (g.rows() != f.spec.L || g.cols() != f.spec.L) throw invalid_input("exp_interaction: g must be L x L");
  if ((g.array() < 0.0).any()) throw invalid_input("exp_interaction: g must be nonnegative");
  std::vector<double> terms(f.spec.sites());
  const double shift = 0.5 * alpha * alpha * f.c0;
  std::size_t k = 0;
  for (int t = 0; t < f.spec.L; ++t)
    for (int x = 0; x < f.spec.L; ++x) terms[k++] = g(t, x) * std::exp(alpha * f.values(t, x) - shift);
  return f.spec.a * f.spec.a * pairwise_sum(terms);
}

/// Closed-form second moment of exp_interaction:
/// sum_{x,y} a^4 g(x) g(y) e^{alpha^2 C(x - y)}.
inline double exp_interaction_second_moment(const LatticeSpec& s, double alpha, const Eigen::MatrixXd& g) {
  if (g.rows() != s.L || g.cols() != s.L) throw invalid_input("exp_interaction_second_moment: g must be L x L");
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  const Eigen::MatrixXd e = (alpha * alpha * c).array().exp();
  if ((g.array() == g(0, 0)).all()) {
    // Translation invariance: sum_{x,y} e(x - y) = L^2 sum_d e(d).
    const double gs = g(0, 0);
    return std::pow(s.a, 4) * gs * gs * static_cast<double>(s.sites()) * e.sum();
  }
  std::vector<double> terms;
  terms.reserve(s.sites());
  for (int t = 0; t < s.L; ++t)
    for (int x = 0; x < s.L; ++x) {
      if (g(t, x) == 0.0) continue;
      double row = 0.0;
      for (int u = 0; u < s.L; ++u)
        for (int y = 0; y < s.L; ++y) row += g(u, y) * e((t - u + s.L) % s.L, (x - y + s.L) % s.L);
      terms.push_back(g(t, x) * row);
    }
  return std::pow(s.a, 4) * pairwise_sum(terms);
}

struct PartitionEstimate {
  double z;
  double std_error;
  double log_z;
};

/// Monte Carlo estimate of Z = E[e^{-S_I}] over free-field samples, with the
/// weights accumulated relative to their maximum (log-sum-exp) so that large
/// actions do not overflow.
inline PartitionEstimate partition_estimate(const LatticeSpec& s, const std::vector<double>& p, const Region& region,
                                            int n_samples, RngStream& rng) {
  detail::check_polynomial(p);
  region.validate(s);
  if (n_samples < 2) throw invalid_input("partition_estimate: need at least two samples");
  GffSampler sampler(s);
  std::vector<double> neg_action(static_cast<std::size_t>(n_samples));
  for (auto& v : neg_action) {
    v = -interaction_action(sampler(rng), p, region);
    if (!std::isfinite(v)) throw estimator_failure("partition_estimate: non-finite action");
  }
  const double top = *std::max_element(neg_action.begin(), neg_action.end());
  std::vector<double> w(neg_action.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(neg_action[i] - top);
  const Estimate e = mean_and_stderr(w);
  const double log_z = top + std::log(e.value);
  return {std::exp(log_z), std::exp(top) * e.std_error, log_z};
}

}  // namespace pathint::freefield
