#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/core/stats.hpp"
#include "pathint/wiener/bridge.hpp"

namespace pathint::wiener {

namespace detail {

inline constexpr int fk_block = 4096;

// Fresh stream key drawn from the caller's stream; path blocks use
// substreams of it so results do not depend on how blocks are scheduled.
inline RngStream fk_base(RngStream& rng) { return RngStream(rng.seed(), rng.engine()()); }

inline void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw estimator_failure(what);
}

}  // namespace detail

/// Feynman-Kac estimator of (e^{-tH} psi)(x0), H = -1/2 d^2/dx^2 + V:
/// MC average of psi(x(t)) exp(-sum_j dt V(x(t_{j-1}))) over Brownian paths
/// started at x0 (left-endpoint Riemann sum).
template <class Potential, class Psi>
Estimate feynman_kac(Potential&& V, Psi&& psi, double t, double x0, int n_paths, int steps, RngStream& rng) {
  pathint::detail::require(t > 0.0, "feynman_kac: t must be positive");
  pathint::detail::require(n_paths >= 2 && steps >= 1, "feynman_kac: need n_paths >= 2, steps >= 1");
  const double dt = t / steps;
  const double sd = std::sqrt(dt);
  RngStream base = detail::fk_base(rng);
  std::vector<double> samples(static_cast<std::size_t>(n_paths));
  for (int start = 0, block = 0; start < n_paths; start += detail::fk_block, ++block) {
    RngStream r = base.substream(static_cast<std::uint64_t>(block));
    const int end = std::min(n_paths, start + detail::fk_block);
    for (int i = start; i < end; ++i) {
      double x = x0;
      double s = 0.0;
      for (int j = 0; j < steps; ++j) {
        const double v = V(x);
        detail::check_finite(v, "feynman_kac: potential is not finite on a visited point");
        s += v;
        x += sd * r.normal();
      }
      const double w = psi(x) * std::exp(-dt * s);
      detail::check_finite(w, "feynman_kac: non-finite path weight");
      samples[static_cast<std::size_t>(i)] = w;
    }
  }
  return mean_and_stderr(samples);
}

/// Ground-state energy from the decay of F(s) = (e^{-sH} psi)(x0):
/// -(1/delta) log(F(t + delta)/F(t)), with F(t) and F(t + delta) read off the
/// same paths. `steps` covers [0, t + delta] and must put a grid point at t.
/// The standard error follows from the delta method on the ratio.
template <class Potential, class Psi>
Estimate feynman_kac_ground_energy(Potential&& V, Psi&& psi, double t, double delta, double x0, int n_paths,
                                   int steps, RngStream& rng) {
  pathint::detail::require(t > 0.0 && delta > 0.0, "feynman_kac_ground_energy: t and delta must be positive");
  pathint::detail::require(n_paths >= 2 && steps >= 1, "feynman_kac_ground_energy: need n_paths >= 2, steps >= 1");
  const double dt = (t + delta) / steps;
  const auto mid = static_cast<int>(std::lround(t / dt));
  pathint::detail::require(mid >= 1 && mid < steps && std::abs(mid * dt - t) < 1e-9 * t,
                           "feynman_kac_ground_energy: t must lie on the time grid");
  const double sd = std::sqrt(dt);
  RngStream base = detail::fk_base(rng);
  std::vector<double> near(static_cast<std::size_t>(n_paths));
  std::vector<double> far(static_cast<std::size_t>(n_paths));
  for (int start = 0, block = 0; start < n_paths; start += detail::fk_block, ++block) {
    RngStream r = base.substream(static_cast<std::uint64_t>(block));
    const int end = std::min(n_paths, start + detail::fk_block);
    for (int i = start; i < end; ++i) {
      double x = x0;
      double s = 0.0;
      for (int j = 0; j < steps; ++j) {
        if (j == mid) near[static_cast<std::size_t>(i)] = psi(x) * std::exp(-dt * s);
        const double v = V(x);
        detail::check_finite(v, "feynman_kac_ground_energy: potential is not finite on a visited point");
        s += v;
        x += sd * r.normal();
      }
      far[static_cast<std::size_t>(i)] = psi(x) * std::exp(-dt * s);
      detail::check_finite(far[static_cast<std::size_t>(i)], "feynman_kac_ground_energy: non-finite path weight");
    }
  }
  const double n = static_cast<double>(n_paths);
  const double f_near = pairwise_sum(near) / n;
  const double f_far = pairwise_sum(far) / n;
  if (!(f_near > 0.0) || !(f_far > 0.0))
    throw estimator_failure("feynman_kac_ground_energy: non-positive semigroup estimate");
  const double ratio = f_far / f_near;
  std::vector<double> resid(near.size());
  for (std::size_t i = 0; i < resid.size(); ++i) {
    const double d = far[i] - ratio * near[i];
    resid[i] = d * d;
  }
  const double ratio_se = std::sqrt(pairwise_sum(resid) / (n - 1.0) / n) / f_near;
  return {-std::log(ratio) / delta, ratio_se / (ratio * delta)};
}

/// Bridge estimator of the kernel of e^{-tH}: heat-kernel weight times the MC
/// average of exp(-sum_j dt V(b(t_j))) over Brownian bridges from x to y,
/// left endpoints j = 0..steps-1.
template <class Potential>
Estimate feynman_kac_kernel(Potential&& V, double t, double x, double y, int n_paths, int steps, RngStream& rng) {
  pathint::detail::require(t > 0.0, "feynman_kac_kernel: t must be positive");
  pathint::detail::require(n_paths >= 2 && steps >= 1, "feynman_kac_kernel: need n_paths >= 2, steps >= 1");
  const double dt = t / steps;
  const double weight = bridge_weight(x, y, 0.0, t);
  RngStream base = detail::fk_base(rng);
  std::vector<double> samples(static_cast<std::size_t>(n_paths));
  for (int start = 0, block = 0; start < n_paths; start += detail::fk_block, ++block) {
    RngStream r = base.substream(static_cast<std::uint64_t>(block));
    const int end = std::min(n_paths, start + detail::fk_block);
    for (int i = start; i < end; ++i) {
      const ScalarPath b = sample_bridge(x, y, 0.0, t, steps, r);
      double s = 0.0;
      for (int j = 0; j < steps; ++j) {
        const double v = V(b.values[static_cast<std::size_t>(j)]);
        detail::check_finite(v, "feynman_kac_kernel: potential is not finite on a visited point");
        s += v;
      }
      samples[static_cast<std::size_t>(i)] = weight * std::exp(-dt * s);
    }
  }
  return mean_and_stderr(samples);
}

}  // namespace pathint::wiener
