#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>

#include "pathint/core/error.hpp"
#include "pathint/numerics/fourier.hpp"
#include "pathint/quantum/kernel.hpp"

namespace pathint::quantum {

/// Wave function sampled on a uniform spatial grid.
///
/// The grid must be wide enough that the amplitude at its ends is below
/// 1e-10 of the peak; construction enforces this, evolution records
/// violations in `spilled`.
struct WaveFunction {
  numerics::SampledFunction psi;
  double mass = 1.0;
  double hbar = 1.0;
  bool spilled = false;

  static constexpr double boundary_tolerance = 1e-10;

  WaveFunction(numerics::SampledFunction f, double m = 1.0, double h = 1.0)
      : psi(std::move(f)), mass(m), hbar(h) {
    if (boundary_amplitude() >= boundary_tolerance)
      throw invalid_input("WaveFunction: amplitude at the grid boundary exceeds tolerance");
  }

  template <class F>
  static WaveFunction sample(numerics::UniformGrid grid, F&& f, double m = 1.0, double h = 1.0) {
    return {numerics::SampledFunction::sample(grid, std::forward<F>(f)), m, h};
  }

  [[nodiscard]] double norm() const { return psi.l2_norm(); }

  /// Largest |psi| among the two end points, relative to the peak |psi|.
  [[nodiscard]] double boundary_amplitude() const {
    double peak = 0.0;
    for (const auto& v : psi.values) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(psi.values.front()), std::abs(psi.values.back())) / peak;
  }

  [[nodiscard]] double operator[](std::size_t j) const { return psi.grid[j]; }
};

/// Free evolution by multiplication in Fourier space:
///   realtime:  psi_hat(k) -> e^{-i hbar k^2 t / 2m} psi_hat(k)   (Schroedinger)
///   euclidean: psi_hat(k) -> e^{-hbar k^2 t / 2m} psi_hat(k)     (heat flow)
/// Sets `spilled` on the result if the boundary tolerance is exceeded.
inline WaveFunction evolve_free(WaveFunction wf, double t, TimeMode mode = TimeMode::realtime) {
  if (t == 0.0) return wf;
  if (mode == TimeMode::euclidean && t < 0.0) throw invalid_input("evolve_free: heat flow needs t >= 0");
  using numerics::Direction;
  auto hat = numerics::fourier_transform(wf.psi, Direction::forward);
  for (std::size_t l = 0; l < hat.size(); ++l) {
    const double k = hat.grid[l];
    const double arg = wf.hbar * k * k * t / (2.0 * wf.mass);
    hat.values[l] *= mode == TimeMode::realtime ? std::polar(1.0, -arg) : std::complex<double>(std::exp(-arg));
  }
  wf.psi = numerics::fourier_transform(hat, Direction::inverse, wf.psi.grid.origin);
  if (wf.boundary_amplitude() >= WaveFunction::boundary_tolerance) wf.spilled = true;
  return wf;
}

/// Kato-Lie-Trotter splitting: n steps of psi -> F(t/n) M(t/n) psi where M
/// multiplies by e^{-(i/hbar)(t/n) V} (realtime) or e^{-(t/n) V} (euclidean)
/// and F is evolve_free over t/n in the same mode.
template <class V>
WaveFunction trotter_evolve(V&& potential, WaveFunction wf, double t, int n, TimeMode mode = TimeMode::realtime) {
  pathint::detail::require(n >= 1, "trotter_evolve: n must be >= 1");
  const double dt = t / n;
  std::vector<std::complex<double>> factor(wf.psi.size());
  for (std::size_t j = 0; j < factor.size(); ++j) {
    const double v = potential(wf.psi.grid[j]);
    factor[j] = mode == TimeMode::realtime ? std::polar(1.0, -dt * v / wf.hbar)
                                           : std::complex<double>(std::exp(-dt * v));
  }
  for (int step = 0; step < n; ++step) {
    for (std::size_t j = 0; j < factor.size(); ++j) wf.psi.values[j] *= factor[j];
    wf = evolve_free(std::move(wf), dt, mode);
  }
  return wf;
}

}  // namespace pathint::quantum
