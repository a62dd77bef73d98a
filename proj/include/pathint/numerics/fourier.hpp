#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "pathint/core/error.hpp"

namespace pathint::numerics {

using cplx = std::complex<double>;

/// Uniform grid x_j = origin + j * step, j = 0..size-1.
struct UniformGrid {
  double origin = 0.0;
  double step = 1.0;
  std::size_t size = 0;

  [[nodiscard]] double operator[](std::size_t j) const noexcept {
    return origin + static_cast<double>(j) * step;
  }
  [[nodiscard]] double back() const noexcept { return (*this)[size - 1]; }

  /// Grid of `size` points with spacing `step`, symmetric about zero up to
  /// one step: origin = -size/2 * step.
  static UniformGrid centered(std::size_t size, double step) {
    return {-static_cast<double>(size / 2) * step, step, size};
  }
};

/// Complex samples of a function on a uniform grid.
struct SampledFunction {
  UniformGrid grid;
  std::vector<cplx> values;

  SampledFunction() = default;
  SampledFunction(UniformGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
    validate();
  }

  /// Samples f on the grid.
  template <class F>
  static SampledFunction sample(UniformGrid g, F&& f) {
    std::vector<cplx> v(g.size);
    for (std::size_t j = 0; j < g.size; ++j) v[j] = cplx(f(g[j]));
    return {g, std::move(v)};
  }

  /// Builds from explicit abscissae, which must be uniformly spaced
  /// (relative tolerance 1e-9 on the spacing).
  static SampledFunction from_samples(std::span<const double> xs, std::vector<cplx> v) {
    if (xs.size() < 2) throw invalid_input("SampledFunction: need at least two points");
    const double step = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t j = 1; j < xs.size(); ++j) {
      if (std::abs((xs[j] - xs[j - 1]) - step) > 1e-9 * std::abs(step))
        throw invalid_input("SampledFunction: grid is not uniform");
    }
    return {UniformGrid{xs.front(), step, xs.size()}, std::move(v)};
  }

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }

  /// Discrete L2 norm sqrt(dx * sum |f_j|^2).
  [[nodiscard]] double l2_norm() const {
    double s = 0.0;
    for (const auto& v : values) s += std::norm(v);
    return std::sqrt(grid.step * s);
  }

 private:
  void validate() const {
    if (grid.size < 2) throw invalid_input("SampledFunction: need at least two points");
    if (!(grid.step > 0.0)) throw invalid_input("SampledFunction: grid step must be positive");
    if (values.size() != grid.size)
      throw invalid_input("SampledFunction: value count does not match grid");
  }
};

enum class Direction { forward, inverse };

namespace detail {

// FFTW plans keyed by (rows, cols, direction), reused across buffers.
// FFTW_ESTIMATE planning is deterministic and does not touch the data;
// FFTW_UNALIGNED allows execution on any std::complex buffer.
class PlanCache {
 public:
  PlanCache() = default;
  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  void run(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    const Key key{rows, cols, dir == Direction::forward};
    auto it = plans_.find(key);
    if (it == plans_.end()) {
      const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
      const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
      fftw_plan plan = rows == 1 ? fftw_plan_dft_1d(static_cast<int>(cols), p, p, sign, flags)
                                 : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), p, p, sign, flags);
      if (plan == nullptr) throw invalid_input("fft: FFTW could not plan the transform");
      it = plans_.emplace(key, plan).first;
    }
    fftw_execute_dft(it->second, p, p);
  }

 private:
  using Key = std::tuple<std::size_t, std::size_t, bool>;
  std::map<Key, fftw_plan> plans_;
};

inline PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace detail

/// In-place unnormalized DFT: X_l = sum_j x_j e^{-+ 2 pi i l j / N}.
/// Forward uses the minus sign.
inline void dft(std::span<cplx> data, Direction dir) {
  if (data.size() <= 1) return;
  detail::plan_cache().run(data, 1, data.size(), dir);
}

/// In-place unnormalized 2D DFT of a row-major rows x cols array.
inline void dft2(std::span<cplx> data, std::size_t rows, std::size_t cols, Direction dir) {
  if (data.size() != rows * cols) throw invalid_input("dft2: size mismatch");
  if (data.empty()) return;
  detail::plan_cache().run(data, rows, cols, dir);
}

/// Grid dual to `grid` under the transform: spacing 2 pi / (N dx), centered.
inline UniformGrid dual_grid(const UniformGrid& grid) {
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(grid.size) * grid.step);
  return UniformGrid::centered(grid.size, dk);
}

/// Unitary continuous Fourier transform sampled on a uniform grid:
///
///   forward:  g(k) = (2 pi)^{-1/2} \int e^{-ikx} f(x) dx
///   inverse:  g(x) = (2 pi)^{-1/2} \int e^{+ikx} f(k) dk
///
/// approximated by the Riemann sum on the input grid and evaluated on the
/// output grid with spacing 2 pi / (N dx) starting at `target_origin`. The
/// discrete map is exactly unitary, so round trips and Plancherel hold to
/// rounding when the inverse targets the original origin.
inline SampledFunction fourier_transform(const SampledFunction& f, Direction dir,
                                         double target_origin) {
  const std::size_t n = f.size();
  const double sign = dir == Direction::forward ? -1.0 : 1.0;
  const double dy = 2.0 * std::numbers::pi / (static_cast<double>(n) * f.grid.step);
  const UniformGrid out_grid{target_origin, dy, n};
  std::vector<cplx> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ang = sign * target_origin * static_cast<double>(j) * f.grid.step;
    work[j] = f.values[j] * cplx(std::cos(ang), std::sin(ang));
  }
  dft(work, dir);
  const double scale = f.grid.step / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t l = 0; l < n; ++l) {
    const double ang = sign * out_grid[l] * f.grid.origin;
    work[l] *= scale * cplx(std::cos(ang), std::sin(ang));
  }
  return {out_grid, std::move(work)};
}

/// Transform onto the centered dual grid.
inline SampledFunction fourier_transform(const SampledFunction& f, Direction dir) {
  return fourier_transform(f, dir, dual_grid(f.grid).origin);
}

}  // namespace pathint::numerics
