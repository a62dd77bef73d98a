#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"

namespace pathint::mechanics {

/// Discretized trajectory: node i is (times[i], values.row(i)).
struct Path {
  std::vector<double> times;
  Eigen::MatrixXd values;  // nodes x dimension

  Path() = default;
  Path(std::vector<double> t, Eigen::MatrixXd v) : times(std::move(t)), values(std::move(v)) {
    validate();
  }

  /// Samples q(t) on steps+1 uniform times in [t0, t1].
  template <class Q>
  static Path sample(double t0, double t1, int steps, int dim, Q&& q) {
    pathint::detail::require(steps >= 1, "Path: need at least one step");
    std::vector<double> ts(static_cast<std::size_t>(steps) + 1);
    Eigen::MatrixXd vs(steps + 1, dim);
    for (int i = 0; i <= steps; ++i) {
      const double t = t0 + (t1 - t0) * i / steps;
      ts[static_cast<std::size_t>(i)] = t;
      vs.row(i) = Eigen::VectorXd(q(t)).transpose();
    }
    return {std::move(ts), std::move(vs)};
  }

  [[nodiscard]] std::size_t nodes() const noexcept { return times.size(); }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(values.cols()); }
  [[nodiscard]] Eigen::VectorXd at(std::size_t i) const {
    return values.row(static_cast<Eigen::Index>(i)).transpose();
  }

  [[nodiscard]] bool is_uniform(double rel_tol = 1e-9) const {
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
      if (std::abs((times[i + 1] - times[i]) - dt) > rel_tol * std::abs(dt)) return false;
    return true;
  }

 private:
  void validate() const {
    if (times.size() < 2) throw invalid_input("Path: need at least two nodes");
    if (static_cast<Eigen::Index>(times.size()) != values.rows())
      throw invalid_input("Path: times and values disagree in length");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) throw invalid_input("Path: times must be strictly increasing");
  }
};

}  // namespace pathint::mechanics
