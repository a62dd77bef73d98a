#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/freefield/covariance.hpp"
#include "pathint/freefield/lattice.hpp"
#include "pathint/numerics/fourier.hpp"

using namespace pathint::freefield;
using pathint::RngStream;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

struct Stat {
  double mean = 0, se = 0;
};

Stat stat(const std::vector<double>& v) {
  Stat s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  double var = 0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  s.se = std::sqrt(var / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return s;
}

int wrap(int i, int L) { return ((i % L) + L) % L; }

}  // namespace

TEST_CASE("lattice spec validation", "[lattice]") {
  CHECK_THROWS_AS(LatticeSpec(5, 0.1, 1.0), pathint::invalid_input);
  CHECK_THROWS_AS(LatticeSpec(2, 0.1, 1.0), pathint::invalid_input);
  CHECK_THROWS_AS(LatticeSpec(8, 0.0, 1.0), pathint::invalid_input);
  CHECK_THROWS_AS(LatticeSpec(8, 0.1, -1.0), pathint::invalid_input);
}

TEST_CASE("lattice covariance symmetries and table", "[lattice]") {
  LatticeSpec s(12, 0.3, 0.8);
  const double c0 = lattice_covariance(s, 0, 0);
  CHECK(c0 > 0.0);
  const Eigen::MatrixXd table = lattice_covariance_table(s);
  for (int dx = -5; dx <= 5; ++dx)
    for (int dy = -5; dy <= 5; ++dy) {
      const double c = lattice_covariance(s, dx, dy);
      CHECK(c == lattice_covariance(s, -dx, -dy));
      CHECK_THAT(c, WithinAbs(lattice_covariance(s, dy, dx), 1e-15));
      CHECK_THAT(c, WithinAbs(lattice_covariance(s, dx + s.L, dy), 1e-14));
      CHECK_THAT(table(wrap(dx, s.L), wrap(dy, s.L)), WithinAbs(c, 1e-13));
      CHECK(c <= c0);
    }
}

TEST_CASE("lattice covariance is the Green function of Delta_a + m^2", "[lattice][oracle]") {
  LatticeSpec s(10, 0.2, 1.5);
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  for (int t = 0; t < s.L; ++t)
    for (int x = 0; x < s.L; ++x) {
      const double lap = (4 * c(t, x) - c(wrap(t + 1, s.L), x) - c(wrap(t - 1, s.L), x) - c(t, wrap(x + 1, s.L)) -
                          c(t, wrap(x - 1, s.L))) /
                         (s.a * s.a);
      const double delta = (t == 0 && x == 0) ? 1.0 / (s.a * s.a) : 0.0;
      CHECK_THAT(lap + s.m * s.m * c(t, x), WithinAbs(delta, 1e-10));
    }
}

TEST_CASE("lattice covariance is a positive convolution operator", "[lattice][property]") {
  LatticeSpec s(16, 0.25, 1.0);
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  std::vector<pathint::numerics::cplx> buf(s.sites());
  for (int i = 0; i < s.L; ++i)
    for (int j = 0; j < s.L; ++j) buf[static_cast<std::size_t>(i * s.L + j)] = c(i, j);
  pathint::numerics::dft2(buf, 16, 16, pathint::numerics::Direction::forward);
  for (const auto& z : buf) {
    CHECK(z.real() > 0.0);
    CHECK(std::abs(z.imag()) < 1e-12);
  }
}

TEST_CASE("lattice covariance approaches the continuum kernel", "[lattice][continuum]") {
  // Physical side 8, a = 8/256, separation 1 = 32 sites.
  LatticeSpec s(256, 8.0 / 256, 1.0);
  const double continuum = covariance({2, 1.0}, 1.0);
  CHECK_THAT(lattice_covariance(s, 32, 0), WithinRel(continuum, 0.02));
  CHECK_THAT(lattice_covariance(s, 0, 16), WithinRel(covariance({2, 1.0}, 0.5), 0.02));
  // Coarser lattice at the same physical size is farther away.
  LatticeSpec coarse(32, 8.0 / 32, 1.0);
  CHECK(std::abs(lattice_covariance(coarse, 4, 0) - continuum) > std::abs(lattice_covariance(s, 32, 0) - continuum));
}

TEST_CASE("gff samples have the lattice covariance", "[lattice][gff][mc]") {
  LatticeSpec s(16, 0.25, 1.0);
  GffSampler sampler(s);
  RngStream rng(31337);
  constexpr int n = 10000;
  std::vector<double> origin(n), prod0(n), prod3(n), diag(n);
  for (int i = 0; i < n; ++i) {
    auto f = sampler(rng);
    origin[static_cast<std::size_t>(i)] = f.values(0, 0);
    prod0[static_cast<std::size_t>(i)] = f.values(5, 7) * f.values(5, 7);
    prod3[static_cast<std::size_t>(i)] = f.values(2, 1) * f.values(5, 1);
    diag[static_cast<std::size_t>(i)] = f.values(4, 4) * f.values(6, 7);
  }
  auto m = stat(origin);
  CHECK(std::abs(m.mean) < 4.0 * m.se);
  auto v0 = stat(prod0);
  CHECK(std::abs(v0.mean - lattice_covariance(s, 0, 0)) < 4.0 * v0.se);
  auto v3 = stat(prod3);
  CHECK(std::abs(v3.mean - lattice_covariance(s, 3, 0)) < 4.0 * v3.se);
  auto vd = stat(diag);
  CHECK(std::abs(vd.mean - lattice_covariance(s, 2, 3)) < 4.0 * vd.se);
  CHECK_THAT(sampler.c0(), WithinRel(lattice_covariance(s, 0, 0), 1e-10));
}

TEST_CASE("gff characteristic functional", "[lattice][gff][mc][property]") {
  LatticeSpec s(8, 0.5, 1.0);
  GffSampler sampler(s);
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  RngStream rng(8);
  constexpr int n = 20000;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(s.L, s.L);
    for (int k = 0; k < 4; ++k) f(static_cast<int>(rng.uniform() * s.L), static_cast<int>(rng.uniform() * s.L)) += 2 * rng.normal();
    // C(f, f) = sum_{x,y} a^4 f(x) C(x - y) f(y).
    double cff = 0.0;
    for (int t = 0; t < s.L; ++t)
      for (int x = 0; x < s.L; ++x)
        for (int u = 0; u < s.L; ++u)
          for (int y = 0; y < s.L; ++y) cff += f(t, x) * f(u, y) * c(wrap(t - u, s.L), wrap(x - y, s.L));
    cff *= std::pow(s.a, 4);
    std::vector<double> re(n), im(n);
    for (int i = 0; i < n; ++i) {
      const double phif = s.a * s.a * (sampler(rng).values.array() * f.array()).sum();
      re[static_cast<std::size_t>(i)] = std::cos(phif);
      im[static_cast<std::size_t>(i)] = std::sin(phif);
    }
    auto sr = stat(re);
    auto si = stat(im);
    CHECK(std::abs(sr.mean - std::exp(-0.5 * cff)) < 4.0 * sr.se);
    CHECK(std::abs(si.mean) < 4.0 * si.se);
  }
}

TEST_CASE("identical streams give identical fields", "[lattice][gff]") {
  LatticeSpec s(8, 0.5, 1.0);
  RngStream a(4, 2), b(4, 2);
  CHECK(sample_gff(s, a).values == sample_gff(s, b).values);
}

TEST_CASE("wick powers of the lattice field", "[lattice][wick][mc]") {
  LatticeSpec s(16, 0.25, 1.0);
  GffSampler sampler(s);
  RngStream rng(77);
  {
    auto f = sampler(rng);
    CHECK(wick_power_field(f, 1) == f.values);
    CHECK((wick_power_field(f, 0).array() == 1.0).all());
    CHECK_THROWS_AS(wick_power_field(f, -1), pathint::invalid_input);
  }
  constexpr int n = 10000;
  const double c0 = sampler.c0();
  const double c2 = lattice_covariance(s, 2, 1);
  std::vector<double> w2(n), w33(n), w23(n), w33_same(n);
  for (int i = 0; i < n; ++i) {
    auto f = sampler(rng);
    auto p2 = wick_power_field(f, 2);
    auto p3 = wick_power_field(f, 3);
    w2[static_cast<std::size_t>(i)] = p2(3, 3);
    w33[static_cast<std::size_t>(i)] = p3(3, 3) * p3(5, 4);
    w23[static_cast<std::size_t>(i)] = p2(3, 3) * p3(5, 4);
    w33_same[static_cast<std::size_t>(i)] = p3(9, 9) * p3(9, 9);
  }
  auto m2 = stat(w2);
  CHECK(std::abs(m2.mean) < 4.0 * m2.se);
  auto m33 = stat(w33);
  CHECK(std::abs(m33.mean - 6.0 * std::pow(c2, 3)) < 4.0 * m33.se);
  auto m23 = stat(w23);
  CHECK(std::abs(m23.mean) < 4.0 * m23.se);
  auto ms = stat(w33_same);
  CHECK(std::abs(ms.mean - 6.0 * std::pow(c0, 3)) < 4.0 * ms.se);
}

TEST_CASE("polynomial interaction", "[lattice][interaction][mc]") {
  LatticeSpec s(8, 0.5, 1.0);
  GffSampler sampler(s);
  const Region region{1, 5, 2, 6};
  RngStream rng(99);
  {
    auto f = sampler(rng);
    CHECK(interaction_action(f, {}, region) == 0.0);
    CHECK(interaction_action(f, {0.0, 0.0}, region) == 0.0);
    CHECK_THROWS_AS(interaction_action(f, {0, 0, 0, 1}, region), pathint::invalid_input);
    CHECK_THROWS_AS(interaction_action(f, {0, 0, -1}, region), pathint::invalid_input);
    CHECK_THROWS_AS(interaction_action(f, {0, 0, 1}, Region{0, 9, 0, 2}), pathint::invalid_input);
    // Matches a direct sum of the Wick polynomial.
    auto w4 = pathint::gaussian::wick_order(4, f.c0);
    double direct = 0.0;
    for (int t = region.t0; t < region.t1; ++t)
      for (int x = region.x0; x < region.x1; ++x) direct += s.a * s.a * (0.5 * w4(f.values(t, x)) + 0.1);
    CHECK_THAT(interaction_action(f, {0.1, 0, 0, 0, 0.5}, region), WithinRel(direct, 1e-12));
  }
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  double var_oracle = 0.0;
  for (int t = region.t0; t < region.t1; ++t)
    for (int x = region.x0; x < region.x1; ++x)
      for (int u = region.t0; u < region.t1; ++u)
        for (int y = region.x0; y < region.x1; ++y) var_oracle += std::pow(c(wrap(t - u, s.L), wrap(x - y, s.L)), 4);
  var_oracle *= 24.0 * std::pow(s.a, 4);

  constexpr int n = 20000;
  std::vector<double> acts(n);
  const double floor = -6.0 * sampler.c0() * sampler.c0() * s.a * s.a * static_cast<double>(region.sites());
  bool bounded = true;
  for (int i = 0; i < n; ++i) {
    acts[static_cast<std::size_t>(i)] = interaction_action(sampler(rng), {0, 0, 0, 0, 1}, region);
    bounded = bounded && acts[static_cast<std::size_t>(i)] >= floor;
  }
  CHECK(bounded);
  auto mean = stat(acts);
  CHECK(std::abs(mean.mean) < 4.0 * mean.se);
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) sq[static_cast<std::size_t>(i)] = acts[static_cast<std::size_t>(i)] * acts[static_cast<std::size_t>(i)];
  auto var = stat(sq);
  INFO(var.mean << " +- " << var.se << " vs " << var_oracle);
  CHECK(std::abs(var.mean - var_oracle) < 4.0 * var.se);
}

TEST_CASE("exponential interaction", "[lattice][interaction][mc]") {
  LatticeSpec s(16, 0.25, 1.0);
  GffSampler sampler(s);
  RngStream rng(5);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.L, s.L);
  g.block(2, 3, 4, 5).setConstant(1.0);
  g(10, 10) = 2.5;
  const double mass = s.a * s.a * g.sum();
  {
    auto f = sampler(rng);
    CHECK_THAT(exp_interaction(f, 0.0, g), WithinRel(mass, 1e-14));
    CHECK(exp_interaction(f, 3.0, g) > 0.0);
    Eigen::MatrixXd bad = g;
    bad(0, 0) = -1e-3;
    CHECK_THROWS_AS(exp_interaction(f, 1.0, bad), pathint::invalid_input);
  }
  const double alpha = std::sqrt(2 * pi);
  const double second = exp_interaction_second_moment(s, alpha, g);
  constexpr int n = 20000;
  std::vector<double> v(n), v2(n);
  for (int i = 0; i < n; ++i) {
    const double e = exp_interaction(sampler(rng), alpha, g);
    v[static_cast<std::size_t>(i)] = e;
    v2[static_cast<std::size_t>(i)] = e * e;
  }
  auto m1 = stat(v);
  auto m2 = stat(v2);
  CHECK(std::abs(m1.mean - mass) < 4.0 * m1.se);
  CHECK(std::abs(m2.mean - second) < 4.0 * m2.se);
  // Constant-g shortcut agrees with the general double sum.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(s.L, s.L);
  Eigen::MatrixXd almost = ones;
  almost(0, 0) = 1.0 + 1e-12;
  CHECK_THAT(exp_interaction_second_moment(s, alpha, ones),
             WithinRel(exp_interaction_second_moment(s, alpha, almost), 1e-9));
}

TEST_CASE("exponential interaction second moment: threshold trend", "[lattice][interaction]") {
  // Fixed physical side 4, a halved three times. Below 4 pi the double sum
  // converges; above it grows like a^{2 - alpha^2/2pi}.
  auto trend = [](double alpha2) {
    std::vector<double> d;
    for (int L : {16, 32, 64, 128}) {
      LatticeSpec s(L, 4.0 / L, 1.0);
      d.push_back(exp_interaction_second_moment(s, std::sqrt(alpha2), Eigen::MatrixXd::Ones(L, L)));
    }
    return d;
  };
  const auto low = trend(2 * pi);
  const auto high = trend(6 * pi);
  for (std::size_t i = 1; i < low.size(); ++i) {
    INFO("refinement " << i << ": " << low[i] / low[i - 1] << " " << high[i] / high[i - 1]);
    CHECK(low[i] / low[i - 1] < 1.1);
    CHECK(high[i] / high[i - 1] > 1.6);
  }
  // Successive increments shrink below the threshold.
  CHECK(std::abs(low[3] - low[2]) < std::abs(low[2] - low[1]));
}

TEST_CASE("partition function estimates", "[lattice][partition][mc]") {
  LatticeSpec s(8, 0.5, 1.0);
  const Region region{1, 5, 1, 5};
  RngStream rng(2);
  auto zero = partition_estimate(s, {}, region, 100, rng);
  CHECK(zero.z == 1.0);
  CHECK(zero.std_error == 0.0);
  CHECK(zero.log_z == 0.0);

  auto z = partition_estimate(s, {0, 0, 0, 0, 1}, region, 20000, rng);
  CHECK(std::isfinite(z.z));
  // Jensen: Z >= e^{-E S_I} = 1.
  CHECK(z.z >= 1.0 - 3.0 * z.std_error);
  // Log-sum-exp keeps huge couplings finite in log space.
  auto big = partition_estimate(s, {0, 0, 0, 0, 1e4}, region, 200, rng);
  CHECK(std::isfinite(big.log_z));
  CHECK_THROWS_AS(partition_estimate(s, {0, 1}, region, 10, rng), pathint::invalid_input);
}

TEST_CASE("weak-coupling expansion of the partition function", "[lattice][partition][mc]") {
  // Z(lambda) = 1 + lambda^2 Var(S)/2 + O(lambda^3) for S = sum a^2 :phi^4:.
  LatticeSpec s(8, 0.5, 1.0);
  const Region region{1, 5, 1, 5};
  const Eigen::MatrixXd c = lattice_covariance_table(s);
  double var_oracle = 0.0;
  for (int t = region.t0; t < region.t1; ++t)
    for (int x = region.x0; x < region.x1; ++x)
      for (int u = region.t0; u < region.t1; ++u)
        for (int y = region.x0; y < region.x1; ++y) var_oracle += std::pow(c(wrap(t - u, s.L), wrap(x - y, s.L)), 4);
  var_oracle *= 24.0 * std::pow(s.a, 4);

  constexpr int n = 40000;
  constexpr std::uint64_t seed = 123;
  // The action samples behind each estimate (same stream key).
  std::vector<double> acts(n);
  {
    RngStream rng(seed);
    GffSampler sampler(s);
    for (auto& a : acts) a = interaction_action(sampler(rng), {0, 0, 0, 0, 1}, region);
  }
  double mean_s = 0.0;
  for (double a : acts) mean_s += a;
  mean_s /= n;

  // g(lambda) = (Z(lambda) - 1 + lambda mean(S)) / lambda^2, linear fit in lambda.
  std::vector<double> lambdas = {0.01, 0.02, 0.04}, gs;
  for (double lam : lambdas) {
    RngStream rng(seed);
    auto z = partition_estimate(s, {0, 0, 0, 0, lam}, region, n, rng);
    double direct = 0.0;
    for (double a : acts) direct += std::exp(-lam * a);
    CHECK_THAT(z.z, WithinRel(direct / n, 1e-12));
    gs.push_back((z.z - 1.0 + lam * mean_s) / (lam * lam));
  }
  const double mx = (lambdas[0] + lambdas[1] + lambdas[2]) / 3;
  const double my = (gs[0] + gs[1] + gs[2]) / 3;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxy += (lambdas[i] - mx) * (gs[i] - my);
    sxx += (lambdas[i] - mx) * (lambdas[i] - mx);
  }
  const double intercept = my - sxy / sxx * mx;
  // Error of the intercept is dominated by the sampling error of mean(S^2)/2.
  std::vector<double> half_sq(n);
  for (int i = 0; i < n; ++i) half_sq[static_cast<std::size_t>(i)] = 0.5 * acts[static_cast<std::size_t>(i)] * acts[static_cast<std::size_t>(i)];
  auto hs = stat(half_sq);
  INFO("intercept " << intercept << " vs " << var_oracle / 2 << " (mean S^2/2 = " << hs.mean << " +- " << hs.se << ")");
  CHECK(std::abs(intercept - hs.mean) < 0.05 * hs.mean);
  CHECK(std::abs(intercept - var_oracle / 2) < 4.0 * hs.se + std::abs(intercept - hs.mean));
}
