#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "pathint/core/error.hpp"
#include "pathint/core/random.hpp"
#include "pathint/gaussian/measure.hpp"
#include "pathint/gaussian/pairings.hpp"
#include "pathint/gaussian/wick.hpp"

using namespace pathint::gaussian;
using pathint::RngStream;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using Edges = std::vector<std::pair<int, int>>;

long double_factorial(int k) { return k <= 0 ? 1 : k * double_factorial(k - 2); }

int rand_int(RngStream& rng, int lo, int hi) { return lo + static_cast<int>(rng.uniform() * (hi - lo + 1)); }

// Random symmetric positive-definite integer covariance: B B^T + I.
Eigen::MatrixXd integer_cov(RngStream& rng, int n) {
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = rand_int(rng, -2, 2);
  return b * b.transpose() + Eigen::MatrixXd::Identity(n, n);
}

Eigen::VectorXd integer_vec(RngStream& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rand_int(rng, -2, 2);
  return v;
}

// Ordinary-monomial expansion of :u_1 ... u_n: by the recursion
// :u_1..u_n: = u_n :u_1..u_{n-1}: - sum_{i<n} q(u_i, u_n) :u_1..^i..u_{n-1}:.
// Keys are sorted multisets of vector indices.
using Poly = std::map<std::vector<int>, double>;

Poly wick_recursive(const std::vector<int>& idx, const Eigen::MatrixXd& q) {
  if (idx.empty()) return {{{}, 1.0}};
  const int last = idx.back();
  std::vector<int> head(idx.begin(), idx.end() - 1);
  Poly out;
  for (const auto& [m, c] : wick_recursive(head, q)) {
    std::vector<int> mono = m;
    mono.push_back(last);
    std::sort(mono.begin(), mono.end());
    out[mono] += c;
  }
  for (std::size_t i = 0; i < head.size(); ++i) {
    std::vector<int> rest = head;
    rest.erase(rest.begin() + static_cast<long>(i));
    for (const auto& [mono, c] : wick_recursive(rest, q)) out[mono] -= q(head[i], last) * c;
  }
  return out;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      std::vector<int> m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      std::sort(m.begin(), m.end());
      out[m] += ca * cb;
    }
  return out;
}

// Brute-force oracle for the integral of a product of Wick-ordered blocks.
double brute_force(const std::vector<std::vector<Eigen::VectorXd>>& blocks, const GaussianSpec& spec) {
  std::vector<Eigen::VectorXd> flat;
  std::vector<std::vector<int>> ids(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (const auto& u : blocks[b]) {
      ids[b].push_back(static_cast<int>(flat.size()));
      flat.push_back(u);
    }
  const Eigen::MatrixXd q = pairing_matrix(spec, flat);
  Poly prod{{{}, 1.0}};
  for (const auto& b : ids) prod = multiply(prod, wick_recursive(b, q));
  double s = 0.0;
  for (const auto& [mono, c] : prod) {
    std::vector<Eigen::VectorXd> us;
    for (int i : mono) us.push_back(flat[static_cast<std::size_t>(i)]);
    s += c * moment_wick(spec, us);
  }
  return s;
}

}  // namespace

TEST_CASE("pairing enumeration counts and order", "[diagrams]") {
  CHECK(enumerate_pairings(0).size() == 1);
  CHECK(enumerate_pairings(1).empty());
  CHECK(enumerate_pairings(5).empty());
  for (int k = 2; k <= 10; k += 2) CHECK(static_cast<long>(enumerate_pairings(k).size()) == double_factorial(k - 1));
  CHECK(enumerate_pairings(6).size() == 15);

  auto two = enumerate_pairings(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].edges() == Edges{{0, 1}});

  auto four = enumerate_pairings(4);
  REQUIRE(four.size() == 3);
  CHECK(four[0].edges() == Edges{{0, 1}, {2, 3}});
  CHECK(four[1].edges() == Edges{{0, 2}, {1, 3}});
  CHECK(four[2].edges() == Edges{{0, 3}, {1, 2}});
  for (const auto& d : four) CHECK(d.complete());

  // Lexicographic and repeatable.
  auto eight = enumerate_pairings(8);
  CHECK(std::is_sorted(eight.begin(), eight.end(),
                       [](const Diagram& a, const Diagram& b) { return a.edges() < b.edges(); }));
  CHECK(eight == enumerate_pairings(8));
  CHECK_THROWS_AS(enumerate_pairings(-1), pathint::invalid_input);
}

TEST_CASE("all diagrams on n vertices", "[diagrams]") {
  // Telephone numbers: involutions of an n-set.
  const std::vector<std::size_t> tel = {1, 1, 2, 4, 10, 26, 76, 232};
  for (int n = 0; n < 8; ++n) CHECK(enumerate_diagrams(n).size() == tel[static_cast<std::size_t>(n)]);
  auto d3 = enumerate_diagrams(3);
  CHECK(std::count_if(d3.begin(), d3.end(), [](const Diagram& d) { return d.rank() == 0; }) == 1);
}

TEST_CASE("diagram validation", "[diagrams]") {
  CHECK_THROWS_AS(Diagram(4, {{0, 1}, {1, 2}}), pathint::invalid_input);
  CHECK_THROWS_AS(Diagram(3, {{0, 3}}), pathint::invalid_input);
  CHECK_THROWS_AS(Diagram(2, {{1, 1}}), pathint::invalid_input);
  CHECK_THROWS_AS(Diagram(4, {{0, 1}}, {0, 0, 1, 1}), pathint::invalid_input);
  Diagram d(5, {{3, 1}});
  CHECK(d.edges() == Edges{{1, 3}});
  CHECK(d.unpaired() == std::vector<int>{0, 2, 4});
  CHECK_FALSE(d.complete());
}

TEST_CASE("wick's theorem: small moments", "[diagrams][wick]") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.5, 0.5, 1.0;
  GaussianSpec spec(sigma);
  Eigen::VectorXd u(2), v(2);
  u << 1.0, -1.0;
  v << 0.5, 2.0;
  CHECK_THAT(moment_wick(spec, {u, v}), WithinAbs((sigma * u).dot(v), 1e-15));
  CHECK(moment_wick(spec, {u, v, u}) == 0.0);
  CHECK(moment_wick(spec, {}) == 1.0);

  GaussianSpec id(Eigen::MatrixXd::Identity(3, 3));
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(3, 0);
  CHECK(moment_wick(id, {e1, e1, e1, e1}) == 3.0);
  CHECK(moment_wick(id, {e1, e1, e1, e1, e1, e1}) == 15.0);

  GaussianSpec shifted(Eigen::VectorXd::Ones(2), sigma);
  CHECK_THROWS_AS(moment_wick(shifted, {u, v}), pathint::invalid_input);
}

TEST_CASE("moment_wick equals the sum of complete diagram values", "[diagrams][property]") {
  RngStream rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rand_int(rng, 1, 4);
    GaussianSpec spec(integer_cov(rng, n));
    for (int k = 0; k <= 8; ++k) {
      std::vector<Eigen::VectorXd> us;
      for (int i = 0; i < k; ++i) us.push_back(integer_vec(rng, n));
      const Eigen::MatrixXd q = k > 0 ? pairing_matrix(spec, us) : Eigen::MatrixXd::Identity(1, 1);
      std::vector<int> which(static_cast<std::size_t>(k));
      std::iota(which.begin(), which.end(), 0);
      double total = 0.0;
      for (const auto& d : enumerate_pairings(k)) {
        auto p = eval_diagram(d, q, which);
        REQUIRE(p.terms().size() <= 1);
        if (!p.terms().empty()) {
          CHECK(p.terms().begin()->first == std::vector<int>(static_cast<std::size_t>(q.rows()), 0));
          total += p.terms().begin()->second;
        }
      }
      CHECK(moment_wick(spec, us) == total);
    }
  }
}

TEST_CASE("moment_wick matches Monte Carlo", "[diagrams][mc]") {
  RngStream rng(7);
  Eigen::MatrixXd sigma(3, 3);
  sigma << 1.0, 0.3, -0.2, 0.3, 0.8, 0.1, -0.2, 0.1, 1.2;
  GaussianSpec spec(sigma);
  for (int k : {2, 4, 6, 8}) {
    std::vector<Eigen::VectorXd> us;
    for (int i = 0; i < k; ++i) us.push_back(Eigen::VectorXd::Random(3));
    constexpr int n = 100000;
    std::vector<double> vals(n);
    for (int s = 0; s < n; ++s) {
      Eigen::VectorXd x = sample(spec, rng);
      double p = 1.0;
      for (const auto& u : us) p *= u.dot(x);
      vals[static_cast<std::size_t>(s)] = p;
    }
    double mean = 0, var = 0;
    for (double v : vals) mean += v;
    mean /= n;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= (n - 1);
    INFO("k = " << k);
    CHECK(std::abs(mean - moment_wick(spec, us)) < 4.0 * std::sqrt(var / n));
  }
}

TEST_CASE("diagram values", "[diagrams]") {
  Eigen::MatrixXd q(4, 4);
  q << 1, 2, 3, 4, 2, 5, 6, 7, 3, 6, 8, 9, 4, 7, 9, 10;
  auto complete = eval_diagram(Diagram(4, {{0, 1}, {2, 3}}), q, {0, 1, 2, 3});
  CHECK(complete.coefficient({0, 0, 0, 0}) == 2.0 * 9.0);
  CHECK(complete.terms().size() == 1);
  auto empty = eval_diagram(Diagram(4, {}), q, {0, 1, 2, 3});
  CHECK(empty.coefficient({1, 1, 1, 1}) == 1.0);
  // Repeated generator labels raise exponents.
  auto rep = eval_diagram(Diagram(3, {{0, 2}}), q, {1, 1, 1});
  CHECK(rep.coefficient({0, 1, 0, 0}) == 5.0);
  CHECK_THROWS_AS(eval_diagram(Diagram(3, {}), q, {0, 1}), pathint::invalid_input);
  CHECK_THROWS_AS(eval_diagram(Diagram(2, {}), q, {0, 4}), pathint::invalid_input);
}

TEST_CASE("wick monomial from signed diagrams matches the recursion", "[diagrams][property]") {
  RngStream rng(3);
  GaussianSpec spec(integer_cov(rng, 3));
  std::vector<Eigen::VectorXd> us;
  for (int i = 0; i < 5; ++i) us.push_back(integer_vec(rng, 3));
  const Eigen::MatrixXd q = pairing_matrix(spec, us);
  // Generators 0..4 with labels {0, 1, 1, 3, 4}.
  const std::vector<int> which = {0, 1, 1, 3, 4};
  auto p = wick_monomial(q, which);
  auto oracle = wick_recursive(which, q);
  for (const auto& [mono, c] : oracle) {
    std::vector<int> e(5, 0);
    for (int i : mono) ++e[static_cast<std::size_t>(i)];
    CHECK(p.coefficient(e) == c);
  }
  // One generator: agrees with the closed form.
  auto w = wick_monomial(Eigen::MatrixXd::Constant(1, 1, 2.0), {0, 0, 0, 0});
  auto closed = wick_order(4, 2.0);
  CHECK(w.terms() == closed.terms());
}

TEST_CASE("generalized wick expectation: named cases", "[diagrams]") {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(4, 4);
  sigma(0, 1) = sigma(1, 0) = 0.3;
  sigma(2, 3) = sigma(3, 2) = -0.4;
  RngStream rng(5);
  std::vector<Eigen::VectorXd> f, g;
  for (int i = 0; i < 3; ++i) {
    f.push_back(Eigen::VectorXd::Random(4));
    g.push_back(Eigen::VectorXd::Random(4));
  }
  auto q = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (sigma * a).dot(b); };

  CHECK_THAT(generalized_wick_expectation({{f[0], f[1]}, {g[0], g[1]}}, sigma),
             WithinRel(q(f[0], g[0]) * q(f[1], g[1]) + q(f[0], g[1]) * q(f[1], g[0]), 1e-13));
  CHECK_THAT(generalized_wick_expectation({{f[0], f[1]}}, sigma), WithinAbs(0.0, 1e-15));
  CHECK_THAT(generalized_wick_expectation({{f[0]}}, sigma), WithinAbs(0.0, 1e-15));
  // :f^n: against :g^m: with n != m vanishes, n = m = 3 gives n! q(f, g)^3.
  CHECK_THAT(generalized_wick_expectation({{f[0], f[0]}, {g[0], g[0], g[0]}}, sigma), WithinAbs(0.0, 1e-15));
  CHECK_THAT(generalized_wick_expectation({{f[0], f[0], f[0]}, {g[0], g[0], g[0]}}, sigma),
             WithinRel(6.0 * std::pow(q(f[0], g[0]), 3), 1e-12));
  CHECK_THAT(generalized_wick_expectation({{f[0], f[0], f[0]}, {g[0], g[0], g[0]}}, sigma),
             WithinRel(wick_inner(3, 3, q(f[0], f[0]), q(g[0], g[0]), q(f[0], g[0])), 1e-12));
  // Three distinct vectors per block: the permanent of q(f_i, g_j).
  std::vector<int> perm = {0, 1, 2};
  double permanent = 0.0;
  do {
    permanent += q(f[0], g[static_cast<std::size_t>(perm[0])]) * q(f[1], g[static_cast<std::size_t>(perm[1])]) *
                 q(f[2], g[static_cast<std::size_t>(perm[2])]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK_THAT(generalized_wick_expectation({{f[0], f[1], f[2]}, {g[0], g[1], g[2]}}, sigma),
             WithinRel(permanent, 1e-12));
  CHECK_THROWS_AS(generalized_wick_expectation(std::vector<std::vector<Eigen::VectorXd>>{}, sigma),
                  pathint::invalid_input);
}

TEST_CASE("generalized diagrams respect blocks", "[diagrams]") {
  auto ds = enumerate_block_pairings({2, 2});
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].edges() == Edges{{0, 2}, {1, 3}});
  CHECK(ds[1].edges() == Edges{{0, 3}, {1, 2}});
  CHECK(enumerate_block_pairings({3, 3}).size() == 6);
  CHECK(enumerate_block_pairings({4}).empty());
  CHECK(enumerate_block_pairings({2, 3}).empty());
}

TEST_CASE("generalized wick expectation matches the brute-force expansion", "[diagrams][property]") {
  RngStream rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rand_int(rng, 1, 3);
    GaussianSpec spec(integer_cov(rng, n));
    const int nblocks = rand_int(rng, 1, 4);
    std::vector<std::vector<Eigen::VectorXd>> blocks(static_cast<std::size_t>(nblocks));
    int total = 0;
    for (auto& b : blocks) {
      const int size = rand_int(rng, 0, 3);
      for (int i = 0; i < size && total < 8; ++i, ++total) b.push_back(integer_vec(rng, n));
    }
    INFO("trial " << trial);
    CHECK(generalized_wick_expectation(blocks, spec.cov()) == brute_force(blocks, spec));
  }
}
