#pragma once

#include <bit>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pathint/core/error.hpp"
#include "pathint/gaussian/measure.hpp"

namespace pathint::gaussian {

/// Feynman diagram on vertices 0..n-1: disjoint edges, the remaining vertices
/// unpaired. With `blocks` (block id per vertex) no edge may join two vertices
/// of the same block.
class Diagram {
 public:
  Diagram(int vertices, std::vector<std::pair<int, int>> edges, std::vector<int> blocks = {})
      : n_(vertices), edges_(std::move(edges)), blocks_(std::move(blocks)) {
    if (n_ < 0) throw invalid_input("Diagram: negative vertex count");
    if (!blocks_.empty() && static_cast<int>(blocks_.size()) != n_)
      throw invalid_input("Diagram: block ids must cover every vertex");
    std::vector<bool> used(static_cast<std::size_t>(n_), false);
    for (auto& [i, j] : edges_) {
      if (i > j) std::swap(i, j);
      if (i < 0 || j >= n_ || i == j) throw invalid_input("Diagram: edge endpoint out of range");
      if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)])
        throw invalid_input("Diagram: edges are not disjoint");
      used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
      if (!blocks_.empty() && blocks_[static_cast<std::size_t>(i)] == blocks_[static_cast<std::size_t>(j)])
        throw invalid_input("Diagram: edge inside a block");
    }
    for (int v = 0; v < n_; ++v)
      if (!used[static_cast<std::size_t>(v)]) unpaired_.push_back(v);
  }

  [[nodiscard]] int vertices() const noexcept { return n_; }
  [[nodiscard]] int rank() const noexcept { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  [[nodiscard]] const std::vector<int>& unpaired() const noexcept { return unpaired_; }
  [[nodiscard]] const std::vector<int>& blocks() const noexcept { return blocks_; }
  [[nodiscard]] bool complete() const noexcept { return unpaired_.empty(); }

  bool operator==(const Diagram&) const = default;

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> blocks_;
  std::vector<int> unpaired_;
};

namespace detail {

inline void pairings_rec(std::vector<int>& free, std::vector<std::pair<int, int>>& acc, const std::vector<int>& blocks,
                         int n, std::vector<Diagram>& out) {
  if (free.empty()) {
    out.emplace_back(n, acc, blocks);
    return;
  }
  const int first = free.front();
  for (std::size_t k = 1; k < free.size(); ++k) {
    const int partner = free[k];
    if (!blocks.empty() && blocks[static_cast<std::size_t>(first)] == blocks[static_cast<std::size_t>(partner)])
      continue;
    std::vector<int> rest;
    rest.reserve(free.size() - 2);
    for (std::size_t m = 1; m < free.size(); ++m)
      if (m != k) rest.push_back(free[m]);
    acc.emplace_back(first, partner);
    pairings_rec(rest, acc, blocks, n, out);
    acc.pop_back();
  }
}

inline void partial_rec(std::size_t pos, std::vector<int>& partner, int n, std::vector<Diagram>& out) {
  while (pos < partner.size() && partner[pos] != -2) ++pos;
  if (pos == partner.size()) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v)
      if (partner[static_cast<std::size_t>(v)] > v) edges.emplace_back(v, partner[static_cast<std::size_t>(v)]);
    out.emplace_back(n, std::move(edges));
    return;
  }
  partner[pos] = -1;
  partial_rec(pos + 1, partner, n, out);
  for (std::size_t k = pos + 1; k < partner.size(); ++k) {
    if (partner[k] != -2) continue;
    partner[pos] = static_cast<int>(k);
    partner[k] = static_cast<int>(pos);
    partial_rec(pos + 1, partner, n, out);
    partner[k] = -2;
  }
  partner[pos] = -2;
}

}  // namespace detail

/// All perfect matchings of {0..k-1}, (k-1)!! of them for even k, none for odd
/// k. Order: the smallest unmatched vertex is paired first, partners in
/// increasing order (lexicographic in the edge lists).
inline std::vector<Diagram> enumerate_pairings(int k) {
  if (k < 0) throw invalid_input("enumerate_pairings: k must be >= 0");
  std::vector<Diagram> out;
  if (k % 2 != 0) return out;
  std::vector<int> free(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) free[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<int, int>> acc;
  detail::pairings_rec(free, acc, {}, k, out);
  return out;
}

/// Complete generalized diagrams: perfect matchings of the concatenated
/// blocks with no edge inside a block.
inline std::vector<Diagram> enumerate_block_pairings(const std::vector<int>& block_sizes) {
  std::vector<int> blocks;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] < 0) throw invalid_input("enumerate_block_pairings: negative block size");
    blocks.insert(blocks.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<int>(b));
  }
  const int n = static_cast<int>(blocks.size());
  std::vector<Diagram> out;
  if (n % 2 != 0) return out;
  std::vector<int> free(blocks.size());
  for (int i = 0; i < n; ++i) free[static_cast<std::size_t>(i)] = i;
  std::vector<std::pair<int, int>> acc;
  detail::pairings_rec(free, acc, blocks, n, out);
  return out;
}

/// All diagrams (complete or not) on n vertices, including the empty one.
inline std::vector<Diagram> enumerate_diagrams(int n) {
  if (n < 0) throw invalid_input("enumerate_diagrams: n must be >= 0");
  std::vector<Diagram> out;
  std::vector<int> partner(static_cast<std::size_t>(n), -2);
  detail::partial_rec(0, partner, n, out);
  return out;
}

/// Pairing matrix q_ij = <Sigma u_i, u_j>.
inline Eigen::MatrixXd pairing_matrix(const GaussianSpec& spec, const std::vector<Eigen::VectorXd>& us) {
  const auto k = static_cast<Eigen::Index>(us.size());
  Eigen::MatrixXd q(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (us[static_cast<std::size_t>(i)].size() != spec.dim()) throw invalid_input("pairing_matrix: dimension mismatch");
    for (Eigen::Index j = 0; j <= i; ++j)
      q(i, j) = q(j, i) = spec.pairing(us[static_cast<std::size_t>(i)], us[static_cast<std::size_t>(j)]);
  }
  return q;
}

namespace detail {

// Sum over perfect matchings of the vertices in `mask` of the product of
// q(label_i, label_j), skipping pairs inside a block. Memoized on the mask.
struct Hafnian {
  const Eigen::MatrixXd& q;
  const std::vector<int>& labels;
  const std::vector<int>& blocks;
  std::unordered_map<std::uint64_t, double> memo;

  double operator()(std::uint64_t mask) {
    if (mask == 0) return 1.0;
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const int first = std::countr_zero(mask);
    const std::uint64_t rest = mask & ~(std::uint64_t{1} << first);
    double s = 0.0;
    for (std::uint64_t m = rest; m != 0; m &= m - 1) {
      const int j = std::countr_zero(m);
      if (!blocks.empty() && blocks[static_cast<std::size_t>(first)] == blocks[static_cast<std::size_t>(j)]) continue;
      const double e = q(labels[static_cast<std::size_t>(first)], labels[static_cast<std::size_t>(j)]);
      if (e == 0.0) continue;
      s += e * (*this)(rest & ~(std::uint64_t{1} << j));
    }
    memo.emplace(mask, s);
    return s;
  }
};

inline double hafnian(const Eigen::MatrixXd& q, const std::vector<int>& labels, const std::vector<int>& blocks) {
  if (labels.size() % 2 != 0) return 0.0;
  if (labels.size() > 62) throw unsupported_error("hafnian: too many vertices");
  for (int l : labels)
    if (l < 0 || l >= q.rows()) throw invalid_input("hafnian: generator label out of range");
  Hafnian h{q, labels, blocks, {}};
  const std::uint64_t all = labels.empty() ? 0 : (~std::uint64_t{0} >> (64 - labels.size()));
  return h(all);
}

}  // namespace detail

/// Centered Gaussian moment of the monomial prod_i f_{labels_i}, where q is
/// the pairing matrix of the generators f: the sum over perfect matchings of
/// the product of pairings (Wick's theorem).
inline double pairing_moment(const Eigen::MatrixXd& q, const std::vector<int>& labels) {
  return detail::hafnian(q, labels, {});
}

/// Wick's theorem: integral of prod_i <u_i, x> against a centered Gaussian.
inline double moment_wick(const GaussianSpec& spec, const std::vector<Eigen::VectorXd>& us) {
  if (!spec.centered()) throw invalid_input("moment_wick: the measure must be centered");
  std::vector<int> labels(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) labels[i] = static_cast<int>(i);
  return pairing_moment(pairing_matrix(spec, us), labels);
}

}  // namespace pathint::gaussian
