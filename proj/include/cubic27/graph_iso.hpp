#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace c27 {

/// Simple undirected graph on at most 64 vertices, rows stored as bitmasks.
class BitGraph {
 public:
  BitGraph() = default;
  explicit BitGraph(std::size_t n) : rows_(n, 0) {
    if (n > 64) throw std::invalid_argument("BitGraph: at most 64 vertices");
  }

  static BitGraph from_matrix(const std::vector<std::vector<bool>>& m) {
    BitGraph g(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].size() != m.size()) throw std::invalid_argument("BitGraph: matrix is not square");
      for (std::size_t j = 0; j < m.size(); ++j)
        if (m[i][j]) {
          if (i == j) throw std::invalid_argument("BitGraph: loops are not allowed");
          if (!m[j][i]) throw std::invalid_argument("BitGraph: matrix is not symmetric");
          g.rows_[i] |= bit(j);
        }
    }
    return g;
  }

  std::size_t size() const noexcept { return rows_.size(); }
  void add_edge(std::size_t i, std::size_t j) {
    rows_[i] |= bit(j);
    rows_[j] |= bit(i);
  }
  bool adjacent(std::size_t i, std::size_t j) const { return (rows_[i] >> j) & 1U; }
  std::uint64_t row(std::size_t i) const { return rows_[i]; }
  int degree(std::size_t i) const { return std::popcount(rows_[i]); }
  std::uint64_t all() const { return size() == 64 ? ~0ULL : (1ULL << size()) - 1; }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (auto r : rows_) e += static_cast<std::size_t>(std::popcount(r));
    return e / 2;
  }

  std::vector<std::vector<bool>> to_matrix() const {
    std::vector<std::vector<bool>> m(size(), std::vector<bool>(size(), false));
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) m[i][j] = adjacent(i, j);
    return m;
  }

  static std::uint64_t bit(std::size_t i) { return 1ULL << i; }

 private:
  std::vector<std::uint64_t> rows_;
};

struct SrgParameters {
  int n = 0, k = 0, lambda = 0, mu = 0;
  friend bool operator==(const SrgParameters&, const SrgParameters&) = default;
};

/// Parameters if the graph is strongly regular, nullopt otherwise.
inline std::optional<SrgParameters> strongly_regular_parameters(const BitGraph& g) {
  if (g.size() < 2) return std::nullopt;
  SrgParameters p{static_cast<int>(g.size()), g.degree(0), -1, -1};
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.degree(i) != p.k) return std::nullopt;
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      int common = std::popcount(g.row(i) & g.row(j));
      int& slot = g.adjacent(i, j) ? p.lambda : p.mu;
      if (slot < 0) slot = common;
      if (slot != common) return std::nullopt;
    }
  }
  return p;
}

/// Backtracking isomorphism search from `from` onto `to` with forward
/// checking. Vertices of `from` are assigned in increasing order and
/// candidates are tried in increasing order, so maps are visited in
/// lexicographic order of their image lists. `visit` returns false to stop.
/// `fixed` optionally pins images of some vertices (-1 = free).
inline void for_each_isomorphism(const BitGraph& from, const BitGraph& to,
                                 const std::function<bool(const std::vector<int>&)>& visit,
                                 const std::vector<int>& fixed = {}) {
  const std::size_t n = from.size();
  if (to.size() != n) return;
  std::vector<int> deg_count_from(n + 1, 0), deg_count_to(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++deg_count_from[from.degree(i)];
    ++deg_count_to[to.degree(i)];
  }
  if (deg_count_from != deg_count_to) return;

  std::vector<std::uint64_t> domain(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      if (from.degree(v) == to.degree(w)) domain[v] |= BitGraph::bit(w);
  for (std::size_t v = 0; v < fixed.size() && v < n; ++v)
    if (fixed[v] >= 0) domain[v] &= BitGraph::bit(static_cast<std::size_t>(fixed[v]));

  std::vector<int> image(n, -1);
  bool stop = false;
  std::function<void(std::size_t, std::vector<std::uint64_t>&)> extend =
      [&](std::size_t v, std::vector<std::uint64_t>& dom) {
        if (v == n) {
          stop = !visit(image);
          return;
        }
        std::uint64_t cand = dom[v];
        while (cand && !stop) {
          int w = std::countr_zero(cand);
          cand &= cand - 1;
          std::vector<std::uint64_t> next = dom;
          bool ok = true;
          const std::uint64_t nbrs = to.row(w);
          const std::uint64_t non_nbrs = to.all() & ~nbrs & ~BitGraph::bit(w);
          for (std::size_t u = v + 1; u < n && ok; ++u) {
            next[u] &= from.adjacent(u, v) ? nbrs : non_nbrs;
            ok = next[u] != 0;
          }
          if (!ok) continue;
          image[v] = w;
          extend(v + 1, next);
          image[v] = -1;
        }
      };
  extend(0, domain);
}

inline std::optional<std::vector<int>> first_isomorphism(const BitGraph& from, const BitGraph& to,
                                                         const std::vector<int>& fixed = {}) {
  std::optional<std::vector<int>> found;
  for_each_isomorphism(
      from, to,
      [&](const std::vector<int>& m) {
        found = m;
        return false;
      },
      fixed);
  return found;
}

}  // namespace c27
