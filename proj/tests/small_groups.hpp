#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cubic27/perm_group.hpp"

// Concrete small groups as Cayley tables, for tests.
namespace small {

using c27::Permutation;

using Images = std::vector<int>;

inline Images compose(const Images& p, const Images& q) {  // p after q
  Images r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

// Closure by breadth-first search over raw image vectors.
inline std::set<Images> brute_closure(const std::vector<Images>& gens, std::size_t n) {
  Images id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Images> seen{id};
  std::vector<Images> queue{id};
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (const auto& g : gens) {
      Images x = compose(g, queue[k]);
      if (seen.insert(x).second) queue.push_back(x);
    }
  return seen;
}

inline Images random_perm(std::size_t n, std::mt19937& rng) {
  Images p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Permutation as_perm(const Images& v) { return Permutation::from_images(v); }

// A finite group given concretely, turned into a Cayley table.
template <typename T>
inline std::vector<std::vector<int>> cayley_table(const std::vector<T>& elems, std::function<T(const T&, const T&)> mul) {
  std::vector<std::vector<int>> t(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      T p = mul(elems[i], elems[j]);
      t[i][j] = static_cast<int>(std::find(elems.begin(), elems.end(), p) - elems.begin());
    }
  return t;
}

inline std::vector<std::vector<int>> abelian_table(const std::vector<int>& moduli) {
  std::vector<std::vector<int>> elems{{}};
  for (int m : moduli) {
    std::vector<std::vector<int>> next;
    for (const auto& e : elems)
      for (int a = 0; a < m; ++a) {
        auto x = e;
        x.push_back(a);
        next.push_back(x);
      }
    elems = next;
  }
  return cayley_table<std::vector<int>>(elems, [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + b[i]) % moduli[i];
    return r;
  });
}

// C_n semidirect C_m where the generator of C_m acts by inversion.
inline std::vector<std::vector<int>> inversion_semidirect(int n, int m) {
  std::vector<std::pair<int, int>> elems;
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < m; ++s) elems.push_back({r, s});
  return cayley_table<std::pair<int, int>>(elems, [&](const auto& a, const auto& b) {
    int r = (a.first + (a.second % 2 ? n - b.first : b.first)) % n;
    return std::pair<int, int>{r, (a.second + b.second) % m};
  });
}

inline std::vector<std::vector<int>> quaternion_table() {
  using Q = std::array<int, 4>;
  std::vector<Q> elems;
  for (int k = 0; k < 4; ++k)
    for (int s : {1, -1}) {
      Q q{0, 0, 0, 0};
      q[k] = s;
      elems.push_back(q);
    }
  return cayley_table<Q>(elems, [](const Q& a, const Q& b) {
    return Q{a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
             a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
  });
}

inline std::vector<std::vector<int>> permutation_table(std::size_t n, bool even_only) {
  std::vector<Images> elems;
  Images p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
    if (!even_only || inv % 2 == 0) elems.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return cayley_table<Images>(elems, compose);
}

struct TableStats {
  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t center = 0;
  bool abelian = true;
};

inline TableStats table_stats(const std::vector<std::vector<int>>& t) {
  const int n = static_cast<int>(t.size());
  int e = 0;
  auto is_identity = [&](int x) {
    for (int i = 0; i < n; ++i)
      if (t[x][i] != i) return false;
    return true;
  };
  while (!is_identity(e)) ++e;
  TableStats s;
  for (int g = 0; g < n; ++g) {
    std::uint64_t k = 1;
    for (int x = g; x != e; x = t[x][g]) ++k;
    ++s.hist[k];
    bool central = true;
    for (int h = 0; h < n; ++h) central = central && t[g][h] == t[h][g];
    s.center += central;
    s.abelian = s.abelian && central;
  }
  return s;
}

inline std::map<std::string, std::vector<std::vector<int>>> small_groups() {
  return {
      {"C1", abelian_table({1})},          {"C2", abelian_table({2})},          {"C3", abelian_table({3})},
      {"C4", abelian_table({4})},          {"C2xC2", abelian_table({2, 2})},    {"C5", abelian_table({5})},
      {"C6", abelian_table({6})},          {"S3", permutation_table(3, false)}, {"C7", abelian_table({7})},
      {"C8", abelian_table({8})},          {"C4xC2", abelian_table({4, 2})},    {"C2^3", abelian_table({2, 2, 2})},
      {"D4", inversion_semidirect(4, 2)},  {"Q8", quaternion_table()},          {"C9", abelian_table({9})},
      {"C3xC3", abelian_table({3, 3})},    {"C10", abelian_table({10})},        {"D5", inversion_semidirect(5, 2)},
      {"C11", abelian_table({11})},        {"C12", abelian_table({12})},        {"C6xC2", abelian_table({6, 2})},
      {"D6", inversion_semidirect(6, 2)},  {"A4", permutation_table(4, true)},  {"Dic3", inversion_semidirect(3, 4)},
  };
}

}  // namespace small
