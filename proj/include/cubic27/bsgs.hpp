#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "permutation.hpp"

namespace c27 {

/// Base and strong generating set built by the deterministic Schreier-Sims
/// algorithm. Level i stabilizes base points 0..i-1 and carries an orbit of
/// base point i with coset representatives u with u(base[i]) == point.
class Bsgs {
 public:
  Bsgs(std::size_t degree, const std::vector<Permutation>& generators) : degree_(degree) {
    std::vector<Permutation> gens;
    for (const auto& g : generators)
      if (!g.is_identity()) gens.push_back(g);
    if (gens.empty()) return;
    const std::size_t first = first_moved_point(gens.front());
    levels_.push_back(make_level(first, std::move(gens)));
    schreier_sims();
  }

  std::size_t degree() const noexcept { return degree_; }

  std::uint64_t order() const {
    std::uint64_t n = 1;
    for (const auto& l : levels_) n *= l.orbit.size();
    return n;
  }

  std::vector<std::size_t> base() const {
    std::vector<std::size_t> b;
    for (const auto& l : levels_) b.push_back(l.base_point);
    return b;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) return false;
    auto [residue, level] = sift(g, 0);
    return level == levels_.size() && residue.is_identity();
  }

 private:
  struct Level {
    std::size_t base_point = 0;
    std::vector<Permutation> generators;
    std::vector<std::size_t> orbit;
    std::unordered_map<std::size_t, Permutation> transversal;
  };

  static std::size_t first_moved_point(const Permutation& g) {
    for (std::size_t i = 0; i < g.degree(); ++i)
      if (g(i) != i) return i;
    return 0;
  }

  Level make_level(std::size_t base_point, std::vector<Permutation> gens) const {
    Level l;
    l.base_point = base_point;
    l.generators = std::move(gens);
    rebuild_orbit(l);
    return l;
  }

  void rebuild_orbit(Level& l) const {
    l.orbit.assign(1, l.base_point);
    l.transversal.clear();
    l.transversal.emplace(l.base_point, Permutation(degree_));
    for (std::size_t k = 0; k < l.orbit.size(); ++k) {
      std::size_t pt = l.orbit[k];
      const Permutation u = l.transversal.at(pt);
      for (const auto& s : l.generators) {
        std::size_t img = s(pt);
        if (l.transversal.count(img)) continue;
        l.transversal.emplace(img, s * u);
        l.orbit.push_back(img);
      }
    }
  }

  // Returns the residue and the level at which sifting stopped
  // (levels_.size() when it passed through every level).
  std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t start) const {
    for (std::size_t i = start; i < levels_.size(); ++i) {
      const auto& l = levels_[i];
      auto it = l.transversal.find(g(l.base_point));
      if (it == l.transversal.end()) return {g, i};
      g = it->second.inverse() * g;
    }
    return {g, levels_.size()};
  }

  void schreier_sims() {
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
    while (i >= 0) {
      bool extended = false;
      const auto li = static_cast<std::size_t>(i);
      for (std::size_t k = 0; k < levels_[li].orbit.size() && !extended; ++k) {
        std::size_t pt = levels_[li].orbit[k];
        for (std::size_t s_idx = 0; s_idx < levels_[li].generators.size(); ++s_idx) {
          const auto& lvl = levels_[li];
          const Permutation& s = lvl.generators[s_idx];
          Permutation schreier = lvl.transversal.at(s(pt)).inverse() * s * lvl.transversal.at(pt);
          auto [h, j] = sift(schreier, li + 1);
          if (j == levels_.size() && h.is_identity()) continue;
          if (j == levels_.size()) levels_.push_back(make_level(first_moved_point(h), {}));
          for (std::size_t l = li + 1; l <= j; ++l) {
            levels_[l].generators.push_back(h);
            rebuild_orbit(levels_[l]);
          }
          i = static_cast<std::ptrdiff_t>(j);
          extended = true;
          break;
        }
      }
      if (!extended) --i;
    }
  }

  std::size_t degree_;
  std::vector<Level> levels_;
};

}  // namespace c27
