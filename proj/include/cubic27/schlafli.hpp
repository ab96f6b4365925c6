#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph_iso.hpp"
#include "perm_group.hpp"

namespace c27::schlafli {

inline constexpr int kLineCount = 27;

/// Classical names of the 27 lines: E1..E6, G1..G6, F12..F56.
struct LineLabel {
  enum class Kind { E, G, F };
  Kind kind = Kind::E;
  int i = 1;
  int j = 0;  // second index, F only

  std::string to_string() const {
    switch (kind) {
      case Kind::E: return "E" + std::to_string(i);
      case Kind::G: return "G" + std::to_string(i);
      case Kind::F: return "F" + std::to_string(i) + std::to_string(j);
    }
    return {};
  }

  friend bool operator==(const LineLabel&, const LineLabel&) = default;
};

/// Canonical vertex order: E1..E6 = 0..5, G1..G6 = 6..11, then F_ij in
/// lexicographic order = 12..26.
inline const std::array<LineLabel, kLineCount>& all_labels() {
  static const auto labels = [] {
    std::array<LineLabel, kLineCount> out{};
    int k = 0;
    for (int i = 1; i <= 6; ++i) out[k++] = {LineLabel::Kind::E, i, 0};
    for (int i = 1; i <= 6; ++i) out[k++] = {LineLabel::Kind::G, i, 0};
    for (int i = 1; i <= 6; ++i)
      for (int j = i + 1; j <= 6; ++j) out[k++] = {LineLabel::Kind::F, i, j};
    return out;
  }();
  return labels;
}

inline int index_of(const LineLabel& label) {
  const auto& all = all_labels();
  for (int k = 0; k < kLineCount; ++k)
    if (all[k] == label) return k;
  throw std::invalid_argument("schlafli: unknown label");
}

inline LineLabel parse_label(const std::string& s) {
  auto digit = [&](std::size_t pos) {
    if (pos >= s.size() || s[pos] < '1' || s[pos] > '6') throw std::invalid_argument("schlafli: bad label " + s);
    return s[pos] - '0';
  };
  if (s.size() == 2 && s[0] == 'E') return {LineLabel::Kind::E, digit(1), 0};
  if (s.size() == 2 && s[0] == 'G') return {LineLabel::Kind::G, digit(1), 0};
  if (s.size() == 3 && s[0] == 'F') {
    int a = digit(1), b = digit(2);
    if (a >= b) throw std::invalid_argument("schlafli: bad label " + s);
    return {LineLabel::Kind::F, a, b};
  }
  throw std::invalid_argument("schlafli: bad label " + s);
}

inline int index_of(const std::string& s) { return index_of(parse_label(s)); }

inline bool labels_meet(const LineLabel& a, const LineLabel& b) {
  using K = LineLabel::Kind;
  auto in = [](int x, const LineLabel& f) { return x == f.i || x == f.j; };
  if (a == b) return false;
  if (a.kind == K::F && b.kind == K::F) return a.i != b.i && a.i != b.j && a.j != b.i && a.j != b.j;
  if (a.kind == K::F) return labels_meet(b, a);
  if (b.kind == K::F) return in(a.i, b);
  if (a.kind != b.kind) return a.i != b.i;
  return false;
}

/// The Schläfli graph, srg(27, 10, 1, 5), on the canonical vertex order.
inline const BitGraph& canonical_incidence() {
  static const BitGraph g = [] {
    BitGraph out(kLineCount);
    const auto& all = all_labels();
    for (int a = 0; a < kLineCount; ++a)
      for (int b = a + 1; b < kLineCount; ++b)
        if (labels_meet(all[a], all[b])) out.add_edge(a, b);
    return out;
  }();
  return g;
}

/// All triangles of a graph, each as an ascending triple.
inline std::vector<std::array<int, 3>> triangles(const BitGraph& g) {
  std::vector<std::array<int, 3>> out;
  const int n = static_cast<int>(g.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!g.adjacent(a, b)) continue;
      for (int c = b + 1; c < n; ++c)
        if (g.adjacent(a, c) && g.adjacent(b, c)) out.push_back({a, b, c});
    }
  return out;
}

/// The 45 tritangent triples (triangles of the Schläfli graph).
inline const std::vector<std::array<int, 3>>& tritangent_triples() {
  static const auto t = triangles(canonical_incidence());
  return t;
}

namespace detail {
inline Permutation relabel_indices(const std::array<int, 7>& sigma) {
  // sigma[1..6] is a permutation of {1..6}
  std::vector<int> img(kLineCount);
  const auto& all = all_labels();
  for (int k = 0; k < kLineCount; ++k) {
    LineLabel l = all[k];
    l.i = sigma[l.i];
    if (l.kind == LineLabel::Kind::F) {
      l.j = sigma[l.j];
      if (l.i > l.j) std::swap(l.i, l.j);
    }
    img[k] = index_of(l);
  }
  return Permutation::from_images(img);
}
}  // namespace detail

/// Generators of W(E6) acting on the canonical labels: the images of the
/// symmetric group on the six indices, plus the lexicographically first
/// graph automorphism sending E1 to F12.
inline std::vector<Permutation> weyl_e6_generators() {
  std::vector<Permutation> gens;
  gens.push_back(detail::relabel_indices({0, 2, 1, 3, 4, 5, 6}));
  gens.push_back(detail::relabel_indices({0, 2, 3, 4, 5, 6, 1}));
  std::vector<int> fixed(kLineCount, -1);
  fixed[index_of("E1")] = index_of("F12");
  auto extra = first_isomorphism(canonical_incidence(), canonical_incidence(), fixed);
  if (!extra) throw std::logic_error("schlafli: no automorphism moving E1 to F12");
  gens.push_back(Permutation::from_images(*extra));
  std::sort(gens.begin(), gens.end());
  return gens;
}

/// W(E6) as the automorphism group of the Schläfli graph; order 51840.
inline const PermGroup& weyl_e6() {
  static const PermGroup w = [] {
    PermGroup g(kLineCount, weyl_e6_generators());
    if (g.order() != 51840) throw std::logic_error("schlafli: generated group has wrong order");
    return g;
  }();
  return w;
}

/// Counts all automorphisms of a graph by exhaustive backtracking.
inline std::uint64_t count_automorphisms(const BitGraph& g) {
  std::uint64_t n = 0;
  for_each_isomorphism(g, g, [&](const std::vector<int>&) {
    ++n;
    return true;
  });
  return n;
}

inline bool is_automorphism(const BitGraph& g, const Permutation& p) {
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b)
      if (g.adjacent(a, b) != g.adjacent(p(a), p(b))) return false;
  return true;
}

class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bijection from computed-line slots to canonical vertices.
struct SchlafliLabeling {
  std::vector<int> slot_to_label;  // size 27
  std::vector<int> label_to_slot;

  /// Expresses a permutation of slots as a permutation of canonical labels.
  Permutation to_labels(const Permutation& on_slots) const {
    std::vector<int> img(kLineCount);
    for (int l = 0; l < kLineCount; ++l) img[l] = slot_to_label[on_slots(label_to_slot[l])];
    return Permutation::from_images(img);
  }

  Permutation to_slots(const Permutation& on_labels) const {
    std::vector<int> img(kLineCount);
    for (int s = 0; s < kLineCount; ++s) img[s] = label_to_slot[on_labels(slot_to_label[s])];
    return Permutation::from_images(img);
  }

  std::string label_of_slot(int slot) const { return all_labels()[slot_to_label[slot]].to_string(); }
};

/// Labels a computed incidence graph by the lexicographically first
/// isomorphism onto the canonical model.
inline SchlafliLabeling label_lines(const BitGraph& computed) {
  if (computed.size() != static_cast<std::size_t>(kLineCount))
    throw LabelingError("label_lines: expected 27 vertices");
  auto srg = strongly_regular_parameters(computed);
  if (!srg || !(*srg == SrgParameters{27, 10, 1, 5}))
    throw LabelingError("label_lines: incidence graph is not srg(27,10,1,5)");
  auto iso = first_isomorphism(computed, canonical_incidence());
  if (!iso) throw LabelingError("label_lines: graph is not isomorphic to the Schläfli graph");
  SchlafliLabeling lab;
  lab.slot_to_label = *iso;
  lab.label_to_slot.assign(kLineCount, -1);
  for (int s = 0; s < kLineCount; ++s) lab.label_to_slot[lab.slot_to_label[s]] = s;
  return lab;
}

}  // namespace c27::schlafli
