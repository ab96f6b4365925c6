#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsgs.hpp"
#include "permutation.hpp"

namespace c27 {

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMaterializationCap = 1'000'000;

/// Finitely generated permutation group. Immutable; copies share storage.
///
/// The order always comes from a Schreier-Sims chain. Elements are listed
/// explicitly when the order is at most the materialization cap, which is
/// what the scan-based algorithms (centralizers, normalizers, quotients)
/// require.
class PermGroup {
 public:
  PermGroup() : PermGroup(1, {}) {}

  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            std::size_t cap = kDefaultMaterializationCap)
      : data_(std::make_shared<Data>()) {
    if (degree == 0) throw GroupError("PermGroup: degree must be positive");
    for (const auto& g : generators)
      if (g.degree() != degree) throw GroupError("PermGroup: generator degree mismatch");
    data_->degree = degree;
    data_->generators = std::move(generators);
    data_->bsgs = std::make_shared<Bsgs>(degree, data_->generators);
    data_->order = data_->bsgs->order();
    if (data_->order <= cap) materialize();
  }

  std::size_t degree() const noexcept { return data_->degree; }
  const std::vector<Permutation>& generators() const noexcept { return data_->generators; }
  std::uint64_t order() const noexcept { return data_->order; }
  bool is_materialized() const noexcept { return !data_->elements.empty(); }
  Permutation identity() const { return Permutation(degree()); }

  /// Elements in breadth-first discovery order from the identity.
  const std::vector<Permutation>& elements() const {
    if (!is_materialized()) throw GroupError("PermGroup: group is not materialized");
    return data_->elements;
  }

  bool contains(const Permutation& p) const {
    if (p.degree() != degree()) return false;
    if (is_materialized()) return data_->index.count(p) != 0;
    return data_->bsgs->contains(p);
  }

  std::optional<std::size_t> index_of(const Permutation& p) const {
    auto it = data_->index.find(p);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }

  const Bsgs& bsgs() const { return *data_->bsgs; }

  /// Number of elements found by closure under the generators; equals
  /// order() whenever the group is materialized.
  std::size_t materialized_count() const noexcept { return data_->elements.size(); }

 private:
  struct Data {
    std::size_t degree = 1;
    std::vector<Permutation> generators;
    std::shared_ptr<Bsgs> bsgs;
    std::uint64_t order = 1;
    std::vector<Permutation> elements;
    std::unordered_map<Permutation, std::size_t, PermutationHash> index;
  };

  void materialize() {
    auto& d = *data_;
    d.elements.reserve(d.order);
    d.elements.push_back(Permutation(d.degree));
    d.index.reserve(d.order * 2);
    d.index.emplace(d.elements.front(), 0);
    for (std::size_t k = 0; k < d.elements.size(); ++k) {
      for (const auto& g : d.generators) {
        Permutation next = g * d.elements[k];
        if (d.index.count(next)) continue;
        d.index.emplace(next, d.elements.size());
        d.elements.push_back(std::move(next));
      }
    }
  }

  std::shared_ptr<Data> data_;
};

/// Generates the group spanned by `generators`. An empty generator list
/// requires an explicit degree.
inline PermGroup generate_group(const std::vector<Permutation>& generators, std::size_t degree = 0,
                                std::size_t cap = kDefaultMaterializationCap) {
  if (degree == 0) {
    if (generators.empty()) throw GroupError("generate_group: degree unknown for empty generating set");
    degree = generators.front().degree();
  }
  return PermGroup(degree, generators, cap);
}

namespace detail {
inline void require_materialized(const PermGroup& g, const char* what) {
  if (!g.is_materialized()) throw GroupError(std::string(what) + ": ambient group is not materialized");
}
inline void require_same_degree(const PermGroup& a, const PermGroup& b, const char* what) {
  if (a.degree() != b.degree()) throw GroupError(std::string(what) + ": degree mismatch");
}
inline std::vector<Permutation> nontrivial(std::vector<Permutation> v) {
  std::erase_if(v, [](const Permutation& p) { return p.is_identity(); });
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Builds a subgroup from a list of its elements, picking generators greedily
// so that the generator list stays short.
inline PermGroup subgroup_from_elements(const PermGroup& ambient, const std::vector<Permutation>& members) {
  std::vector<Permutation> gens;
  PermGroup current(ambient.degree(), {});
  for (const auto& m : members) {
    if (current.order() == members.size()) break;
    if (current.contains(m)) continue;
    gens.push_back(m);
    current = PermGroup(ambient.degree(), gens);
  }
  return current;
}
}  // namespace detail

inline bool is_subgroup(const PermGroup& sub, const PermGroup& group) {
  if (sub.degree() != group.degree()) return false;
  return std::all_of(sub.generators().begin(), sub.generators().end(),
                     [&](const Permutation& g) { return group.contains(g); });
}

inline bool same_group(const PermGroup& a, const PermGroup& b) {
  return a.order() == b.order() && is_subgroup(a, b);
}

inline bool is_normal(const PermGroup& sub, const PermGroup& group) {
  if (!is_subgroup(sub, group)) return false;
  for (const auto& g : group.generators()) {
    Permutation gi = g.inverse();
    for (const auto& h : sub.generators())
      if (!sub.contains(g * h * gi)) return false;
  }
  return true;
}

/// Subgroup of elements mapping `subset` onto itself.
inline PermGroup set_stabilizer(const PermGroup& group, const std::vector<int>& subset) {
  detail::require_materialized(group, "set_stabilizer");
  std::vector<bool> in(group.degree(), false);
  for (int x : subset) {
    if (x < 0 || static_cast<std::size_t>(x) >= group.degree())
      throw GroupError("set_stabilizer: point out of range");
    in[x] = true;
  }
  std::vector<Permutation> members;
  for (const auto& g : group.elements()) {
    bool ok = true;
    for (int x : subset)
      if (!in[g(x)]) {
        ok = false;
        break;
      }
    if (ok) members.push_back(g);
  }
  return detail::subgroup_from_elements(group, members);
}

/// Pointwise stabilizer of a single point.
inline PermGroup point_stabilizer(const PermGroup& group, int point) {
  return set_stabilizer(group, {point});
}

/// Z(sub, group): elements of `group` commuting with every element of `sub`.
inline PermGroup centralizer(const PermGroup& group, const PermGroup& sub) {
  detail::require_materialized(group, "centralizer");
  detail::require_same_degree(group, sub, "centralizer");
  std::vector<Permutation> members;
  for (const auto& g : group.elements()) {
    bool ok = std::all_of(sub.generators().begin(), sub.generators().end(),
                          [&](const Permutation& h) { return g.commutes_with(h); });
    if (ok) members.push_back(g);
  }
  return detail::subgroup_from_elements(group, members);
}

/// N(sub, group): elements g of `group` with g sub g^-1 == sub.
inline PermGroup normalizer(const PermGroup& group, const PermGroup& sub) {
  detail::require_materialized(group, "normalizer");
  detail::require_same_degree(group, sub, "normalizer");
  std::vector<Permutation> members;
  for (const auto& g : group.elements()) {
    Permutation gi = g.inverse();
    bool ok = std::all_of(sub.generators().begin(), sub.generators().end(),
                          [&](const Permutation& h) { return sub.contains(g * h * gi); });
    if (ok) members.push_back(g);
  }
  return detail::subgroup_from_elements(group, members);
}

inline PermGroup center(const PermGroup& group) { return centralizer(group, group); }

/// Intersection by element scan over the smaller (materialized) group.
inline PermGroup intersection(const PermGroup& a, const PermGroup& b) {
  detail::require_same_degree(a, b, "intersection");
  const PermGroup& small = a.order() <= b.order() ? a : b;
  const PermGroup& other = a.order() <= b.order() ? b : a;
  detail::require_materialized(small, "intersection");
  std::vector<Permutation> members;
  for (const auto& g : small.elements())
    if (other.contains(g)) members.push_back(g);
  return detail::subgroup_from_elements(small, members);
}

/// Smallest normal subgroup of `group` containing `gens`.
inline PermGroup normal_closure(const PermGroup& group, const std::vector<Permutation>& gens) {
  std::vector<Permutation> current = detail::nontrivial(gens);
  PermGroup h(group.degree(), current);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : group.generators()) {
      Permutation gi = g.inverse();
      for (std::size_t k = 0; k < current.size(); ++k) {
        Permutation c = g * current[k] * gi;
        if (!h.contains(c)) {
          current.push_back(c);
          h = PermGroup(group.degree(), current);
          changed = true;
        }
      }
    }
  }
  return h;
}

inline Permutation commutator(const Permutation& a, const Permutation& b) {
  return a.inverse() * b.inverse() * a * b;
}

inline PermGroup derived_subgroup(const PermGroup& group) {
  std::vector<Permutation> comms;
  const auto& gens = group.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) comms.push_back(commutator(gens[i], gens[j]));
  return normal_closure(group, comms);
}

/// Subgroup generated by all squares g^2.
inline PermGroup squares_subgroup(const PermGroup& group) {
  detail::require_materialized(group, "squares_subgroup");
  std::vector<Permutation> sq;
  std::unordered_map<Permutation, bool, PermutationHash> seen;
  for (const auto& g : group.elements()) {
    Permutation s = g * g;
    if (seen.emplace(s, true).second) sq.push_back(std::move(s));
  }
  return detail::subgroup_from_elements(group, sq);
}

/// Action of a group on the cosets of a normal subgroup.
struct Quotient {
  PermGroup group;                        // acts on the cosets
  std::vector<std::size_t> coset_of;      // element index (in ambient) -> coset index
  std::vector<std::size_t> representative;  // coset index -> ambient element index
};

/// G/N realized as the permutation action of G on the left cosets gN.
inline Quotient quotient(const PermGroup& group, const PermGroup& normal) {
  detail::require_materialized(group, "quotient");
  detail::require_same_degree(group, normal, "quotient");
  if (!is_normal(normal, group)) throw GroupError("quotient: subgroup is not normal");
  detail::require_materialized(normal, "quotient");
  const auto& elems = group.elements();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  Quotient q;
  q.coset_of.assign(elems.size(), kUnset);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (q.coset_of[i] != kUnset) continue;
    std::size_t c = q.representative.size();
    q.representative.push_back(i);
    for (const auto& n : normal.elements()) q.coset_of[*group.index_of(elems[i] * n)] = c;
  }
  const std::size_t index = q.representative.size();
  std::vector<Permutation> gens;
  for (const auto& g : group.generators()) {
    std::vector<std::size_t> img(index);
    for (std::size_t c = 0; c < index; ++c)
      img[c] = q.coset_of[*group.index_of(g * elems[q.representative[c]])];
    gens.push_back(Permutation::from_images(img));
  }
  q.group = PermGroup(std::max<std::size_t>(index, 1), gens);
  return q;
}

inline std::map<std::uint64_t, std::uint64_t> element_order_histogram(const PermGroup& group) {
  detail::require_materialized(group, "element_order_histogram");
  std::map<std::uint64_t, std::uint64_t> h;
  for (const auto& g : group.elements()) ++h[g.order()];
  return h;
}

inline std::uint64_t exponent(const PermGroup& group) {
  std::uint64_t e = 1;
  for (const auto& [ord, count] : element_order_histogram(group)) e = std::lcm(e, ord);
  return e;
}

inline bool has_element_of_order(const PermGroup& group, std::uint64_t order) {
  detail::require_materialized(group, "has_element_of_order");
  return std::any_of(group.elements().begin(), group.elements().end(),
                     [&](const Permutation& g) { return g.order() == order; });
}

inline bool is_abelian(const PermGroup& group) {
  const auto& gens = group.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!gens[i].commutes_with(gens[j])) return false;
  return true;
}

namespace detail {
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) ps.push_back(n);
  return ps;
}
}  // namespace detail

/// Invariant factors d1 | d2 | ... of a finite abelian group given by its
/// element order histogram. The trivial group has no factors.
inline std::vector<std::uint64_t> abelian_invariants(const std::map<std::uint64_t, std::uint64_t>& hist,
                                                     std::uint64_t order) {
  // For each prime p, #{a : a^(p^k) = 1} = p^(s_k); the number of cyclic
  // p-factors of order >= p^k is s_k - s_(k-1).
  std::vector<std::vector<std::uint64_t>> by_prime;
  for (std::uint64_t p : detail::prime_factors(order)) {
    std::vector<std::uint64_t> s{0};
    std::uint64_t pk = 1;
    while (true) {
      pk *= p;
      std::uint64_t count = 0;
      for (const auto& [ord, c] : hist)
        if (pk % ord == 0) count += c;
      std::uint64_t e = 0;
      for (std::uint64_t v = count; v > 1; v /= p) ++e;
      s.push_back(e);
      if (s.back() == s[s.size() - 2]) break;
    }
    // factors_at_least[k] = s_k - s_(k-1)
    std::vector<std::uint64_t> powers;
    std::uint64_t pp = 1;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
      pp *= p;
      std::uint64_t at_least_k = s[k] - s[k - 1];
      std::uint64_t at_least_k1 = s[k + 1] - s[k];
      for (std::uint64_t r = 0; r < at_least_k - at_least_k1; ++r) powers.push_back(pp);
    }
    std::sort(powers.rbegin(), powers.rend());
    by_prime.push_back(powers);
  }
  std::size_t rank = 0;
  for (const auto& v : by_prime) rank = std::max(rank, v.size());
  std::vector<std::uint64_t> factors(rank, 1);
  for (const auto& v : by_prime)
    for (std::size_t k = 0; k < v.size(); ++k) factors[k] *= v[k];
  std::sort(factors.begin(), factors.end());
  return factors;
}

struct GroupFingerprint {
  std::uint64_t order = 1;
  std::uint64_t center_order = 1;
  std::vector<std::uint64_t> abelianization_invariants;
  std::map<std::uint64_t, std::uint64_t> element_order_histogram;
  bool is_abelian = true;

  friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;
};

inline GroupFingerprint fingerprint(const PermGroup& group) {
  detail::require_materialized(group, "fingerprint");
  GroupFingerprint f;
  f.order = group.order();
  f.center_order = center(group).order();
  f.element_order_histogram = element_order_histogram(group);
  f.is_abelian = is_abelian(group);
  PermGroup derived = derived_subgroup(group);
  Quotient ab = quotient(group, derived);
  f.abelianization_invariants =
      abelian_invariants(element_order_histogram(ab.group), ab.group.order());
  return f;
}

inline std::vector<std::vector<int>> orbits(const PermGroup& group) {
  std::vector<int> label(group.degree(), -1);
  std::vector<std::vector<int>> out;
  for (std::size_t start = 0; start < group.degree(); ++start) {
    if (label[start] >= 0) continue;
    std::vector<int> orbit{static_cast<int>(start)};
    label[start] = static_cast<int>(out.size());
    for (std::size_t k = 0; k < orbit.size(); ++k)
      for (const auto& g : group.generators()) {
        int img = g(orbit[k]);
        if (label[img] < 0) {
          label[img] = static_cast<int>(out.size());
          orbit.push_back(img);
        }
      }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

inline bool is_transitive(const PermGroup& group) { return orbits(group).size() == 1; }

/// w G w^-1.
inline PermGroup conjugate(const PermGroup& group, const Permutation& w) {
  Permutation wi = w.inverse();
  std::vector<Permutation> gens;
  for (const auto& g : group.generators()) gens.push_back(w * g * wi);
  return PermGroup(group.degree(), gens);
}

/// Finds w in `ambient` with w a w^-1 == b, scanning the ambient elements.
inline std::optional<Permutation> find_conjugator(const PermGroup& ambient, const PermGroup& a,
                                                  const PermGroup& b) {
  detail::require_materialized(ambient, "find_conjugator");
  if (a.order() != b.order()) return std::nullopt;
  for (const auto& w : ambient.elements()) {
    Permutation wi = w.inverse();
    bool ok = std::all_of(a.generators().begin(), a.generators().end(),
                          [&](const Permutation& g) { return b.contains(w * g * wi); });
    if (ok) return w;
  }
  return std::nullopt;
}

enum class ExtensionVerdict { Split, NonsplitByOrder8, Nonsplit, Inconclusive };

inline std::string to_string(ExtensionVerdict v) {
  switch (v) {
    case ExtensionVerdict::Split: return "split";
    case ExtensionVerdict::NonsplitByOrder8: return "nonsplit_by_order8";
    case ExtensionVerdict::Nonsplit: return "nonsplit";
    case ExtensionVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct ExtensionReport {
  ExtensionVerdict verdict = ExtensionVerdict::Inconclusive;
  std::uint64_t big_order = 0;
  std::uint64_t quotient_order = 0;
  bool big_has_order8 = false;
  bool quotient_has_order8 = false;
  std::optional<PermGroup> complement;
};

/// Decides whether 1 -> <z> -> big -> big/<z> -> 1 splits, for a central
/// involution z.
///
/// A complement to a central C2 exists iff z lies outside the subgroup S
/// generated by all squares: big/S is elementary abelian and any hyperplane
/// missing the image of z pulls back to a complement.
inline ExtensionReport split_central_extension_check(const PermGroup& big, const Permutation& z) {
  if (!big.contains(z)) throw GroupError("split_central_extension_check: element not in group");
  if (z.order() != 2) throw GroupError("split_central_extension_check: element is not an involution");
  for (const auto& g : big.generators())
    if (!g.commutes_with(z)) throw GroupError("split_central_extension_check: element is not central");

  ExtensionReport r;
  r.big_order = big.order();
  if (!big.is_materialized()) return r;

  PermGroup zgroup(big.degree(), {z});
  Quotient q = quotient(big, zgroup);
  r.quotient_order = q.group.order();
  r.big_has_order8 = has_element_of_order(big, 8);
  r.quotient_has_order8 = has_element_of_order(q.group, 8);
  if (r.big_has_order8 && !r.quotient_has_order8) {
    r.verdict = ExtensionVerdict::NonsplitByOrder8;
    return r;
  }

  PermGroup squares = squares_subgroup(big);
  if (squares.contains(z)) {
    r.verdict = ExtensionVerdict::Nonsplit;
    return r;
  }
  // Greedy basis of big/S starting with the image of z; the remaining
  // basis vectors span a hyperplane avoiding it.
  Quotient v = quotient(big, squares);
  const auto& elems = big.elements();
  auto image_of = [&](const Permutation& g) { return v.coset_of[*big.index_of(g)]; };
  std::vector<std::size_t> basis{image_of(z)};
  std::set<std::size_t> span{image_of(big.identity()), image_of(z)};
  std::vector<Permutation> lifts;
  for (std::size_t c = 0; c < v.representative.size(); ++c) {
    if (span.count(c)) continue;
    const Permutation& lift = elems[v.representative[c]];
    lifts.push_back(lift);
    std::set<std::size_t> grown = span;
    for (std::size_t s : span) grown.insert(image_of(lift * elems[v.representative[s]]));
    span = std::move(grown);
  }
  std::vector<Permutation> gens = squares.generators();
  gens.insert(gens.end(), lifts.begin(), lifts.end());
  PermGroup complement(big.degree(), gens);
  if (complement.order() * 2 == big.order() && !complement.contains(z)) {
    r.verdict = ExtensionVerdict::Split;
    r.complement = complement;
  }
  return r;
}

/// Left-regular embedding of a group given by its multiplication table:
/// g -> sigma_g with g * g_i = g_{sigma_g(i)}. `table[i][j]` is the index of
/// g_i * g_j.
inline PermGroup diagonal_quotient_stabilizer(const std::vector<std::vector<int>>& table) {
  const std::size_t n = table.size();
  if (n == 0) throw GroupError("diagonal_quotient_stabilizer: empty table");
  for (const auto& row : table) {
    if (row.size() != n) throw GroupError("diagonal_quotient_stabilizer: table is not square");
    std::vector<bool> seen(n, false);
    for (int v : row) {
      if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v])
        throw GroupError("diagonal_quotient_stabilizer: row is not a permutation");
      seen[v] = true;
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      ok = table[e][i] == static_cast<int>(i) && table[i][e] == static_cast<int>(i);
    if (ok) identity = e;
  }
  if (!identity) throw GroupError("diagonal_quotient_stabilizer: no identity element");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw GroupError("diagonal_quotient_stabilizer: table is not associative");
  // Latin rows plus identity and associativity give inverses.
  std::vector<Permutation> gens;
  for (std::size_t g = 0; g < n; ++g) gens.push_back(Permutation::from_images(table[g]));
  return PermGroup(n, detail::nontrivial(gens));
}

/// Multiplication table in the group's element order.
inline std::vector<std::vector<int>> multiplication_table(const PermGroup& group) {
  detail::require_materialized(group, "multiplication_table");
  const auto& e = group.elements();
  std::vector<std::vector<int>> t(e.size(), std::vector<int>(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) t[i][j] = static_cast<int>(*group.index_of(e[i] * e[j]));
  return t;
}

/// Direct product acting on the disjoint union of the factors' domains.
inline PermGroup direct_product(const std::vector<PermGroup>& factors) {
  std::size_t degree = 0;
  for (const auto& f : factors) degree += f.degree();
  std::vector<Permutation> gens;
  std::size_t offset = 0;
  for (const auto& f : factors) {
    for (const auto& g : f.generators()) {
      std::vector<std::size_t> img(degree);
      std::iota(img.begin(), img.end(), std::size_t{0});
      for (std::size_t i = 0; i < f.degree(); ++i) img[offset + i] = offset + g(i);
      gens.push_back(Permutation::from_images(img));
    }
    offset += f.degree();
  }
  return PermGroup(degree, gens);
}

inline PermGroup symmetric_group(std::size_t n) {
  if (n < 2) return PermGroup(std::max<std::size_t>(n, 1), {});
  std::vector<int> cycle(n);
  std::iota(cycle.begin(), cycle.end(), 0);
  return PermGroup(n, {Permutation::from_cycles(n, {{0, 1}}), Permutation::from_cycles(n, {cycle})});
}

inline PermGroup cyclic_group(std::size_t n) {
  if (n < 2) return PermGroup(1, {});
  std::vector<int> cycle(n);
  std::iota(cycle.begin(), cycle.end(), 0);
  return PermGroup(n, {Permutation::from_cycles(n, {cycle})});
}

}  // namespace c27
