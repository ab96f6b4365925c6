#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "cubic27/named_groups.hpp"
#include "cubic27/perm_group.hpp"
#include "cubic27/schlafli.hpp"
#include "small_groups.hpp"

using namespace c27;
using namespace small;

TEST(Permutation, CompositionAppliesRightFactorFirst) {
  auto p = Permutation::from_cycles(3, {{0, 1}});
  auto q = Permutation::from_cycles(3, {{1, 2}});
  EXPECT_EQ((p * q)(1), 2);
  EXPECT_EQ((p * q)(0), 1);
  EXPECT_EQ((p * q)(2), 0);
}

TEST(Permutation, GroupLawsOnRandomElements) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_perm(9, rng), b = random_perm(9, rng), c = random_perm(9, rng);
    Permutation p = as_perm(a), q = as_perm(b), r = as_perm(c);
    EXPECT_EQ((p * q) * r, p * (q * r));
    EXPECT_EQ((p * q).inverse(), q.inverse() * p.inverse());
    EXPECT_EQ(p * q, as_perm(compose(a, b)));
    EXPECT_TRUE((p * p.inverse()).is_identity());
    EXPECT_TRUE(p.pow(p.order()).is_identity());
    EXPECT_EQ(Permutation::from_cycles(9, p.cycles()), p);
  }
}

TEST(Permutation, RejectsNonBijections) {
  EXPECT_THROW(Permutation::from_images(std::vector<int>{0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation::from_images(std::vector<int>{0, 3, 1}), std::invalid_argument);
}

TEST(PermGroup, SpecExamples) {
  EXPECT_EQ(generate_group({}, 27).order(), 1u);
  PermGroup s3 = generate_group({Permutation::from_cycles(3, {{0, 1}}), Permutation::from_cycles(3, {{0, 1, 2}})});
  EXPECT_EQ(s3.order(), 6u);
  EXPECT_EQ(set_stabilizer(s3, {0}).order(), 2u);
  EXPECT_EQ(set_stabilizer(s3, {0, 1, 2}).order(), 6u);
  EXPECT_EQ(centralizer(s3, PermGroup(3, {})).order(), 6u);
}

TEST(PermGroup, OrderMatchesBruteForceClosure) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 4 + trial % 4;
    std::vector<Images> gens;
    std::vector<Permutation> pg;
    int count = 1 + trial % 3;
    for (int k = 0; k < count; ++k) {
      Images g = random_perm(n, rng);
      if (trial % 5 == 0) {  // small subgroups too
        g.assign(n, 0);
        std::iota(g.begin(), g.end(), 0);
        std::swap(g[k % n], g[(k + 1) % n]);
      }
      gens.push_back(g);
      pg.push_back(as_perm(g));
    }
    auto oracle = brute_closure(gens, n);
    PermGroup g(n, pg);
    PermGroup chain_only(n, pg, 0);
    EXPECT_EQ(g.order(), oracle.size());
    EXPECT_EQ(chain_only.order(), oracle.size());
    EXPECT_EQ(g.materialized_count(), oracle.size());
    for (const auto& x : oracle) EXPECT_TRUE(chain_only.contains(as_perm(x)));
  }
}

TEST(PermGroup, SymmetricAndCyclicOrders) {
  std::uint64_t f = 1;
  for (std::size_t n = 1; n <= 8; ++n) {
    f *= n;
    EXPECT_EQ(symmetric_group(n).order(), f);
    EXPECT_EQ(cyclic_group(n).order(), n);
  }
}

TEST(PermGroup, StabilizersCentralizersNormalizersByDefinition) {
  std::mt19937 rng(5);
  PermGroup s5 = symmetric_group(5);
  for (int trial = 0; trial < 12; ++trial) {
    PermGroup h(5, {as_perm(random_perm(5, rng))});
    PermGroup z = centralizer(s5, h), nm = normalizer(s5, h);
    std::size_t zc = 0, nc = 0;
    for (const auto& g : s5.elements()) {
      bool commutes = std::all_of(h.elements().begin(), h.elements().end(),
                                  [&](const Permutation& x) { return g * x == x * g; });
      bool normalizes = std::all_of(h.elements().begin(), h.elements().end(),
                                    [&](const Permutation& x) { return h.contains(g * x * g.inverse()); });
      zc += commutes;
      nc += normalizes;
      EXPECT_EQ(z.contains(g), commutes);
      EXPECT_EQ(nm.contains(g), normalizes);
    }
    EXPECT_EQ(z.order(), zc);
    EXPECT_EQ(nm.order(), nc);
    EXPECT_TRUE(is_subgroup(z, nm));
    EXPECT_EQ(s5.order() % nm.order(), 0u);

    std::vector<int> subset;
    for (int i = 0; i < 5; ++i)
      if (rng() % 2) subset.push_back(i);
    PermGroup st = set_stabilizer(s5, subset);
    std::size_t sc = 0;
    for (const auto& g : s5.elements()) {
      std::set<int> img;
      for (int i : subset) img.insert(g(i));
      sc += img == std::set<int>(subset.begin(), subset.end());
    }
    EXPECT_EQ(st.order(), sc);
  }
}

TEST(PermGroup, QuotientOrdersAndNormality) {
  PermGroup s4 = symmetric_group(4);
  PermGroup a4 = derived_subgroup(s4);
  EXPECT_EQ(a4.order(), 12u);
  EXPECT_TRUE(is_normal(a4, s4));
  EXPECT_EQ(quotient(s4, a4).group.order(), 2u);
  PermGroup v4 = derived_subgroup(a4);
  EXPECT_EQ(v4.order(), 4u);
  EXPECT_EQ(quotient(s4, v4).group.order(), 6u);
  PermGroup c = center(s4);
  EXPECT_EQ(c.order(), 1u);
  PermGroup trivial = quotient(s4, s4).group;
  EXPECT_EQ(trivial.order(), 1u);
}

TEST(PermGroup, FingerprintHistogramSumsToOrder) {
  for (auto g : {symmetric_group(4), cyclic_group(7), named_group(NamedGroup::S3xS3)}) {
    auto f = fingerprint(g);
    std::uint64_t sum = 0;
    for (auto [o, c] : f.element_order_histogram) sum += c;
    EXPECT_EQ(sum, f.order);
  }
  auto trivial = fingerprint(PermGroup(3, {}));
  EXPECT_EQ(trivial.element_order_histogram, (std::map<std::uint64_t, std::uint64_t>{{1, 1}}));
  auto v = fingerprint(named_group(NamedGroup::C2xC2));
  EXPECT_EQ(v.order, 4u);
  EXPECT_TRUE(v.is_abelian);
  EXPECT_EQ(exponent(named_group(NamedGroup::C2xC2)), 2u);
}

TEST(NamedGroups, Orders) {
  std::map<NamedGroup, std::uint64_t> expected{
      {NamedGroup::C2xC2, 4},        {NamedGroup::S3, 6},        {NamedGroup::S4, 24},
      {NamedGroup::C6, 6},           {NamedGroup::S3xC3, 18},    {NamedGroup::S3xC2, 12},
      {NamedGroup::S3xS3, 36},       {NamedGroup::S3xS3xS3, 216}, {NamedGroup::S4xC2xC2, 96},
      {NamedGroup::S3xC2_sq, 144},   {NamedGroup::ASL2F3, 216},  {NamedGroup::PGO4p3_model, 576},
  };
  for (auto [name, order] : expected) EXPECT_EQ(named_group(name).order(), order) << to_string(name);
  for (const auto& [s, n] : named_group_table()) EXPECT_EQ(parse_named_group(s), n);
}

TEST(NamedGroups, OrderEightEvidenceForTheTritangentStabilizer) {
  PermGroup go = set_stabilizer(schlafli::weyl_e6(), {0, 7, 12});
  EXPECT_EQ(go.order(), 1152u);
  EXPECT_TRUE(has_element_of_order(go, 8));
  PermGroup pgo = named_group(NamedGroup::PGO4p3_model);
  EXPECT_FALSE(has_element_of_order(pgo, 8));
  ASSERT_EQ(center(go).order(), 2u);
  auto rep = split_central_extension_check(go, center(go).generators().front());
  EXPECT_EQ(rep.verdict, ExtensionVerdict::NonsplitByOrder8);
  EXPECT_EQ(rep.quotient_order, 576u);
}

TEST(ExtensionCheck, SmallExamples) {
  PermGroup v4 = named_group(NamedGroup::C2xC2);
  auto split = split_central_extension_check(v4, v4.generators().front());
  EXPECT_EQ(split.verdict, ExtensionVerdict::Split);
  ASSERT_TRUE(split.complement.has_value());
  EXPECT_EQ(split.complement->order(), 2u);

  PermGroup c4 = cyclic_group(4);
  auto c4rep = split_central_extension_check(c4, c4.generators().front().pow(2));
  EXPECT_EQ(c4rep.verdict, ExtensionVerdict::Nonsplit);

  PermGroup q8 = diagonal_quotient_stabilizer(quaternion_table());
  ASSERT_EQ(center(q8).order(), 2u);
  EXPECT_EQ(split_central_extension_check(q8, center(q8).generators().front()).verdict, ExtensionVerdict::Nonsplit);

  PermGroup c4c2 = diagonal_quotient_stabilizer(abelian_table({4, 2}));
  // the element (0,1) of C4 x C2 is a central involution with a complement
  Permutation z = Permutation::from_images(abelian_table({4, 2})[1]);
  EXPECT_EQ(split_central_extension_check(c4c2, z).verdict, ExtensionVerdict::Split);

  Permutation not_central = Permutation::from_cycles(3, {{0, 1}});
  EXPECT_THROW(split_central_extension_check(symmetric_group(3), not_central), GroupError);
}

TEST(DiagonalQuotientStabilizer, ReproducesEveryGroupOfOrderAtMostTwelve) {
  auto groups = small_groups();
  EXPECT_EQ(groups.size(), 24u);
  std::map<std::size_t, std::set<std::pair<std::map<std::uint64_t, std::uint64_t>, std::uint64_t>>> seen;
  for (const auto& [name, table] : groups) {
    PermGroup g = diagonal_quotient_stabilizer(table);
    const std::size_t n = table.size();
    EXPECT_EQ(g.order(), n) << name;
    EXPECT_EQ(g.degree(), n) << name;
    TableStats st = table_stats(table);
    auto fp = fingerprint(g);
    EXPECT_EQ(fp.element_order_histogram, st.hist) << name;
    EXPECT_EQ(fp.center_order, st.center) << name;
    EXPECT_EQ(fp.is_abelian, st.abelian) << name;
    // sigma_a sigma_b = sigma_ab
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        EXPECT_EQ(Permutation::from_images(table[a]) * Permutation::from_images(table[b]),
                  Permutation::from_images(table[table[a][b]]));
    if (n > 1) {
      EXPECT_TRUE(is_transitive(g)) << name;
      EXPECT_EQ(point_stabilizer(g, 0).order(), 1u) << name;
    }
    // fingerprints separate the isomorphism classes of each order
    EXPECT_TRUE(seen[n].insert({st.hist, st.center}).second) << name;
  }
  EXPECT_EQ(fingerprint(diagonal_quotient_stabilizer(abelian_table({4}))).element_order_histogram,
            (std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}, {4, 2}}));
  EXPECT_FALSE(is_abelian(diagonal_quotient_stabilizer(permutation_table(3, false))));
}

TEST(DiagonalQuotientStabilizer, RejectsNonGroupTables) {
  EXPECT_THROW(diagonal_quotient_stabilizer({{0, 1}, {0, 1}}), GroupError);
  EXPECT_THROW(diagonal_quotient_stabilizer({}), GroupError);
  // Latin square without associativity
  std::vector<std::vector<int>> bad{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_THROW(diagonal_quotient_stabilizer(bad), GroupError);
}

TEST(PermGroup, ChainAndMaterializationAgreeOnNamedGroups) {
  for (const auto& [s, n] : named_group_table()) {
    PermGroup g = named_group(n);
    PermGroup chain(g.degree(), g.generators(), 0);
    EXPECT_EQ(chain.order(), g.order()) << s;
    EXPECT_EQ(g.materialized_count(), g.order()) << s;
  }
}

TEST(PermGroup, ConjugacySearch) {
  PermGroup s4 = symmetric_group(4);
  PermGroup a(4, {Permutation::from_cycles(4, {{0, 1}})});
  PermGroup b(4, {Permutation::from_cycles(4, {{2, 3}})});
  auto w = find_conjugator(s4, a, b);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(same_group(conjugate(a, *w), b));
  PermGroup c(4, {Permutation::from_cycles(4, {{0, 1}, {2, 3}})});
  EXPECT_FALSE(find_conjugator(s4, a, c).has_value());
}
