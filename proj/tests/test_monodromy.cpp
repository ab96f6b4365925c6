#include <gtest/gtest.h>

#include <map>

#include "cubic27/monodromy.hpp"
#include "cubic27/named_groups.hpp"

using namespace c27;

namespace {

Permutation perm(std::vector<int> img) { return Permutation::from_images(img); }

const MonodromyReport& campaign(FamilyName f, std::uint64_t seed = 7, Params base = {}) {
  static std::map<std::tuple<FamilyName, std::uint64_t, std::size_t>, MonodromyReport> cache;
  auto key = std::make_tuple(f, seed, base.size());
  auto it = cache.find(key);
  if (it == cache.end()) {
    Campaign c;
    c.family = f;
    c.seed = seed;
    c.loop_budget = 80;
    c.basepoint = base;
    it = cache.emplace(key, run_campaign(c)).first;
  }
  return it->second;
}

void expect_all_verdicts_pass(const MonodromyReport& r) {
  for (const auto& v : r.verdicts) EXPECT_TRUE(v.pass) << v.claim;
  EXPECT_FALSE(r.inconclusive);
  EXPECT_TRUE(r.plateau.plateau);
}

}  // namespace

TEST(Plateau, StopsAfterStableRun) {
  Permutation a = perm({1, 0, 2}), b = perm({0, 2, 1});
  auto r = run_plateau(3, 50, [&](int k) -> std::optional<Permutation> { return k % 2 ? a : b; });
  EXPECT_TRUE(r.plateau);
  EXPECT_EQ(r.loops_used, 12);
  EXPECT_EQ(r.order_history.front(), 2u);
  EXPECT_EQ(r.order_history.back(), 6u);
}

TEST(Plateau, FailuresDoNotCountAndBudgetCaps) {
  Permutation a = perm({1, 0, 2});
  auto r = run_plateau(3, 30, [&](int k) -> std::optional<Permutation> {
    if (k % 2) return std::nullopt;
    return a;
  });
  EXPECT_TRUE(r.plateau);
  EXPECT_EQ(r.loops_used, 21);
  auto capped = run_plateau(3, 5, [&](int) -> std::optional<Permutation> { return a; });
  EXPECT_FALSE(capped.plateau);
  EXPECT_EQ(capped.loops_used, 5);
  auto none = run_plateau(3, 0, [&](int) -> std::optional<Permutation> { return a; });
  EXPECT_EQ(none.loops_used, 0);
  EXPECT_FALSE(none.plateau);
}

TEST(ExactSequence, SmallExamples) {
  // S3 on {0,1,2} times C2 on {3,4}
  Permutation r3 = perm({1, 2, 0, 3, 4}), s = perm({1, 0, 2, 3, 4}), t = perm({0, 1, 2, 4, 3});
  PermGroup s3(5, {r3, s}), c2(5, {t});
  PermGroup prod(5, {r3, s, t});
  EXPECT_EQ(exact_sequence_report(prod, c2, s3).verdict, "direct_product");
  EXPECT_EQ(exact_sequence_report(prod, prod).verdict, "trivial_quotient");

  PermGroup a3(5, {r3}), c2s(5, {s});
  auto split = exact_sequence_report(s3, a3, c2s);
  EXPECT_EQ(split.verdict, "split");
  EXPECT_EQ(split.quotient_order, 2u);
  EXPECT_TRUE(exact_sequence_report(s3, c2s).verdict.rfind("structural_failure", 0) == 0);

  PermGroup c4 = cyclic_group(4);
  Permutation g = c4.generators().front();
  PermGroup center(4, {g * g});
  EXPECT_EQ(exact_sequence_report(c4, center).verdict, "nonsplit");
  auto klein = named_group(NamedGroup::C2xC2);
  PermGroup one(klein.degree(), {klein.generators().front()});
  EXPECT_EQ(exact_sequence_report(klein, one).verdict, "split");
}

TEST(Campaign, S4) {
  const auto& r = campaign(FamilyName::S4);
  expect_all_verdicts_pass(r);
  ASSERT_EQ(r.punctures.size(), 2u);
  EXPECT_EQ(r.group.order(), 4u);
  EXPECT_EQ(exponent(r.group), 2u);
  EXPECT_EQ(r.deck_group->order(), 24u);
  EXPECT_EQ(r.combined_group->order(), 96u);
  EXPECT_EQ(fingerprint(*r.combined_group), fingerprint(named_group(NamedGroup::S4xC2xC2)));
  EXPECT_EQ(r.exact_sequence->verdict, "direct_product");
  EXPECT_EQ(r.exact_sequence->quotient_order, 4u);
  EXPECT_TRUE(same_group(*r.combined_group, normalizer(schlafli::weyl_e6(), *r.deck_group)));
  for (const auto& l : r.loops)
    if (l.perm) {
      EXPECT_GE(l.telemetry.min_gap_ratio, kMatchGapRatio);
      EXPECT_LT(l.telemetry.max_corrector_residual, 1e-10);
    }
}

TEST(Campaign, S3) {
  const auto& r = campaign(FamilyName::S3);
  expect_all_verdicts_pass(r);
  EXPECT_EQ(r.group.order(), 36u);
  EXPECT_EQ(fingerprint(r.group), fingerprint(named_group(NamedGroup::S3xS3)));
  EXPECT_EQ(r.combined_group->order(), 216u);
  EXPECT_EQ(fingerprint(*r.combined_group), fingerprint(named_group(NamedGroup::S3xS3xS3)));
}

TEST(Campaign, S3OtherSeeds) {
  for (std::uint64_t seed : {1u, 3u}) {
    const auto& r = campaign(FamilyName::S3, seed);
    expect_all_verdicts_pass(r);
    EXPECT_EQ(r.punctures.size(), 6u);
    EXPECT_EQ(r.puncture_direction.size(), 2u);
    EXPECT_EQ(r.group.order(), 36u) << seed;
  }
}

TEST(Campaign, S3xC2) {
  const auto& r = campaign(FamilyName::S3xC2);
  expect_all_verdicts_pass(r);
  EXPECT_EQ(r.punctures.size(), 3u);
  EXPECT_EQ(r.group.order(), 12u);
  EXPECT_EQ(fingerprint(r.group), fingerprint(named_group(NamedGroup::S3xC2)));
  EXPECT_EQ(r.deck_group->order(), 12u);
  PermGroup n = normalizer(schlafli::weyl_e6(), *r.deck_group);
  // the combined group sits in the normalizer, which bounds its order
  EXPECT_EQ(n.order(), 72u);
  EXPECT_LE(r.combined_group->order(), n.order());
  EXPECT_TRUE(same_group(r.group, centralizer(schlafli::weyl_e6(), *r.deck_group)));
  for (const auto& l : r.loops)
    if (l.kind == "petal") {
      ASSERT_TRUE(l.perm.has_value());
      EXPECT_EQ(6u % l.perm->order(), 0u);
    }
}

TEST(Campaign, C2Even) {
  const auto& r = campaign(FamilyName::C2even);
  expect_all_verdicts_pass(r);
  ASSERT_EQ(r.marked_triple.size(), 3u);
  PermGroup stab = set_stabilizer(schlafli::weyl_e6(), r.marked_triple);
  EXPECT_EQ(stab.order(), 1152u);
  EXPECT_TRUE(same_group(*r.combined_group, stab));
  EXPECT_EQ(r.deck_group->order(), 2u);
  ASSERT_TRUE(r.exact_sequence->central_c2.has_value());
  EXPECT_TRUE(r.exact_sequence->central_c2->big_has_order8);
  EXPECT_FALSE(r.exact_sequence->central_c2->quotient_has_order8);
  EXPECT_EQ(r.exact_sequence->quotient_order, 576u);
  EXPECT_EQ(r.exact_sequence->verdict, "nonsplit_by_order8");
}

TEST(Campaign, GenericIsWeylAndBasepointIndependent) {
  const auto& a = campaign(FamilyName::Generic20);
  expect_all_verdicts_pass(a);
  EXPECT_TRUE(same_group(a.group, schlafli::weyl_e6()));
  Rng rng(4242);
  Params other(20);
  for (auto& v : other) v = rng.gaussian();
  const auto& b = campaign(FamilyName::Generic20, 9, other);
  EXPECT_EQ(b.group.order(), a.group.order());
  EXPECT_EQ(fingerprint(b.group), fingerprint(a.group));
  EXPECT_TRUE(find_conjugator(schlafli::weyl_e6(), a.group, b.group).has_value());
}

TEST(Campaign, FlexFamilyRejected) {
  Campaign c;
  c.family = FamilyName::FlexP9;
  EXPECT_THROW(run_campaign(c), FamilyError);
}
