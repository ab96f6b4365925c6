#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexes.hpp"
#include "monodromy.hpp"
#include "named_groups.hpp"

namespace c27 {

enum class ClaimSource { Tracked, Combined, Quotient, Flex };

inline std::string to_string(ClaimSource s) {
  switch (s) {
    case ClaimSource::Tracked: return "tracked";
    case ClaimSource::Combined: return "combined";
    case ClaimSource::Quotient: return "combined/deck";
    case ClaimSource::Flex: return "flex";
  }
  return "?";
}

struct Claim {
  std::string id;
  FamilyName family;
  ClaimSource source;
  std::uint64_t target_order;
  std::optional<NamedGroup> target_group;  // fingerprint oracle
  std::string structure;                   // required exact-sequence verdict, if any
  std::string statement;
};

inline const std::vector<Claim>& claim_suite() {
  static const std::vector<Claim> claims{
      {"W(E6)", FamilyName::Generic20, ClaimSource::Tracked, 51840, std::nullopt, "",
       "generic monodromy equals the automorphism group of the Schläfli graph"},
      {"S4-coarse", FamilyName::S4, ClaimSource::Tracked, 4, NamedGroup::C2xC2, "", "exponent 2"},
      {"S4-stack", FamilyName::S4, ClaimSource::Combined, 96, NamedGroup::S4xC2xC2, "direct_product",
       "deck normal, quotient of order 4, direct split"},
      {"S3-coarse", FamilyName::S3, ClaimSource::Tracked, 36, NamedGroup::S3xS3, "", ""},
      {"S3-stack", FamilyName::S3, ClaimSource::Combined, 216, NamedGroup::S3xS3xS3, "", ""},
      {"S3xC2-coarse", FamilyName::S3xC2, ClaimSource::Tracked, 12, NamedGroup::S3xC2, "", ""},
      {"S3xC2-stack", FamilyName::S3xC2, ClaimSource::Combined, 144, NamedGroup::S3xC2_sq, "", ""},
      {"C2-stack", FamilyName::C2even, ClaimSource::Combined, 1152, std::nullopt, "",
       "equals the stabilizer of the marked tritangent triple"},
      {"C2-coarse", FamilyName::C2even, ClaimSource::Quotient, 576, NamedGroup::PGO4p3_model, "nonsplit_by_order8",
       "quotient by the central involution, extension does not split"},
      {"Flexes", FamilyName::FlexP9, ClaimSource::Flex, 216, NamedGroup::ASL2F3, "",
       "equals ASL2(F3) under a collinearity-derived bijection"},
  };
  return claims;
}

inline int default_budget(FamilyName f) { return f == FamilyName::Generic20 || f == FamilyName::FlexP9 ? 80 : 60; }

enum class ClaimStatus { Pass, Fail, Inconclusive };

inline std::string to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Pass: return "pass";
    case ClaimStatus::Fail: return "fail";
    case ClaimStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ClaimResult {
  Claim claim;
  ClaimStatus status = ClaimStatus::Inconclusive;
  std::uint64_t measured_order = 0;
  bool order_ok = false;
  std::optional<bool> fingerprint_ok;
  std::optional<bool> structure_ok;
  std::optional<bool> equality_ok;
  std::vector<std::string> notes;
  PermGroup group;
};

/// Campaign outputs shared by the claims of one family.
struct ClaimRuns {
  std::map<FamilyName, MonodromyReport> surfaces;
  std::optional<FlexMonodromyReport> flexes;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::optional<int> budget;  // overrides per-family defaults
  LoopTrackOptions tracking{};
};

inline bool same_fingerprint(const PermGroup& g, NamedGroup n) {
  PermGroup oracle = named_group(n);
  if (g.order() != oracle.order()) return false;
  return fingerprint(g) == fingerprint(oracle);
}

inline ClaimResult evaluate_claim(const Claim& c, ClaimRuns& runs, const VerifyOptions& opt) {
  ClaimResult r;
  r.claim = c;
  const int budget = opt.budget.value_or(default_budget(c.family));
  if (c.source == ClaimSource::Flex) {
    if (!runs.flexes) runs.flexes = flex_monodromy_campaign(budget, opt.seed, {}, opt.tracking);
    const auto& f = *runs.flexes;
    r.group = f.group;
    r.measured_order = f.group.order();
    r.equality_ok = f.asl2.equal && f.preserves_collinearity;
    if (f.inconclusive) r.notes.push_back("no plateau within budget");
  } else {
    auto it = runs.surfaces.find(c.family);
    if (it == runs.surfaces.end()) {
      Campaign camp;
      camp.family = c.family;
      camp.loop_budget = budget;
      camp.seed = opt.seed;
      it = runs.surfaces.emplace(c.family, run_campaign(camp, opt.tracking)).first;
    }
    const MonodromyReport& m = it->second;
    if (m.inconclusive) r.notes.push_back("no plateau within budget");
    for (const auto& v : m.verdicts)
      if (!v.pass) r.notes.push_back("containment failed: " + v.claim);
    switch (c.source) {
      case ClaimSource::Tracked: r.group = m.group; break;
      case ClaimSource::Combined: r.group = m.combined_group.value_or(m.group); break;
      case ClaimSource::Quotient:
        if (m.combined_group && m.deck_group && is_normal(*m.deck_group, *m.combined_group))
          r.group = quotient(*m.combined_group, *m.deck_group).group;
        break;
      default: break;
    }
    r.measured_order = r.group.order();
    if (c.family == FamilyName::Generic20)
      r.equality_ok = same_group(r.group, schlafli::weyl_e6());
    if (c.family == FamilyName::C2even && c.source == ClaimSource::Combined) {
      if (m.marked_triple.size() == 3)
        r.equality_ok = same_group(r.group, set_stabilizer(schlafli::weyl_e6(), m.marked_triple));
      else
        r.equality_ok = false;
    }
    if (!c.structure.empty()) {
      r.structure_ok = m.exact_sequence && m.exact_sequence->verdict == c.structure;
      if (m.exact_sequence) r.notes.push_back("exact sequence: " + m.exact_sequence->verdict);
    }
  }
  r.order_ok = r.measured_order == c.target_order;
  if (c.target_group && r.group.is_materialized()) r.fingerprint_ok = same_fingerprint(r.group, *c.target_group);
  if (c.target_group && !r.group.is_materialized()) r.fingerprint_ok = false;

  bool inconclusive = std::any_of(r.notes.begin(), r.notes.end(),
                                  [](const std::string& n) { return n == "no plateau within budget"; });
  bool ok = r.order_ok && r.fingerprint_ok.value_or(true) && r.structure_ok.value_or(true) &&
            r.equality_ok.value_or(true) &&
            std::none_of(r.notes.begin(), r.notes.end(),
                         [](const std::string& n) { return n.rfind("containment failed", 0) == 0; });
  r.status = inconclusive ? ClaimStatus::Inconclusive : (ok ? ClaimStatus::Pass : ClaimStatus::Fail);
  return r;
}

/// Runs the selected claims (all when `ids` is empty).
inline std::vector<ClaimResult> verify_claims(const std::vector<std::string>& ids, const VerifyOptions& opt,
                                              ClaimRuns* runs_out = nullptr) {
  for (const auto& id : ids)
    if (std::none_of(claim_suite().begin(), claim_suite().end(), [&](const Claim& c) { return c.id == id; }))
      throw std::invalid_argument("unknown claim: " + id);
  ClaimRuns local;
  ClaimRuns& runs = runs_out ? *runs_out : local;
  std::vector<ClaimResult> out;
  for (const auto& c : claim_suite()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    if (opt.budget && *opt.budget <= 0) {
      ClaimResult r;
      r.claim = c;
      r.status = ClaimStatus::Inconclusive;
      r.notes.push_back("loop budget is zero");
      out.push_back(r);
      continue;
    }
    out.push_back(evaluate_claim(c, runs, opt));
  }
  return out;
}

}  // namespace c27
