#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "named_groups.hpp"
#include "perm_group.hpp"
#include "schlafli.hpp"
#include "surfaces.hpp"
#include "tracker.hpp"

namespace c27 {

inline constexpr int kPlateauLoops = 10;

struct Campaign {
  FamilyName family = FamilyName::Generic20;
  Params basepoint;  // empty: the family default
  int loop_budget = 80;
  std::uint64_t seed = 1;
  bool include_twists = true;
  bool include_symmetry_deck = true;
};

struct LoopRecord {
  std::string kind;  // petal, random_polygon, twisted, ...
  std::vector<Params> waypoints;
  std::optional<Permutation> perm;  // absent when tracking failed
  std::string error;
  TrackedPermutation telemetry;
  std::uint64_t order_after = 1;
};

struct PlateauResult {
  std::vector<Permutation> generators;
  std::vector<std::uint64_t> order_history;
  int loops_used = 0;
  bool plateau = false;
};

/// Feeds loops one at a time until the generated order has not grown for
/// `plateau` consecutive successful loops or the budget runs out.
/// `next_loop(k)` tracks loop k and returns its permutation, or nullopt on
/// failure (failures use budget but do not count toward the plateau).
inline PlateauResult run_plateau(std::size_t degree, int budget,
                                 const std::function<std::optional<Permutation>(int)>& next_loop,
                                 int plateau = kPlateauLoops) {
  PlateauResult r;
  std::uint64_t order = 1;
  int stable = 0;
  for (int k = 0; k < budget; ++k) {
    ++r.loops_used;
    auto p = next_loop(k);
    if (!p) {
      r.order_history.push_back(order);
      continue;
    }
    if (!p->is_identity()) r.generators.push_back(*p);
    std::uint64_t next = PermGroup(degree, r.generators, 0).order();
    stable = next == order ? stable + 1 : 0;
    order = next;
    r.order_history.push_back(order);
    if (stable >= plateau) {
      r.plateau = true;
      break;
    }
  }
  return r;
}

struct ExactSequenceReport {
  std::uint64_t combined_order = 0;
  std::uint64_t deck_order = 0;
  bool deck_normal = false;
  std::uint64_t quotient_order = 0;
  bool complement_found = false;  // the tracked group meets deck trivially and fills the quotient
  bool direct_product = false;    // complement also commutes with deck
  std::optional<ExtensionReport> central_c2;  // when the deck group has order 2 and is central
  std::string verdict;
};

/// 1 -> deck -> combined -> combined/deck -> 1, with the tracked group as the
/// candidate complement.
inline ExactSequenceReport exact_sequence_report(const PermGroup& combined, const PermGroup& deck,
                                                 const std::optional<PermGroup>& tracked = std::nullopt) {
  ExactSequenceReport r;
  r.combined_order = combined.order();
  r.deck_order = deck.order();
  r.deck_normal = is_subgroup(deck, combined) && is_normal(deck, combined);
  if (!r.deck_normal) {
    r.verdict = "structural_failure: deck group is not normal";
    return r;
  }
  r.quotient_order = quotient(combined, deck).group.order();
  if (tracked && is_subgroup(*tracked, combined)) {
    PermGroup meet = intersection(*tracked, deck);
    r.complement_found = meet.order() == 1 && tracked->order() * deck.order() == combined.order();
    if (r.complement_found) {
      r.direct_product = true;
      for (const auto& t : tracked->generators())
        for (const auto& d : deck.generators())
          if (!t.commutes_with(d)) r.direct_product = false;
    }
  }
  if (deck.order() == 2) {
    Permutation z = deck.generators().front();
    bool central = std::all_of(combined.generators().begin(), combined.generators().end(),
                               [&](const Permutation& g) { return g.commutes_with(z); });
    if (central) r.central_c2 = split_central_extension_check(combined, z);
  }
  if (r.quotient_order == 1)
    r.verdict = "trivial_quotient";
  else if (r.direct_product)
    r.verdict = "direct_product";
  else if (r.complement_found)
    r.verdict = "split";
  else if (r.central_c2)
    r.verdict = to_string(r.central_c2->verdict);
  else
    r.verdict = "inconclusive";
  return r;
}

struct Verdict {
  std::string claim;
  bool pass = false;
  std::string details;
};

struct MonodromyReport {
  Campaign campaign;
  Params basepoint;
  SolveReport base;
  schlafli::SchlafliLabeling labeling;
  std::vector<Complex> punctures;  // t values on basepoint + t * puncture_direction when that is set
  Params puncture_direction;
  std::vector<LoopRecord> loops;
  PlateauResult plateau;
  PermGroup group;  // tracked
  std::optional<PermGroup> deck_group;
  std::optional<PermGroup> combined_group;
  std::optional<ExactSequenceReport> exact_sequence;
  std::vector<int> marked_triple;  // C2even: labels of the lines through [1:0:0:0]
  std::vector<Verdict> verdicts;
  bool inconclusive = true;
};

/// Image of a matrix group's generators on the base lines, in labels.
inline PermGroup deck_image(const CubicForm& f, const std::vector<Mat4>& gens, const SolveReport& base,
                            const schlafli::SchlafliLabeling& lab) {
  std::vector<Permutation> perms;
  for (const auto& m : gens) perms.push_back(symmetry_permutation(f, m, base.lines, lab));
  return PermGroup(27, detail::nontrivial(perms));
}

/// Segments on which the one-parameter families are scanned for punctures.
inline std::vector<std::pair<Complex, Complex>> scan_segments(FamilyName f) {
  switch (f) {
    case FamilyName::S4: return {{-1.0, 1.0}};
    case FamilyName::S3xC2:
      return {{0.0, std::polar(3.0, kPi)}, {0.0, std::polar(3.0, kPi / 3.0)}, {0.0, std::polar(3.0, -kPi / 3.0)}};
    default: return {};
  }
}

/// Punctures of a one-parameter family located by scanning.
inline std::vector<Complex> scanned_punctures(FamilyName name, std::uint64_t seed) {
  FamilySpec fam = make_family(name);
  std::vector<Complex> out;
  for (auto [z0, z1] : scan_segments(name)) {
    PunctureScanOptions opt;
    opt.seed = seed++;
    auto cands = puncture_scan([&](Complex t) { return fam.surface_coefficients({t}); }, z0, z1, opt);
    for (const auto& c : cands) {
      bool dup = std::any_of(out.begin(), out.end(), [&](Complex q) { return std::abs(q - c.t) < 1e-6; });
      if (!dup) out.push_back(c.t);
    }
  }
  return out;
}

struct TwistGenerator {
  Params image;  // parameter point identified with the basepoint
  Mat4 matrix;   // F_base o M proportional to F_image
  std::string name;
};

/// Identifications of the basepoint with other parameter points.
inline std::vector<TwistGenerator> twist_generators(FamilyName f, const Params& base) {
  std::vector<TwistGenerator> out;
  const Complex z = zeta3();
  auto diag = [](Complex a, Complex b) { return Mat4(Eigen::Vector4cd(a, b, 1.0, 1.0).asDiagonal()); };
  if (f == FamilyName::S3) {
    out.push_back({{base[1], base[0]}, permutation_matrix({1, 0, 2, 3}), "swap"});
    out.push_back({{z * base[0], base[1]}, diag(z, 1.0), "scale_x"});
    out.push_back({{base[0], z * base[1]}, diag(1.0, z), "scale_y"});
  } else if (f == FamilyName::S3xC2) {
    // generator of the C6 acting on the line: diag(w, w, 1, 1) composed with the central involution
    out.push_back({{z * base[0]}, diag(z, z) * s3c2_involution(), "c6_generator"});
  }
  return out;
}

inline double random_loop_scale(FamilyName f) {
  switch (f) {
    case FamilyName::S4: return 1.0;
    case FamilyName::S3: return 3.0;
    case FamilyName::S3xC2: return 2.0;
    default: return 1.0;
  }
}

/// Lines through a point, as slots.
inline std::vector<int> lines_through(const std::vector<Line>& lines, const Vec4& p) {
  std::vector<int> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (collinear(lines[i].point0(), lines[i].point1(), p)) out.push_back(static_cast<int>(i));
  return out;
}

/// Tracks loops for a surface family until the generated group stabilizes.
/// Loop order: petals (scanned punctures, or a line slice for S3), twist generators, then random
/// polygons alternating with random twisted paths.
inline MonodromyReport run_campaign(const Campaign& c, const LoopTrackOptions& topt = {}) {
  if (c.family == FamilyName::FlexP9) throw FamilyError("run_campaign: use the flex campaign for FlexP9");
  MonodromyReport rep;
  rep.campaign = c;
  FamilySpec fam = make_family(c.family);
  rep.basepoint = c.basepoint.empty() ? fam.default_basepoint : c.basepoint;
  CubicForm f = fam.surface(rep.basepoint);
  Rng rng(c.seed);
  rep.base = solve_lines(f, rng.next());
  rep.labeling = schlafli::label_lines(incidence_graph(rep.base.lines));

  std::vector<std::function<LoopRecord()>> structured;
  std::vector<std::vector<Complex>> petals;
  Params& direction = rep.puncture_direction;
  if (fam.parameter_dim == 1) {
    rep.punctures = scanned_punctures(c.family, rng.next());
    petals = petal_loops(rep.basepoint[0], rep.punctures);
  } else if (c.family == FamilyName::S3) {
    // petals in a random complex line through the basepoint
    Rng r2(rng.next());
    direction = {r2.gaussian(), r2.gaussian()};
    rep.punctures = s3_line_punctures(rep.basepoint, direction);
    petals = petal_loops(0.0, rep.punctures);
  }
  for (const auto& w : petals)
    structured.push_back([&, w] {
      LoopRecord rec;
      rec.kind = "petal";
      for (auto x : w) {
        if (direction.empty()) {
          rec.waypoints.push_back({x});
          continue;
        }
        Params q = rep.basepoint;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += x * direction[i];
        rec.waypoints.push_back(q);
      }
      LoopSpec spec;
      spec.family = c.family;
      spec.basepoint = rep.basepoint;
      spec.waypoints = rec.waypoints;
      spec.kind = LoopKind::Petal;
      rec.telemetry = track_loop(spec, rep.base, rep.labeling, topt);
      rec.perm = rec.telemetry.perm;
      return rec;
    });
  auto twists = c.include_twists ? twist_generators(c.family, rep.basepoint) : std::vector<TwistGenerator>{};
  auto twisted = [&](const std::vector<Params>& path, const TwistGenerator& g) {
    LoopRecord rec;
    rec.kind = "twisted:" + g.name;
    rec.waypoints = path;
    TwistedLoopSpec spec{c.family, path, g.matrix, g.name};
    rec.telemetry = track_twisted_loop(spec, rep.base, rep.labeling, topt);
    rec.perm = rec.telemetry.perm;
    return rec;
  };
  for (const auto& g : twists) structured.push_back([&, g] { return twisted({rep.basepoint, g.image}, g); });

  const double scale = random_loop_scale(c.family);
  auto next_loop = [&](int k) -> std::optional<Permutation> {
    LoopRecord rec;
    try {
      if (k < static_cast<int>(structured.size())) {
        rec = structured[k]();
      } else {
        std::uint64_t s = rng.next();
        bool twist = !twists.empty() && (k % 2 == 1);
        if (twist) {
          Rng r2(s);
          const auto& g = twists[r2.next() % twists.size()];
          Params mid = rep.basepoint;
          for (auto& x : mid) x += scale * r2.gaussian();
          rec = twisted({rep.basepoint, mid, g.image}, g);
        } else {
          LoopSpec spec = random_polygon_loop(c.family, rep.basepoint, s, scale);
          rec.kind = "random_polygon";
          rec.waypoints = spec.waypoints;
          rec.telemetry = track_loop(spec, rep.base, rep.labeling, topt);
          rec.perm = rec.telemetry.perm;
        }
      }
    } catch (const std::exception& e) {
      rec.perm.reset();
      rec.error = e.what();
    }
    rep.loops.push_back(rec);
    return rec.perm;
  };
  rep.plateau = run_plateau(27, c.loop_budget, next_loop);
  for (std::size_t i = 0; i < rep.loops.size(); ++i) rep.loops[i].order_after = rep.plateau.order_history[i];
  rep.group = PermGroup(27, rep.plateau.generators);
  rep.inconclusive = !rep.plateau.plateau;

  if (c.include_symmetry_deck && !fam.symmetry_generators.empty()) {
    rep.deck_group = deck_image(f, fam.symmetry_generators, rep.base, rep.labeling);
    auto gens = rep.group.generators();
    gens.insert(gens.end(), rep.deck_group->generators().begin(), rep.deck_group->generators().end());
    rep.combined_group = PermGroup(27, gens);
    rep.exact_sequence = exact_sequence_report(*rep.combined_group, *rep.deck_group, rep.group);
  }
  if (c.family == FamilyName::C2even) {
    auto slots = lines_through(rep.base.lines, Vec4(1.0, 0.0, 0.0, 0.0));
    for (int s : slots) rep.marked_triple.push_back(rep.labeling.slot_to_label[s]);
    std::sort(rep.marked_triple.begin(), rep.marked_triple.end());
  }

  // containment checks that hold for every campaign
  const PermGroup& w = schlafli::weyl_e6();
  bool in_w = std::all_of(rep.group.generators().begin(), rep.group.generators().end(),
                          [&](const Permutation& p) { return w.contains(p); });
  rep.verdicts.push_back({"tracked_in_W(E6)", in_w, "every tracked generator preserves the Schläfli graph"});
  if (rep.deck_group) {
    bool centralizes = is_subgroup(rep.group, centralizer(w, *rep.deck_group));
    bool normalizes = is_subgroup(*rep.combined_group, normalizer(w, *rep.deck_group));
    rep.verdicts.push_back({"tracked_in_Z(deck,W(E6))", centralizes, ""});
    rep.verdicts.push_back({"combined_in_N(deck,W(E6))", normalizes, ""});
  }
  return rep;
}

}  // namespace c27
