#pragma once

#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "claims.hpp"
#include "flexes.hpp"
#include "monodromy.hpp"

namespace c27::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

template <typename V>
json vector_json(const V& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

inline json params_json(const Params& p) {
  json a = json::array();
  for (auto z : p) a.push_back(complex_json(z));
  return a;
}

inline Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

/// "re,im", "re", or a JSON value ([re, im] or a number).
inline Complex parse_complex(const std::string& s) {
  auto t = s;
  t.erase(std::remove_if(t.begin(), t.end(), ::isspace), t.end());
  if (!t.empty() && (t.front() == '[' || t.front() == '{')) return parse_complex(json::parse(t));
  auto comma = t.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(s);
      return {re, 0.0};
    }
    std::string a = t.substr(0, comma), b = t.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("cannot parse complex parameter: " + s);
  }
}

/// A JSON list of parameters, each a number or [re, im].
inline Params parse_params(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("parameter list must be a JSON array");
  Params p;
  for (const auto& x : j) p.push_back(parse_complex(x));
  return p;
}

inline json permutation_json(const Permutation& p) {
  json a = json::array();
  for (std::size_t i = 0; i < p.degree(); ++i) a.push_back(p(static_cast<Permutation::Point>(i)));
  return a;
}

inline json fingerprint_json(const GroupFingerprint& f) {
  json hist = json::object();
  for (auto [o, c] : f.element_order_histogram) hist[std::to_string(o)] = c;
  return {{"order", f.order},
          {"center_order", f.center_order},
          {"abelianization", f.abelianization_invariants},
          {"element_orders", hist},
          {"abelian", f.is_abelian}};
}

inline json group_json(const PermGroup& g) {
  json gens = json::array();
  for (const auto& p : g.generators()) gens.push_back(permutation_json(p));
  json j = {{"degree", g.degree()}, {"order", g.order()}, {"generators", gens}};
  if (g.is_materialized() && g.order() <= 100000) j["fingerprint"] = fingerprint_json(fingerprint(g));
  return j;
}

inline json tolerances_json() {
  return {{"line_residual", kLineResidualTolerance},
          {"min_separation", kMinSeparation},
          {"match_gap_ratio", kMatchGapRatio},
          {"match_max_distance", kMatchMaxDistance},
          {"meet", kMeetTolerance},
          {"disjoint", kDisjointTolerance},
          {"symmetry_residual", kSymmetryResidual},
          {"eckardt", kEckardtTolerance},
          {"flex_residual", kFlexResidualTolerance},
          {"collinear", kCollinearTolerance},
          {"plateau_loops", kPlateauLoops}};
}

inline json envelope(const std::string& command) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"tolerances", tolerances_json()}};
}

inline json line_json(const Line& l) {
  return {{"plucker", vector_json(l.plucker)}, {"point0", vector_json(l.point0())}, {"point1", vector_json(l.point1())}};
}

inline json solve_json(const SolveReport& s, const schlafli::SchlafliLabeling* lab = nullptr) {
  json lines = json::array();
  for (std::size_t i = 0; i < s.lines.size(); ++i) {
    json l = line_json(s.lines[i]);
    l["slot"] = i;
    if (lab) l["label"] = schlafli::all_labels()[lab->slot_to_label[i]].to_string();
    lines.push_back(l);
  }
  return {{"lines", lines},
          {"max_residual", s.max_residual},
          {"certification_residual", s.certification_residual},
          {"min_pairwise_distance", s.min_pairwise_distance},
          {"path_failures", s.path_failures},
          {"attempts", s.attempts},
          {"seed", s.seed}};
}

inline json tracked_json(const TrackedPermutation& t) {
  return {{"perm", permutation_json(t.perm)},
          {"cycles", t.perm.to_string()},
          {"slot_perm", permutation_json(t.slot_perm)},
          {"max_corrector_residual", t.max_corrector_residual},
          {"min_separation", t.min_separation},
          {"max_match_distance", t.max_match_distance},
          {"min_gap_ratio", t.min_gap_ratio},
          {"identification_residual", t.identification_residual},
          {"retracks", t.retracks},
          {"description", t.description}};
}

inline json waypoints_json(const std::vector<Params>& w) {
  json a = json::array();
  for (const auto& p : w) a.push_back(params_json(p));
  return a;
}

inline json exact_sequence_json(const ExactSequenceReport& e) {
  json j = {{"combined_order", e.combined_order}, {"deck_order", e.deck_order},     {"deck_normal", e.deck_normal},
            {"quotient_order", e.quotient_order}, {"complement_found", e.complement_found},
            {"direct_product", e.direct_product}, {"verdict", e.verdict}};
  if (e.central_c2)
    j["central_c2"] = {{"verdict", to_string(e.central_c2->verdict)},
                       {"big_has_order8", e.central_c2->big_has_order8},
                       {"quotient_has_order8", e.central_c2->quotient_has_order8},
                       {"quotient_order", e.central_c2->quotient_order}};
  return j;
}

inline json verdicts_json(const std::vector<Verdict>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back({{"claim", v.claim}, {"pass", v.pass}, {"details", v.details}});
  return a;
}

inline json monodromy_json(const MonodromyReport& m) {
  json loops = json::array();
  for (const auto& l : m.loops) {
    json j = {{"kind", l.kind}, {"waypoints", waypoints_json(l.waypoints)}, {"order_after", l.order_after}};
    if (l.perm)
      j["tracked"] = tracked_json(l.telemetry);
    else
      j["error"] = l.error;
    loops.push_back(j);
  }
  json punct = json::array();
  for (auto p : m.punctures) punct.push_back(complex_json(p));
  json j = {{"family", to_string(m.campaign.family)},
            {"basepoint", params_json(m.basepoint)},
            {"seed", m.campaign.seed},
            {"loop_budget", m.campaign.loop_budget},
            {"loops_used", m.plateau.loops_used},
            {"plateau_reached", m.plateau.plateau},
            {"inconclusive", m.inconclusive},
            {"order_history", m.plateau.order_history},
            {"punctures", punct},
            {"base_solve", solve_json(m.base, &m.labeling)},
            {"loops", loops},
            {"group", group_json(m.group)},
            {"verdicts", verdicts_json(m.verdicts)}};
  if (!m.puncture_direction.empty()) j["puncture_direction"] = params_json(m.puncture_direction);
  if (m.deck_group) j["deck_group"] = group_json(*m.deck_group);
  if (m.combined_group) j["combined_group"] = group_json(*m.combined_group);
  if (m.exact_sequence) j["exact_sequence"] = exact_sequence_json(*m.exact_sequence);
  if (!m.marked_triple.empty()) {
    json t = json::array();
    for (int l : m.marked_triple) t.push_back(schlafli::all_labels()[l].to_string());
    j["marked_triple"] = t;
  }
  return j;
}

inline json flex_set_json(const FlexSet& s) {
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(vector_json(p));
  return {{"points", pts}, {"residuals", s.residuals}, {"max_residual", s.max_residual},
          {"min_separation", s.min_separation}, {"attempts", s.attempts}};
}

inline json flex_monodromy_json(const FlexMonodromyReport& f) {
  json loops = json::array();
  for (const auto& l : f.loops) {
    json j = {{"waypoints", waypoints_json(l.waypoints)}, {"order_after", l.order_after}};
    if (l.perm) {
      j["perm"] = permutation_json(*l.perm);
      j["cycles"] = l.perm->to_string();
      j["max_corrector_residual"] = l.max_residual;
      j["min_separation"] = l.min_separation;
      j["max_match_distance"] = l.max_match_distance;
      j["min_gap_ratio"] = l.min_gap_ratio;
      j["retracks"] = l.retracks;
    } else {
      j["error"] = l.error;
    }
    loops.push_back(j);
  }
  return {{"family", "FlexP9"},
          {"basepoint", params_json(f.basepoint)},
          {"base_flexes", flex_set_json(f.base)},
          {"collinear_triples", f.triples},
          {"loops", loops},
          {"loops_used", f.plateau.loops_used},
          {"plateau_reached", f.plateau.plateau},
          {"inconclusive", f.inconclusive},
          {"order_history", f.plateau.order_history},
          {"group", group_json(f.group)},
          {"preserves_collinearity", f.preserves_collinearity},
          {"transitive", f.transitive},
          {"point_stabilizer_order", f.point_stabilizer_order},
          {"asl2_equal", f.asl2.equal},
          {"asl2_bijection", f.asl2.bijection},
          {"verdicts", verdicts_json(f.verdicts)}};
}

inline json claim_json(const ClaimResult& r) {
  json j = {{"claim", r.claim.id},
            {"family", to_string(r.claim.family)},
            {"source", to_string(r.claim.source)},
            {"status", to_string(r.status)},
            {"target_order", r.claim.target_order},
            {"measured_order", r.measured_order},
            {"order_ok", r.order_ok},
            {"statement", r.claim.statement},
            {"notes", r.notes}};
  if (r.claim.target_group) j["target_group"] = to_string(*r.claim.target_group);
  if (r.fingerprint_ok) j["fingerprint_ok"] = *r.fingerprint_ok;
  if (r.structure_ok) j["structure_ok"] = *r.structure_ok;
  if (r.equality_ok) j["equality_ok"] = *r.equality_ok;
  if (r.measured_order > 0) j["group"] = group_json(r.group);
  return j;
}

}  // namespace c27::io
