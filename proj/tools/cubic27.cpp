#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cubic27/claims.hpp"
#include "cubic27/json_io.hpp"
#include "cubic27/schlafli.hpp"

using namespace c27;
using io::json;

namespace {

struct Common {
  std::string family = "Generic20";
  std::vector<std::string> params;
  std::uint64_t seed = 1;
  std::optional<int> budget;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_family = true) {
  if (with_family)
    cmd->add_option("--family", c.family, "Generic20, S4, S3, S3xC2, C2even, FlexP9 (solve also accepts Fermat)");
  cmd->add_option("--param", c.params, "parameter values as re,im (repeatable) or one JSON array");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--budget", c.budget, "loop budget");
  cmd->add_option("--out", c.out, "write the JSON report here instead of stdout");
}

Params parse_param_list(const std::vector<std::string>& raw) {
  if (raw.size() == 1 && !raw[0].empty() && raw[0].front() == '[') {
    json j = json::parse(raw[0]);
    if (j.is_array() && !j.empty() && j[0].is_array() && j[0].size() == 2 && j.size() != 2) return io::parse_params(j);
    if (j.is_array() && std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_array(); }))
      return io::parse_params(j);
    if (j.is_array() && std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_number(); }))
      return io::parse_params(j);
    return {io::parse_complex(j)};
  }
  Params p;
  for (const auto& s : raw) p.push_back(io::parse_complex(s));
  return p;
}

Params resolve_basepoint(const FamilySpec& fam, const std::vector<std::string>& raw) {
  if (raw.empty()) return fam.default_basepoint;
  Params p = parse_param_list(raw);
  if (static_cast<int>(p.size()) != fam.parameter_dim)
    throw std::invalid_argument("family " + to_string(fam.name) + " takes " + std::to_string(fam.parameter_dim) +
                                " parameters, got " + std::to_string(p.size()));
  return p;
}

void emit(const json& j, const std::string& out) {
  std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::string tmp = out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << text;
  }
  std::filesystem::rename(tmp, out);
}

CubicForm surface_for(const Common& c, Params& used) {
  if (c.family == "Fermat") return CubicForm(fermat_coefficients());
  FamilySpec fam = make_family(parse_family(c.family));
  used = resolve_basepoint(fam, c.params);
  return fam.surface(used);
}

int cmd_solve(const Common& c, bool check) {
  Params used;
  CubicForm f = surface_for(c, used);
  SolveReport s = solve_lines(f, c.seed);
  json j = io::envelope(check ? "schlafli-check" : "solve");
  j["family"] = c.family;
  j["parameters"] = io::params_json(used);
  j["coefficients"] = io::vector_json(f.coefficients());
  bool ok = true;
  try {
    BitGraph g = incidence_graph(s.lines);
    auto lab = schlafli::label_lines(g);
    j["solve"] = io::solve_json(s, &lab);
    auto srg = strongly_regular_parameters(g);
    j["srg"] = srg ? json::array({srg->n, srg->k, srg->lambda, srg->mu}) : json(nullptr);
    j["triangles"] = schlafli::triangles(g).size();
    if (check) {
      std::uint64_t aut = schlafli::count_automorphisms(g);
      j["automorphisms"] = aut;
      j["weyl_e6_order"] = schlafli::weyl_e6().order();
      ok = srg && schlafli::triangles(g).size() == 45 && aut == 51840 && schlafli::weyl_e6().order() == 51840;
    }
  } catch (const std::exception& e) {
    j["solve"] = io::solve_json(s);
    j["error"] = e.what();
    ok = false;
  }
  j["pass"] = ok;
  emit(j, c.out);
  return ok ? 0 : 1;
}

int cmd_track(const Common& c, const std::string& waypoints, bool random_loop) {
  FamilyName name = parse_family(c.family);
  if (name == FamilyName::FlexP9) {
    FamilySpec fam = make_family(name);
    Params base = resolve_basepoint(fam, c.params);
    FlexSet flexes = solve_flexes(PlaneCubicForm(to_coeffs10(base)), c.seed);
    std::vector<Params> w{base, base};
    if (random_loop) w = random_polygon_loop(name, base, c.seed + 1).waypoints;
    if (!waypoints.empty()) w = {};
    if (!waypoints.empty())
      for (const auto& p : json::parse(waypoints)) w.push_back(io::parse_params(p));
    auto rec = track_flex_loop(w, flexes);
    json j = io::envelope("track");
    j["family"] = c.family;
    j["waypoints"] = io::waypoints_json(w);
    j["perm"] = io::permutation_json(*rec.perm);
    j["cycles"] = rec.perm->to_string();
    j["max_corrector_residual"] = rec.max_residual;
    j["min_gap_ratio"] = rec.min_gap_ratio;
    emit(j, c.out);
    return 0;
  }
  FamilySpec fam = make_family(name);
  LoopSpec loop;
  loop.family = name;
  loop.basepoint = resolve_basepoint(fam, c.params);
  loop.waypoints = {loop.basepoint, loop.basepoint};
  if (random_loop) loop = random_polygon_loop(name, loop.basepoint, c.seed + 1);
  if (!waypoints.empty()) {
    loop.waypoints.clear();
    for (const auto& p : json::parse(waypoints)) loop.waypoints.push_back(io::parse_params(p));
  }
  SolveReport base = solve_lines(fam.surface(loop.basepoint), c.seed);
  auto lab = schlafli::label_lines(incidence_graph(base.lines));
  TrackedPermutation t = track_loop(loop, base, lab);
  json j = io::envelope("track");
  j["family"] = c.family;
  j["waypoints"] = io::waypoints_json(loop.waypoints);
  j["tracked"] = io::tracked_json(t);
  emit(j, c.out);
  return 0;
}

int cmd_campaign(const Common& c) {
  FamilyName name = parse_family(c.family);
  int budget = c.budget.value_or(default_budget(name));
  json j = io::envelope("campaign");
  bool ok = false;
  if (name == FamilyName::FlexP9) {
    FamilySpec fam = make_family(name);
    auto r = flex_monodromy_campaign(budget, c.seed, resolve_basepoint(fam, c.params));
    j["report"] = io::flex_monodromy_json(r);
    ok = !r.inconclusive && std::all_of(r.verdicts.begin(), r.verdicts.end(), [](const Verdict& v) { return v.pass; });
  } else {
    Campaign camp;
    camp.family = name;
    camp.loop_budget = budget;
    camp.seed = c.seed;
    if (!c.params.empty()) camp.basepoint = resolve_basepoint(make_family(name), c.params);
    auto r = run_campaign(camp);
    j["report"] = io::monodromy_json(r);
    ok = !r.inconclusive && std::all_of(r.verdicts.begin(), r.verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
  j["pass"] = ok;
  emit(j, c.out);
  return ok ? 0 : 1;
}

int cmd_verify_all(const Common& c, const std::string& claims) {
  std::vector<std::string> ids;
  if (!claims.empty()) {
    std::stringstream ss(claims);
    for (std::string id; std::getline(ss, id, ',');)
      if (!id.empty()) ids.push_back(id);
  }
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.budget = c.budget;
  auto results = verify_claims(ids, opt);
  json j = io::envelope("verify-all");
  j["seed"] = c.seed;
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    arr.push_back(io::claim_json(r));
    all = all && r.status == ClaimStatus::Pass;
    std::cerr << std::left << std::setw(14) << r.claim.id << " " << std::setw(13) << to_string(r.status)
              << " order " << r.measured_order << " (target " << r.claim.target_order << ")\n";
  }
  j["claims"] = arr;
  j["pass"] = all;
  emit(j, c.out);
  return all ? 0 : 1;
}

int cmd_flexes(const Common& c, std::optional<std::string> hesse) {
  json j = io::envelope("flexes");
  Params base;
  if (hesse) {
    Complex k = io::parse_complex(*hesse);
    auto f = hesse_form(k);
    for (int i = 0; i < 10; ++i) base.push_back(f.coefficients()(i));
  } else {
    base = resolve_basepoint(make_family(FamilyName::FlexP9), c.params);
  }
  PlaneCubicForm f(to_coeffs10(base));
  FlexSet s = solve_flexes(f, c.seed);
  j["coefficients"] = io::params_json(base);
  j["flexes"] = io::flex_set_json(s);
  j["collinear_triples"] = collinear_triples(s.points);
  bool ok = collinear_triples(s.points).size() == 12;
  if (c.budget) {
    auto r = flex_monodromy_campaign(*c.budget, c.seed, base);
    j["campaign"] = io::flex_monodromy_json(r);
    ok = ok && !r.inconclusive && r.asl2.equal;
  }
  j["pass"] = ok;
  emit(j, c.out);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lines on cubic surfaces, flexes of plane cubics, and their monodromy groups"};
  app.require_subcommand(1);

  Common solve_c, check_c, track_c, camp_c, verify_c, flex_c;
  auto* solve = app.add_subcommand("solve", "solve for the 27 lines");
  add_common(solve, solve_c);
  auto* check = app.add_subcommand("schlafli-check", "solve and verify the Schläfli structure");
  add_common(check, check_c);

  auto* track = app.add_subcommand("track", "monodromy permutation of one loop");
  add_common(track, track_c);
  std::string waypoints;
  bool random_loop = false;
  track->add_option("--waypoints", waypoints, "JSON array of parameter lists, basepoint first and last");
  track->add_flag("--random-loop", random_loop, "random triangle loop from the seed");

  auto* camp = app.add_subcommand("campaign", "monodromy campaign for one family");
  add_common(camp, camp_c);

  auto* verify = app.add_subcommand("verify-all", "run the claim suite");
  add_common(verify, verify_c, false);
  std::string claims;
  verify->add_option("--claims", claims, "comma-separated claim ids (default: all)");

  auto* flex = app.add_subcommand("flexes", "flexes of a plane cubic, with a monodromy campaign when --budget is set");
  add_common(flex, flex_c, false);
  std::optional<std::string> hesse;
  flex->add_option("--hesse", hesse, "use the Hesse cubic with this k");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(solve_c, false);
    if (*check) return cmd_solve(check_c, true);
    if (*track) return cmd_track(track_c, waypoints, random_loop);
    if (*camp) return cmd_campaign(camp_c);
    if (*verify) return cmd_verify_all(verify_c, claims);
    if (*flex) return cmd_flexes(flex_c, hesse);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
