#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "matching.hpp"
#include "monodromy.hpp"
#include "named_groups.hpp"
#include "path_tracker.hpp"

namespace c27 {

using Vec2 = Eigen::Matrix<Complex, 2, 1>;
using Mat2 = Eigen::Matrix<Complex, 2, 2>;

inline constexpr double kFlexResidualTolerance = 1e-10;
inline constexpr double kFlexMinSeparation = 1e-6;
inline constexpr double kCollinearTolerance = 1e-8;

class FlexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int monomial_index3(int i, int j, int k) {
  std::array<int, 3> m{i, j, k};
  std::sort(m.begin(), m.end());
  const auto& mons = cubic_monomials<3>();
  return static_cast<int>(std::find(mons.begin(), mons.end(), m) - mons.begin());
}

/// x^3 + y^3 + z^3 - 3k xyz.
inline PlaneCubicForm hesse_form(Complex k) {
  if (std::abs(k * k * k - 1.0) < 1e-12) throw FormError("hesse_form: k^3 = 1 gives a singular cubic");
  Coeffs10 c = Coeffs10::Zero();
  c(monomial_index3(0, 0, 0)) = 1.0;
  c(monomial_index3(1, 1, 1)) = 1.0;
  c(monomial_index3(2, 2, 2)) = 1.0;
  c(monomial_index3(0, 1, 2)) = -3.0 * k;
  return PlaneCubicForm(c);
}

/// Raw coefficients of det(d^2 F) for the tensor t.
inline Coeffs10 hessian_coefficients(const SymTensor<3>& t) {
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  Coeffs10 c = Coeffs10::Zero();
  for (int p = 0; p < 6; ++p) {
    double sign = p < 3 ? 1.0 : -1.0;
    const auto& s = perms[p];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d)
          c(monomial_index3(a, b, d)) += sign * 216.0 * t.at(0, s[0], a) * t.at(1, s[1], b) * t.at(2, s[2], d);
  }
  return c;
}

inline PlaneCubicForm hessian_form(const PlaneCubicForm& f) { return PlaneCubicForm(hessian_coefficients(f.tensor())); }

inline Mat3 adjugate(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r(i, j) = a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1);
    }
  return r;
}

inline double projective_distance3(const Vec3& u, const Vec3& v) {
  Vec3 a = u.normalized(), b = v.normalized();
  Complex ip = b.dot(a);
  Complex phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex{1.0, 0.0};
  return (a - phase * b).norm();
}

/// The nine base points of the Hesse pencil.
inline std::vector<Vec3> hesse_flexes() {
  std::vector<Vec3> out;
  for (int i = 0; i < 3; ++i) {
    Complex g = std::pow(zeta3(), i);
    out.push_back(Vec3(0.0, 1.0, -g));
    out.push_back(Vec3(-g, 0.0, 1.0));
    out.push_back(Vec3(1.0, -g, 0.0));
  }
  return out;
}

/// {F, det Hess F} at v = B (1, u1, u2) along T(s) = T0 + s dT.
struct FlexChartSystem {
  SymTensor<3> t0, dt;
  Mat3 frame;

  Vec3 point(const Vec2& u) const { return frame * Vec3(1.0, u(0), u(1)); }

  void evaluate(const Vec2& u, double s, Vec2& h, Mat2& hx, Vec2& hs) const {
    SymTensor<3> t = t0 + dt * Complex{s, 0.0};
    Vec3 v = point(u);
    Mat3 tv = t.contract(v);
    Mat3 a = 6.0 * tv;
    Mat3 adj = adjugate(a);
    Vec3 g = tv * v;
    h << (g.transpose() * v)(0), a.determinant();
    for (int j = 0; j < 2; ++j) {
      Vec3 bj = frame.col(j + 1);
      hx(0, j) = 3.0 * (g.transpose() * bj)(0);
      hx(1, j) = (adj * (6.0 * t.contract(bj))).trace();
    }
    Mat3 dv = dt.contract(v);
    hs << (v.transpose() * dv * v)(0), (adj * (6.0 * dv)).trace();
  }
};

inline Mat3 adapted_frame3(const Vec3& v) {
  Eigen::HouseholderQR<Vec3> qr(v);
  return qr.householderQ();
}

/// Continues one flex along T0 + s dT with recharting.
inline TrackResult<2> track_flex(const Vec3& start, const SymTensor<3>& t0, const SymTensor<3>& dt,
                                 const TrackerOptions& opt, Vec3& end, int max_recharts = 10000) {
  Vec3 cur = start.normalized();
  double s = 0.0;
  TrackResult<2> tr;
  for (int k = 0; k <= max_recharts; ++k) {
    FlexChartSystem sys{t0, dt, adapted_frame3(cur)};
    tr = track_path<2>(sys, Vec2::Zero(), opt, s, kRechartNorm);
    if (tr.x.allFinite()) cur = sys.point(tr.x).normalized();
    if (!tr.interrupted) {
      end = cur;
      return tr;
    }
    s = tr.s;
  }
  tr.ok = false;
  tr.failure = "recharting limit";
  return tr;
}

inline double min_pairwise_distance(const std::vector<Vec3>& pts) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, projective_distance3(pts[i], pts[j]));
  return d;
}

struct FlexSegmentResult {
  bool ok = false;
  std::vector<Vec3> points;
  double max_residual = 0.0;
  double min_separation = 0.0;
  std::string failure;
};

inline FlexSegmentResult track_flexes_segment(const std::vector<Vec3>& pts, const Coeffs10& from, const Coeffs10& to,
                                              const TrackerOptions& opt = {}) {
  const SymTensor<3> t0 = SymTensor<3>::from_coefficients(from);
  const SymTensor<3> dt = SymTensor<3>::from_coefficients(to) - t0;
  FlexSegmentResult r;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec3 end;
    TrackResult<2> tr = track_flex(pts[i], t0, dt, opt, end);
    if (!tr.ok) {
      r.failure = "flex path " + std::to_string(i) + ": " + tr.failure;
      return r;
    }
    r.max_residual = std::max(r.max_residual, tr.residual);
    r.points.push_back(end);
  }
  r.min_separation = min_pairwise_distance(r.points);
  if (r.min_separation < kFlexMinSeparation) {
    r.failure = "flex collision, separation " + std::to_string(r.min_separation);
    return r;
  }
  r.ok = true;
  return r;
}

struct FlexSet {
  std::vector<Vec3> points;
  std::vector<double> residuals;  // max(|F|, |Hess F|) at the unit representative, normalized forms
  double max_residual = 0.0;
  double min_separation = 0.0;
  int attempts = 0;
};

inline FlexSet certify_flexes(const PlaneCubicForm& f, std::vector<Vec3> pts) {
  PlaneCubicForm h = hessian_form(f);
  FlexSet s;
  for (auto& p : pts) {
    p.normalize();
    double r = std::max(std::abs(f(p)), std::abs(h(p)));
    s.residuals.push_back(r);
    s.max_residual = std::max(s.max_residual, r);
  }
  s.points = std::move(pts);
  s.min_separation = min_pairwise_distance(s.points);
  return s;
}

/// The nine flexes by continuation from gamma times the Fermat plane cubic.
inline FlexSet solve_flexes(const PlaneCubicForm& f, std::uint64_t seed, const SolveOptions& opt = {}) {
  Rng rng(seed);
  const auto start = hesse_flexes();
  const Coeffs10 fermat = hesse_form(0.0).coefficients();
  std::string last;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Complex gamma = rng.unit_phase();
    auto seg = track_flexes_segment(start, gamma * fermat, f.coefficients(), opt.tracker);
    if (!seg.ok) {
      last = seg.failure;
      continue;
    }
    FlexSet s = certify_flexes(f, seg.points);
    s.attempts = attempt + 1;
    if (s.max_residual > kFlexResidualTolerance) {
      last = "flex residual " + std::to_string(s.max_residual);
      continue;
    }
    return s;
  }
  throw FlexError("solve_flexes failed (probably singular cubic): " + last);
}

/// Triples of points spanning a line, by the normalized determinant.
inline std::vector<std::array<int, 3>> collinear_triples(const std::vector<Vec3>& pts, double tol = kCollinearTolerance) {
  std::vector<std::array<int, 3>> out;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Mat3 m;
        m << pts[i].normalized(), pts[j].normalized(), pts[k].normalized();
        if (std::abs(m.determinant()) < tol) out.push_back({i, j, k});
      }
  return out;
}

inline bool preserves_triples(const Permutation& p, const std::vector<std::array<int, 3>>& triples) {
  std::set<std::array<int, 3>> set(triples.begin(), triples.end());
  for (auto t : triples) {
    std::array<int, 3> img{p(t[0]), p(t[1]), p(t[2])};
    std::sort(img.begin(), img.end());
    if (!set.count(img)) return false;
  }
  return true;
}

/// Affine coordinates over F3 from the line structure: o -> (0,0),
/// a -> (1,0), b -> (0,1), and the third point of a line is minus the sum
/// of the other two. Returns point -> x + 3y, or nullopt when inconsistent.
inline std::optional<std::vector<int>> affine_coordinates(const std::vector<std::array<int, 3>>& triples, int o, int a,
                                                          int b) {
  int third[9][9];
  for (auto& row : third) std::fill(std::begin(row), std::end(row), -1);
  for (auto t : triples)
    for (int i = 0; i < 3; ++i) third[t[i]][t[(i + 1) % 3]] = third[t[(i + 1) % 3]][t[i]] = t[(i + 2) % 3];
  if (o == a || o == b || a == b || third[o][a] == b) return std::nullopt;
  std::array<std::optional<std::pair<int, int>>, 9> c;
  c[o] = {0, 0};
  c[a] = {1, 0};
  c[b] = {0, 1};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int p = 0; p < 9; ++p)
      for (int q = p + 1; q < 9; ++q) {
        if (!c[p] || !c[q]) continue;
        int r = third[p][q];
        if (r < 0) return std::nullopt;
        std::pair<int, int> v{(6 - c[p]->first - c[q]->first) % 3, (6 - c[p]->second - c[q]->second) % 3};
        if (!c[r]) {
          c[r] = v;
          changed = true;
        } else if (*c[r] != v) {
          return std::nullopt;
        }
      }
  }
  std::vector<int> out(9);
  std::vector<bool> used(9, false);
  for (int p = 0; p < 9; ++p) {
    if (!c[p]) return std::nullopt;
    out[p] = c[p]->first + 3 * c[p]->second;
    if (used[out[p]]) return std::nullopt;
    used[out[p]] = true;
  }
  return out;
}

struct Asl2Identification {
  bool equal = false;
  std::vector<int> bijection;  // flex -> x + 3y
  int frames_tried = 0;
};

/// Searches collinearity-derived bijections under which the group equals
/// ASL2(F3) on F3^2.
inline Asl2Identification identify_asl2(const PermGroup& g, const std::vector<std::array<int, 3>>& triples) {
  Asl2Identification r;
  const PermGroup asl = asl2_f3();
  for (int o = 0; o < 9; ++o)
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) {
        auto bij = affine_coordinates(triples, o, a, b);
        if (!bij) continue;
        ++r.frames_tried;
        Permutation beta = Permutation::from_images(*bij);
        PermGroup moved = conjugate(g, beta);
        if (same_group(moved, asl)) {
          r.equal = true;
          r.bijection = *bij;
          return r;
        }
        if (g.order() != asl.order()) return r;  // no frame can help
      }
  return r;
}

struct FlexLoopRecord {
  std::vector<Params> waypoints;
  std::optional<Permutation> perm;
  std::string error;
  double max_residual = 0.0;
  double min_separation = 0.0;
  double max_match_distance = 0.0;
  double min_gap_ratio = 0.0;
  int retracks = 0;
  std::uint64_t order_after = 1;
};

struct FlexMonodromyReport {
  Params basepoint;
  FlexSet base;
  std::vector<std::array<int, 3>> triples;
  std::vector<FlexLoopRecord> loops;
  PlateauResult plateau;
  PermGroup group;
  bool preserves_collinearity = false;
  bool transitive = false;
  std::uint64_t point_stabilizer_order = 0;
  Asl2Identification asl2;
  std::vector<Verdict> verdicts;
  bool inconclusive = true;
};

inline Coeffs10 to_coeffs10(const Params& p) {
  if (p.size() != 10) throw FamilyError("plane cubic parameters must have 10 entries");
  Coeffs10 c;
  for (int i = 0; i < 10; ++i) c(i) = p[i];
  return c;
}

/// Continues the flexes along a polygon in coefficient space and matches
/// the end points to `base`.
inline FlexLoopRecord track_flex_loop(const std::vector<Params>& waypoints, const FlexSet& base,
                                      const LoopTrackOptions& opt = {}) {
  FlexLoopRecord rec;
  rec.waypoints = waypoints;
  std::vector<Vec3> pts = base.points;
  rec.min_separation = base.min_separation;
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    if (parameter_distance(waypoints[k], waypoints[k + 1]) == 0.0) continue;
    TrackerOptions topt = opt.tracker;
    FlexSegmentResult seg;
    for (int level = 0; level <= opt.refinement_levels; ++level) {
      seg = track_flexes_segment(pts, to_coeffs10(waypoints[k]), to_coeffs10(waypoints[k + 1]), topt);
      if (seg.ok) break;
      ++rec.retracks;
      topt.max_step *= 0.25;
      topt.initial_step = std::min(topt.initial_step, topt.max_step);
    }
    if (!seg.ok) throw TrackError("flex segment " + std::to_string(k) + " failed: " + seg.failure);
    pts = std::move(seg.points);
    rec.max_residual = std::max(rec.max_residual, seg.max_residual);
    rec.min_separation = std::min(rec.min_separation, seg.min_separation);
  }
  MatchResult m = match_by_distance(base.points, pts, projective_distance3);
  rec.perm = m.perm;
  rec.max_match_distance = m.max_distance;
  rec.min_gap_ratio = m.min_gap_ratio;
  return rec;
}

/// Random triangle loops in the space of plane cubics until the flex
/// monodromy group stabilizes.
inline FlexMonodromyReport flex_monodromy_campaign(int budget, std::uint64_t seed, Params basepoint = {},
                                                   const LoopTrackOptions& opt = {}) {
  FlexMonodromyReport rep;
  rep.basepoint = basepoint.empty() ? make_family(FamilyName::FlexP9).default_basepoint : basepoint;
  Rng rng(seed);
  PlaneCubicForm f(to_coeffs10(rep.basepoint));
  rep.base = solve_flexes(f, rng.next());
  rep.triples = collinear_triples(rep.base.points);
  if (rep.triples.size() != 12)
    throw FlexError("expected 12 collinear triples, found " + std::to_string(rep.triples.size()));

  auto next_loop = [&](int) -> std::optional<Permutation> {
    LoopSpec spec = random_polygon_loop(FamilyName::FlexP9, rep.basepoint, rng.next());
    FlexLoopRecord rec;
    try {
      rec = track_flex_loop(spec.waypoints, rep.base, opt);
    } catch (const std::exception& e) {
      rec.waypoints = spec.waypoints;
      rec.perm.reset();
      rec.error = e.what();
    }
    rep.loops.push_back(rec);
    return rec.perm;
  };
  rep.plateau = run_plateau(9, budget, next_loop);
  for (std::size_t i = 0; i < rep.loops.size(); ++i) rep.loops[i].order_after = rep.plateau.order_history[i];
  rep.group = PermGroup(9, rep.plateau.generators);
  rep.inconclusive = !rep.plateau.plateau;
  rep.preserves_collinearity = std::all_of(rep.group.generators().begin(), rep.group.generators().end(),
                                           [&](const Permutation& p) { return preserves_triples(p, rep.triples); });
  rep.transitive = is_transitive(rep.group);
  rep.point_stabilizer_order = point_stabilizer(rep.group, 0).order();
  rep.asl2 = identify_asl2(rep.group, rep.triples);
  rep.verdicts.push_back({"collinearity_preserved", rep.preserves_collinearity, "12 Hesse lines"});
  rep.verdicts.push_back({"transitive", rep.transitive, ""});
  return rep;
}

}  // namespace c27
