#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linesolver.hpp"
#include "matching.hpp"
#include "schlafli.hpp"
#include "surfaces.hpp"

namespace c27 {

class TrackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LoopKind { Plain, Petal, RandomPolygon };

inline std::string to_string(LoopKind k) {
  switch (k) {
    case LoopKind::Plain: return "plain";
    case LoopKind::Petal: return "petal";
    case LoopKind::RandomPolygon: return "random_polygon";
  }
  return "plain";
}

struct LoopSpec {
  FamilyName family = FamilyName::Generic20;
  Params basepoint;
  std::vector<Params> waypoints;  // first and last equal the basepoint
  LoopKind kind = LoopKind::Plain;
  std::optional<Complex> puncture;  // petal only
  double radius = 0.0;              // petal only
  std::uint64_t seed = 0;           // random polygons only
};

/// A path from the basepoint to an image point whose surface is identified
/// with the base surface by M: F_base o M is proportional to F_end, so M
/// carries lines of the end surface to lines of the base surface.
struct TwistedLoopSpec {
  FamilyName family = FamilyName::Generic20;
  std::vector<Params> path;  // basepoint first
  Mat4 identification = Mat4::Identity();
  std::string description;
};

struct TrackedPermutation {
  Permutation perm;       // on canonical labels
  Permutation slot_perm;  // on solver slots
  double max_corrector_residual = 0.0;
  double min_separation = 0.0;
  double max_match_distance = 0.0;
  double min_gap_ratio = 0.0;
  double identification_residual = 0.0;
  int retracks = 0;
  std::string description;
};

struct LoopTrackOptions {
  TrackerOptions tracker{};
  int refinement_levels = 3;  // retracking a segment with max step / 4 per level
};

inline double parameter_distance(const Params& a, const Params& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

struct PathTrackResult {
  std::vector<Line> lines;
  double max_residual = 0.0;
  double min_separation = std::numeric_limits<double>::infinity();
  int retracks = 0;
};

/// Continues the 27 lines along the polygonal parameter path.
inline PathTrackResult track_lines_along(const FamilySpec& fam, const std::vector<Params>& path,
                                         const std::vector<Line>& start, const LoopTrackOptions& opt = {}) {
  PathTrackResult r;
  r.lines = start;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    if (parameter_distance(path[k], path[k + 1]) == 0.0) continue;
    Coeffs20 from = fam.surface_coefficients(path[k]);
    Coeffs20 to = fam.surface_coefficients(path[k + 1]);
    TrackerOptions topt = opt.tracker;
    SegmentResult seg;
    for (int level = 0; level <= opt.refinement_levels; ++level) {
      seg = track_lines_segment(r.lines, from, to, topt);
      if (seg.ok) break;
      ++r.retracks;
      topt.max_step *= 0.25;
      topt.initial_step = std::min(topt.initial_step, topt.max_step);
    }
    if (!seg.ok) throw TrackError("segment " + std::to_string(k) + " failed: " + seg.failure);
    r.lines = std::move(seg.lines);
    r.max_residual = std::max(r.max_residual, seg.max_residual);
    r.min_separation = std::min(r.min_separation, seg.min_separation);
  }
  return r;
}

/// Monodromy permutation of a closed loop: sheet i ends on base slot perm(i).
inline TrackedPermutation track_loop(const LoopSpec& loop, const SolveReport& base,
                                     const schlafli::SchlafliLabeling& labeling, const LoopTrackOptions& opt = {}) {
  if (loop.waypoints.size() < 2 || parameter_distance(loop.waypoints.front(), loop.basepoint) > 0.0 ||
      parameter_distance(loop.waypoints.back(), loop.basepoint) > 0.0)
    throw TrackError("track_loop: loop must start and end at the basepoint");
  FamilySpec fam = make_family(loop.family);
  auto path = track_lines_along(fam, loop.waypoints, base.lines, opt);
  MatchResult m = match_lines(base.lines, path.lines);
  TrackedPermutation t;
  t.slot_perm = m.perm;
  t.perm = labeling.to_labels(m.perm);
  t.max_corrector_residual = path.max_residual;
  t.min_separation = std::min(path.min_separation, base.min_pairwise_distance);
  t.max_match_distance = m.max_distance;
  t.min_gap_ratio = m.min_gap_ratio;
  t.retracks = path.retracks;
  t.description = to_string(loop.kind);
  return t;
}

/// Permutation of a twisted loop: continue along the path, carry the end
/// lines back by the identification, and match to the base lines.
inline TrackedPermutation track_twisted_loop(const TwistedLoopSpec& spec, const SolveReport& base,
                                             const schlafli::SchlafliLabeling& labeling,
                                             const LoopTrackOptions& opt = {}) {
  if (spec.path.empty()) throw TrackError("track_twisted_loop: empty path");
  FamilySpec fam = make_family(spec.family);
  CubicForm f_base = fam.surface(spec.path.front());
  CubicForm f_end = fam.surface(spec.path.back());
  require_projective_matrix(spec.identification);
  double res = proportionality_residual<4>(f_base.composed_coefficients(spec.identification), f_end.coefficients()).first;
  if (res > kSymmetryResidual)
    throw TrackError("track_twisted_loop: identification residual " + std::to_string(res));
  auto path = track_lines_along(fam, spec.path, base.lines, opt);
  std::vector<Line> carried;
  carried.reserve(path.lines.size());
  for (const auto& l : path.lines) carried.push_back(l.transformed(spec.identification));
  MatchResult m = match_lines(base.lines, carried);
  TrackedPermutation t;
  t.slot_perm = m.perm;
  t.perm = labeling.to_labels(m.perm);
  t.max_corrector_residual = path.max_residual;
  t.min_separation = std::min(path.min_separation, base.min_pairwise_distance);
  t.max_match_distance = m.max_distance;
  t.min_gap_ratio = m.min_gap_ratio;
  t.identification_residual = res;
  t.retracks = path.retracks;
  t.description = spec.description;
  return t;
}

struct PetalOptions {
  int circle_points = 64;
  int detour_points = 16;
  std::optional<double> radius;  // default: 1e-2 times the distance to the nearest other puncture
};

namespace detail {
/// Polyline from a to b that bypasses the given points on their left side
/// (relative to the direction of travel) with semicircles of the given radii.
inline std::vector<Complex> detoured_segment(Complex a, Complex b, const std::vector<std::pair<Complex, double>>& avoid,
                                             int arc_points) {
  Complex dir = b - a;
  double len = std::abs(dir);
  std::vector<Complex> out{a};
  if (len == 0.0) return out;
  dir /= len;
  std::vector<std::pair<double, std::pair<Complex, double>>> hits;
  for (const auto& [q, r] : avoid) {
    double proj = std::real((q - a) * std::conj(dir));
    double off = std::abs(std::imag((q - a) * std::conj(dir)));
    if (proj > 0.0 && proj < len && off < r) hits.push_back({proj, {q, r}});
  }
  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (const auto& [proj, qr] : hits) {
    auto [q, r] = qr;
    // pass q on the left: arc from q - r dir through q + i r dir to q + r dir
    for (int k = 0; k <= arc_points; ++k) {
      double th = kPi * (1.0 - double(k) / arc_points);
      out.push_back(q + r * dir * std::polar(1.0, th));
    }
  }
  return out;
}
}  // namespace detail

class PetalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One loop per puncture: out to the circle of the given radius around it,
/// once around counterclockwise, and back along the same path. Other
/// punctures near the approach path are bypassed on the same side both ways.
inline std::vector<std::vector<Complex>> petal_loops(Complex basepoint, const std::vector<Complex>& punctures,
                                                     const PetalOptions& opt = {}) {
  std::vector<double> radii(punctures.size());
  for (std::size_t i = 0; i < punctures.size(); ++i) {
    if (std::abs(punctures[i] - basepoint) == 0.0) throw PetalError("petal_loops: basepoint is a puncture");
    double nearest = std::abs(punctures[i] - basepoint);
    for (std::size_t j = 0; j < punctures.size(); ++j) {
      if (j == i) continue;
      double d = std::abs(punctures[i] - punctures[j]);
      if (d == 0.0) throw PetalError("petal_loops: repeated puncture");
      nearest = std::min(nearest, d);
    }
    radii[i] = opt.radius ? *opt.radius : 1e-2 * nearest;
  }
  for (std::size_t i = 0; i < punctures.size(); ++i)
    for (std::size_t j = i + 1; j < punctures.size(); ++j)
      if (std::abs(punctures[i] - punctures[j]) < 2.0 * std::max(radii[i], radii[j]))
        throw PetalError("petal_loops: punctures closer than twice the radius");

  std::vector<std::size_t> order(punctures.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::arg(punctures[a] - basepoint) < std::arg(punctures[b] - basepoint);
  });

  std::vector<std::vector<Complex>> loops;
  for (std::size_t i : order) {
    Complex p = punctures[i];
    double r = radii[i];
    Complex u = (basepoint - p) / std::abs(basepoint - p);
    Complex entry = p + r * u;
    std::vector<std::pair<Complex, double>> avoid;
    for (std::size_t j = 0; j < punctures.size(); ++j)
      if (j != i) avoid.push_back({punctures[j], 2.0 * radii[j]});
    auto out = detail::detoured_segment(basepoint, entry, avoid, opt.detour_points);
    std::vector<Complex> loop = out;
    loop.push_back(entry);
    for (int k = 1; k < opt.circle_points; ++k) loop.push_back(p + r * u * std::polar(1.0, 2.0 * kPi * k / opt.circle_points));
    loop.push_back(entry);
    for (auto it = out.rbegin(); it != out.rend(); ++it) loop.push_back(*it);
    loops.push_back(std::move(loop));
  }
  return loops;
}

inline LoopSpec petal_loop_spec(FamilyName family, Complex basepoint, const std::vector<Complex>& waypoints,
                                Complex puncture, double radius) {
  LoopSpec l;
  l.family = family;
  l.basepoint = {basepoint};
  for (auto w : waypoints) l.waypoints.push_back({w});
  l.kind = LoopKind::Petal;
  l.puncture = puncture;
  l.radius = radius;
  return l;
}

/// Triangle loop base -> base + scale g1 -> base + scale g2 -> base with
/// Gaussian g1, g2.
inline LoopSpec random_polygon_loop(FamilyName family, const Params& basepoint, std::uint64_t seed, double scale = 1.0,
                                    int vertices = 2) {
  Rng rng(seed);
  LoopSpec l;
  l.family = family;
  l.basepoint = basepoint;
  l.kind = LoopKind::RandomPolygon;
  l.seed = seed;
  l.waypoints.push_back(basepoint);
  for (int v = 0; v < vertices; ++v) {
    Params p = basepoint;
    for (auto& x : p) x += scale * rng.gaussian();
    l.waypoints.push_back(p);
  }
  l.waypoints.push_back(basepoint);
  return l;
}

/// The loop traversed backwards.
inline LoopSpec reversed(LoopSpec l) {
  std::reverse(l.waypoints.begin(), l.waypoints.end());
  return l;
}

/// First loop followed by the second (same basepoint).
inline LoopSpec concatenated(const LoopSpec& a, const LoopSpec& b) {
  LoopSpec l = a;
  l.kind = LoopKind::Plain;
  l.waypoints.insert(l.waypoints.end(), b.waypoints.begin() + 1, b.waypoints.end());
  return l;
}

/// Each segment split into `factor` equal pieces.
inline LoopSpec refined(const LoopSpec& a, int factor) {
  LoopSpec l = a;
  l.waypoints.clear();
  for (std::size_t k = 0; k + 1 < a.waypoints.size(); ++k)
    for (int j = 0; j < factor; ++j) {
      Params p = a.waypoints[k];
      for (std::size_t i = 0; i < p.size(); ++i)
        p[i] += (a.waypoints[k + 1][i] - a.waypoints[k][i]) * (double(j) / factor);
      l.waypoints.push_back(p);
    }
  l.waypoints.push_back(a.waypoints.back());
  return l;
}

}  // namespace c27
