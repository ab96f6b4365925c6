#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubic_form.hpp"
#include "line.hpp"
#include "matching.hpp"
#include "path_tracker.hpp"

namespace c27 {

inline constexpr double kLineResidualTolerance = 1e-10;
inline constexpr double kMinSeparation = 1e-6;

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line equations in the chart spanned by P = (1, 0, a, c), Q = (0, 1, b, d):
/// the four coefficients T(P,P,P), T(P,P,Q), T(P,Q,Q), T(Q,Q,Q) of F
/// restricted to the line, for the tensor T(s) = T0 + s dT.
struct LineChartSystem {
  SymTensor<4> t0, dt;

  static Complex bil(const Vec4& u, const Vec4& v) { return (u.array() * v.array()).sum(); }

  static void points(const Vec4& x, Vec4& p, Vec4& q) {
    p << 1.0, 0.0, x(0), x(2);
    q << 0.0, 1.0, x(1), x(3);
  }

  void evaluate(const Vec4& x, double s, Vec4& h, Mat4& hx, Vec4& hs) const {
    SymTensor<4> t = t0 + dt * Complex{s, 0.0};
    Vec4 p, q;
    points(x, p, q);
    Mat4 ap = t.contract(p), aq = t.contract(q);
    Vec4 gp = ap * p, gq = aq * q, m = ap * q;
    h << bil(gp, p), bil(gp, q), bil(gq, p), bil(gq, q);
    hx << 3.0 * gp(2), 0.0, 3.0 * gp(3), 0.0,  //
        2.0 * m(2), gp(2), 2.0 * m(3), gp(3),  //
        gq(2), 2.0 * m(2), gq(3), 2.0 * m(3),  //
        0.0, 3.0 * gq(2), 0.0, 3.0 * gq(3);
    Mat4 dp = dt.contract(p), dq = dt.contract(q);
    Vec4 dgp = dp * p, dgq = dq * q;
    hs << bil(dgp, p), bil(dgp, q), bil(dgq, p), bil(dgq, q);
  }
};

/// Chart coordinates (a, b, c, d) of a line in the frame whose columns are B
/// (B unitary). Returns false when the line is not visible in the chart.
inline bool line_to_chart(const Line& l, const Mat4& b, Vec4& x) {
  Eigen::Matrix<Complex, 4, 2> v;
  v.col(0) = b.adjoint() * l.point0();
  v.col(1) = b.adjoint() * l.point1();
  v.col(0).normalize();
  v.col(1) -= v.col(0) * v.col(0).dot(v.col(1));
  v.col(1).normalize();
  Eigen::Matrix<Complex, 2, 2> m = v.topRows<2>();
  if (std::abs(m.determinant()) < 1e-6) return false;
  Eigen::Matrix<Complex, 4, 2> w = v * m.inverse();
  x << w(2, 0), w(2, 1), w(3, 0), w(3, 1);
  return x.allFinite();
}

inline Line chart_to_line(const Vec4& x, const Mat4& b) {
  Vec4 p, q;
  LineChartSystem::points(x, p, q);
  return Line::through(b * p, b * q);
}

/// Smallest pairwise Plücker distance.
inline double min_pairwise_distance(const std::vector<Line>& lines) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) d = std::min(d, line_distance(lines[i], lines[j]));
  return d;
}

struct SegmentResult {
  bool ok = false;
  std::vector<Line> lines;
  double max_residual = 0.0;
  double min_separation = 0.0;
  int path_failures = 0;
  std::string failure;
};

/// Unitary frame whose first two columns span the line, so the line sits at
/// the origin of the chart.
inline Mat4 adapted_frame(const Line& l) {
  Eigen::Matrix<Complex, 4, 2> v;
  v.col(0) = l.point0();
  v.col(1) = l.point1();
  Eigen::HouseholderQR<Eigen::Matrix<Complex, 4, 2>> qr(v);
  return qr.householderQ();
}

inline constexpr double kRechartNorm = 3.0;

/// Continues one line along T(s) = T0 + s dT (original coordinates),
/// moving to a freshly adapted chart whenever the chart coordinates grow.
inline TrackResult<4> track_line(const Line& start, const SymTensor<4>& t0, const SymTensor<4>& dt,
                                 const TrackerOptions& opt, Line& end, int max_recharts = 10000) {
  Line cur = start;
  double s = 0.0;
  TrackResult<4> tr;
  for (int k = 0; k <= max_recharts; ++k) {
    Mat4 b = adapted_frame(cur);
    LineChartSystem sys{t0.transformed(b), dt.transformed(b)};
    tr = track_path<4>(sys, Vec4::Zero(), opt, s, kRechartNorm);
    if (tr.x.allFinite()) cur = chart_to_line(tr.x, b);
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

/// Continues every line along the straight segment from the surface with
/// coefficients `from` to the one with coefficients `to`.
inline SegmentResult track_lines_segment(const std::vector<Line>& lines, const Coeffs20& from, const Coeffs20& to,
                                         const TrackerOptions& opt = {}) {
  const SymTensor<4> t0 = SymTensor<4>::from_coefficients(from);
  const SymTensor<4> dt = SymTensor<4>::from_coefficients(to) - t0;
  SegmentResult r;
  r.lines.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Line end;
    TrackResult<4> tr;
    try {
      tr = track_line(lines[i], t0, dt, opt, end);
    } catch (const NumericalDegeneracy& e) {
      tr.ok = false;
      tr.failure = e.what();
    }
    if (!tr.ok) {
      ++r.path_failures;
      r.failure = "path " + std::to_string(i) + ": " + tr.failure;
      return r;
    }
    r.max_residual = std::max(r.max_residual, tr.residual);
    r.lines.push_back(end);
  }
  r.min_separation = min_pairwise_distance(r.lines);
  if (r.min_separation < kMinSeparation) {
    r.failure = "sheet collision, separation " + std::to_string(r.min_separation);
    return r;
  }
  r.ok = true;
  return r;
}

/// Largest scale-normalized |F| at random points of the given lines.
inline double certify_lines(const CubicForm& form, const std::vector<Line>& lines, Rng& rng, int samples = 5) {
  double worst = 0.0;
  for (const auto& l : lines)
    for (int k = 0; k < samples; ++k) {
      Vec4 pt = l.point_at(rng.gaussian());
      worst = std::max(worst, std::abs(form(pt)));
    }
  return worst;  // coefficients are normalized to max modulus 1
}

struct SolveOptions {
  int max_attempts = 6;
  TrackerOptions tracker{};
};

struct SolveReport {
  std::vector<Line> lines;
  double max_residual = 0.0;           // chart-system residual after polish
  double certification_residual = 0.0;  // |F| at random points of the lines
  double min_pairwise_distance = 0.0;
  int path_failures = 0;
  int attempts = 0;
  std::uint64_t seed = 0;
};

/// Lines on a cubic surface by straight-line homotopy from gamma times the
/// Fermat cubic. Retries with a fresh gamma on failure.
inline SolveReport solve_lines(const CubicForm& form, std::uint64_t seed, const SolveOptions& opt = {}) {
  Rng rng(seed);
  SolveReport rep;
  rep.seed = seed;
  const auto start = fermat_start_lines();
  std::string last_failure;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    rep.attempts = attempt + 1;
    Complex gamma = rng.unit_phase();
    SegmentResult seg = track_lines_segment(start, gamma * fermat_coefficients(), form.coefficients(), opt.tracker);
    rep.path_failures += seg.path_failures;
    if (!seg.ok) {
      last_failure = seg.failure;
      continue;
    }
    double cert = certify_lines(form, seg.lines, rng);
    if (cert > kLineResidualTolerance) {
      last_failure = "certification residual " + std::to_string(cert);
      continue;
    }
    rep.lines = std::move(seg.lines);
    rep.max_residual = seg.max_residual;
    rep.certification_residual = cert;
    rep.min_pairwise_distance = seg.min_separation;
    return rep;
  }
  throw SolveError("solve_lines failed after " + std::to_string(opt.max_attempts) +
                   " attempts (probably singular surface): " + last_failure);
}

}  // namespace c27
