#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph_iso.hpp"
#include "numeric.hpp"

namespace c27 {

inline constexpr double kMeetTolerance = 1e-8;
inline constexpr double kDisjointTolerance = 1e-4;

class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plücker vector in the order p01, p02, p03, p12, p13, p23.
inline Vec6 plucker_of(const Vec4& p, const Vec4& q) {
  static constexpr int I[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int J[6] = {1, 2, 3, 2, 3, 3};
  Vec6 v;
  for (int k = 0; k < 6; ++k) v(k) = p(I[k]) * q(J[k]) - p(J[k]) * q(I[k]);
  return v;
}

/// Unit norm, first entry of non-negligible modulus real positive.
inline Vec6 normalize_plucker(Vec6 v) {
  double n = v.norm();
  if (!(n > 0.0)) throw NumericalDegeneracy("plucker vector of a degenerate line");
  v /= n;
  for (int k = 0; k < 6; ++k)
    if (std::abs(v(k)) > 1e-9) {
      v *= std::conj(v(k)) / std::abs(v(k));
      break;
    }
  return v;
}

inline Complex plucker_quadric(const Vec6& p) { return p(0) * p(5) - p(1) * p(4) + p(2) * p(3); }

/// Symmetric bilinear pairing; vanishes exactly when the two lines meet.
inline Complex plucker_pairing(const Vec6& p, const Vec6& q) {
  return p(0) * q(5) - p(1) * q(4) + p(2) * q(3) + p(5) * q(0) - p(4) * q(1) + p(3) * q(2);
}

/// min over theta of |p - e^{i theta} q| for unit vectors, computed without
/// cancellation.
inline double plucker_distance(const Vec6& p, const Vec6& q) {
  Complex ip = q.dot(p);  // conj(q) . p
  Complex phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex{1.0, 0.0};
  return (p - phase * q).norm();
}

/// A line in P^3. The chart names two free coordinates (f0, f1); the line is
/// spanned by the points with (x_f0, x_f1) = (1, 0) and (0, 1), whose other
/// two coordinates are (a, c) and (b, d) respectively.
struct Line {
  std::array<int, 2> chart{0, 1};
  std::array<Complex, 4> params{};  // a, b, c, d
  Vec6 plucker = Vec6::Zero();

  std::array<int, 2> dependent() const {
    std::array<int, 2> d{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != chart[0] && i != chart[1]) d[k++] = i;
    return d;
  }

  Vec4 point0() const {
    Vec4 v = Vec4::Zero();
    auto d = dependent();
    v(chart[0]) = 1.0;
    v(d[0]) = params[0];
    v(d[1]) = params[2];
    return v;
  }
  Vec4 point1() const {
    Vec4 v = Vec4::Zero();
    auto d = dependent();
    v(chart[1]) = 1.0;
    v(d[0]) = params[1];
    v(d[1]) = params[3];
    return v;
  }

  /// Line spanned by two points; the chart is the coordinate pair with the
  /// largest Plücker minor.
  static Line through(const Vec4& p, const Vec4& q) {
    Vec6 pl = plucker_of(p, q);
    static constexpr int I[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int J[6] = {1, 2, 3, 2, 3, 3};
    int best = 0;
    for (int k = 1; k < 6; ++k)
      if (std::abs(pl(k)) > std::abs(pl(best))) best = k;
    if (!(std::abs(pl(best)) > 0.0)) throw NumericalDegeneracy("points do not span a line");
    Line l;
    l.chart = {I[best], J[best]};
    Eigen::Matrix<Complex, 4, 2> pq;
    pq.col(0) = p;
    pq.col(1) = q;
    Eigen::Matrix<Complex, 2, 2> m;
    m.row(0) = pq.row(l.chart[0]);
    m.row(1) = pq.row(l.chart[1]);
    Eigen::Matrix<Complex, 4, 2> w = pq * m.inverse();
    auto d = l.dependent();
    l.params = {w(d[0], 0), w(d[0], 1), w(d[1], 0), w(d[1], 1)};
    l.plucker = normalize_plucker(plucker_of(l.point0(), l.point1()));
    return l;
  }

  /// Image under points v -> M v.
  Line transformed(const Mat4& m) const { return through(m * point0(), m * point1()); }

  /// Point (1 - t) P0 + t P1 on the line, unit normalized.
  Vec4 point_at(Complex t) const {
    Vec4 v = (1.0 - t) * point0() + t * point1();
    return v / v.norm();
  }
};

inline double line_distance(const Line& a, const Line& b) { return plucker_distance(a.plucker, b.plucker); }

/// True when the lines meet, false when clearly disjoint; throws in the
/// ambiguous band between the two tolerances.
inline bool lines_meet(const Line& a, const Line& b) {
  double v = std::abs(plucker_pairing(a.plucker, b.plucker));
  if (v < kMeetTolerance) return true;
  if (v > kDisjointTolerance) return false;
  throw NumericalDegeneracy("lines_meet: pairing " + std::to_string(v) + " in the ambiguous band");
}

/// Intersection point of two meeting lines, unit normalized.
inline Vec4 intersection_point(const Line& a, const Line& b) {
  Mat4 m;
  m.col(0) = a.point0();
  m.col(1) = a.point1();
  m.col(2) = -b.point0();
  m.col(3) = -b.point1();
  Eigen::JacobiSVD<Mat4> svd(m, Eigen::ComputeFullV);
  Vec4 k = svd.matrixV().col(3);
  Vec4 pt = k(0) * a.point0() + k(1) * a.point1();
  return pt / pt.norm();
}

/// Distance between projective points, invariant under rescaling.
inline double projective_distance(const Vec4& u, const Vec4& v) {
  Vec4 a = u / u.norm(), b = v / v.norm();
  Complex ip = b.dot(a);
  Complex phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex{1.0, 0.0};
  return (a - phase * b).norm();
}

/// The 27 lines of x^3 + y^3 + z^3 + w^3, ordered by family then (a, b):
/// {x + z^a y = 0, z + z^b w = 0}, {x + z^a z = 0, y + z^b w = 0},
/// {x + z^a w = 0, y + z^b z = 0} where z is a primitive cube root of 1.
inline std::vector<Line> fermat_start_lines() {
  std::vector<Line> out;
  const Complex z = zeta3();
  auto zp = [&](int k) { return std::pow(z, k); };
  for (int fam = 0; fam < 3; ++fam)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Vec4 p = Vec4::Zero(), q = Vec4::Zero();
        // pairs: family 0: (x,y),(z,w); 1: (x,z),(y,w); 2: (x,w),(y,z)
        const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        const int* pr = pairs[fam];
        p(pr[0]) = -zp(a);
        p(pr[1]) = 1.0;
        q(pr[2]) = -zp(b);
        q(pr[3]) = 1.0;
        out.push_back(Line::through(p, q));
      }
  return out;
}

/// Meeting graph of a set of lines.
inline BitGraph meet_graph(const std::vector<Line>& lines) {
  BitGraph g(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (lines_meet(lines[i], lines[j])) g.add_edge(i, j);
  return g;
}

class IncidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incidence graph of 27 solved lines; must be the Schläfli graph.
inline BitGraph incidence_graph(const std::vector<Line>& lines) {
  if (lines.size() != 27) throw IncidenceError("incidence_graph: expected 27 lines");
  BitGraph g = meet_graph(lines);
  auto p = strongly_regular_parameters(g);
  if (!p || !(*p == SrgParameters{27, 10, 1, 5}))
    throw IncidenceError("incidence_graph: graph is not srg(27,10,1,5)");
  return g;
}

}  // namespace c27
