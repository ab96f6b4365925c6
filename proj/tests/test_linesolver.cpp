#include <gtest/gtest.h>

#include "cubic27/linesolver.hpp"
#include "cubic27/matching.hpp"
#include "cubic27/schlafli.hpp"
#include "cubic27/surfaces.hpp"

using namespace c27;

namespace {

// Line given by two linear equations, as two spanning points from the kernel.
Line line_from_equations(const Vec4& h1, const Vec4& h2) {
  Eigen::Matrix<Complex, 2, 4> a;
  a.row(0) = h1.transpose();
  a.row(1) = h2.transpose();
  Eigen::FullPivLU<Eigen::Matrix<Complex, 2, 4>> lu(a);
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> k = lu.kernel();
  return Line::through(k.col(0), k.col(1));
}

// Oracle: two lines meet iff their four spanning points are dependent.
bool meet_by_rank(const Line& a, const Line& b) {
  Mat4 m;
  m.col(0) = a.point0() / a.point0().norm();
  m.col(1) = a.point1() / a.point1().norm();
  m.col(2) = b.point0() / b.point0().norm();
  m.col(3) = b.point1() / b.point1().norm();
  Eigen::JacobiSVD<Mat4> svd(m);
  return svd.singularValues()(3) < 1e-9;
}

double on_surface(const CubicForm& f, const Line& l) {
  double worst = 0.0;
  for (double t : {0.0, 0.3, 1.0, -2.0}) worst = std::max(worst, std::abs(f(l.point_at(t))));
  return worst;
}

Coeffs20 random_coeffs(std::uint64_t seed) {
  Rng rng(seed);
  Coeffs20 c;
  for (int i = 0; i < 20; ++i) c(i) = rng.gaussian();
  return c;
}

bool contains_line(const std::vector<Line>& lines, const Line& l) {
  for (const auto& m : lines)
    if (line_distance(m, l) < 1e-8) return true;
  return false;
}

}  // namespace

TEST(Plucker, QuadricAndSelfPairing) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    Vec4 p, q;
    for (int i = 0; i < 4; ++i) p(i) = rng.gaussian(), q(i) = rng.gaussian();
    Line l = Line::through(p, q);
    EXPECT_LT(std::abs(plucker_quadric(l.plucker)), 1e-13);
    EXPECT_LT(std::abs(plucker_pairing(l.plucker, l.plucker)), 1e-13);
    EXPECT_NEAR(l.plucker.norm(), 1.0, 1e-13);
  }
}

TEST(Plucker, MeetExamples) {
  const Complex z = zeta3();
  Line a = line_from_equations(Vec4(1, 1, 0, 0), Vec4(0, 0, 1, 1));
  Line b = line_from_equations(Vec4(1, z, 0, 0), Vec4(0, 0, 1, 1));
  Line c = line_from_equations(Vec4(1, 0, 1, 0), Vec4(0, 1, 0, 1));
  Line d = line_from_equations(Vec4(1, 0, z, 0), Vec4(0, 1, 0, 1));
  EXPECT_TRUE(lines_meet(a, b));
  // a and c share [1:-1:-1:1]
  EXPECT_TRUE(lines_meet(a, c));
  EXPECT_TRUE(meet_by_rank(a, c));
  EXPECT_LT(projective_distance(intersection_point(a, c), Vec4(1, -1, -1, 1)), 1e-12);
  EXPECT_FALSE(lines_meet(a, d));
  EXPECT_FALSE(meet_by_rank(a, d));
  EXPECT_LT(projective_distance(intersection_point(a, b), Vec4(0, 0, 1, -1)), 1e-12);
}

TEST(Plucker, MeetAgreesWithRankOracle) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    Vec4 p, q, r;
    for (int i = 0; i < 4; ++i) p(i) = rng.gaussian(), q(i) = rng.gaussian(), r(i) = rng.gaussian();
    Line a = Line::through(p, q);
    Line meeting = Line::through(p + 0.5 * q, r);
    Line skew = Line::through(r, Vec4(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()));
    EXPECT_EQ(lines_meet(a, meeting), meet_by_rank(a, meeting));
    EXPECT_EQ(lines_meet(a, skew), meet_by_rank(a, skew));
  }
}

TEST(Plucker, AmbiguousBandIsReported) {
  Line a = Line::through(Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1));
  Line b = Line::through(Vec4(1e-6, 0, 1, 0), Vec4(0, 1, 0, 0));
  EXPECT_THROW(lines_meet(a, b), NumericalDegeneracy);
}

TEST(FermatStart, LinesAndIncidence) {
  CubicForm f(fermat_coefficients());
  auto lines = fermat_start_lines();
  ASSERT_EQ(lines.size(), 27u);
  for (const auto& l : lines) EXPECT_LT(on_surface(f, l), 1e-14);
  EXPECT_GT(min_pairwise_distance(lines), 1e-2);
  BitGraph g = incidence_graph(lines);
  EXPECT_EQ(g.edge_count(), 135u);
  EXPECT_EQ(*strongly_regular_parameters(g), (SrgParameters{27, 10, 1, 5}));
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b) EXPECT_EQ(g.adjacent(a, b), meet_by_rank(lines[a], lines[b]));
  EXPECT_TRUE(contains_line(lines, line_from_equations(Vec4(1, 1, 0, 0), Vec4(0, 0, 1, 1))));
}

TEST(Solve, FermatRecoversStartLines) {
  SolveReport s = solve_lines(CubicForm(fermat_coefficients()), 4);
  auto m = match_lines(fermat_start_lines(), s.lines);
  EXPECT_LT(m.max_distance, 1e-10);
}

TEST(Solve, HundredRandomSurfaces) {
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CubicForm f(random_coeffs(1000 + seed));
    SolveReport s = solve_lines(f, seed);
    ASSERT_EQ(s.lines.size(), 27u);
    EXPECT_LT(s.max_residual, 1e-10);
    EXPECT_GT(s.min_pairwise_distance, 1e-6);
    BitGraph g = incidence_graph(s.lines);
    bool ok = strongly_regular_parameters(g) == SrgParameters{27, 10, 1, 5} &&
              schlafli::triangles(g).size() == 45;
    EXPECT_NO_THROW(schlafli::label_lines(g));
    good += ok;
  }
  EXPECT_EQ(good, 100);
}

TEST(Solve, ChartIndependence) {
  CubicForm f(random_coeffs(77));
  SolveReport a = solve_lines(f, 1), b = solve_lines(f, 2), c = solve_lines(f, 3);
  EXPECT_LT(match_lines(a.lines, b.lines).max_distance, 1e-8);
  EXPECT_LT(match_lines(a.lines, c.lines).max_distance, 1e-8);
}

TEST(Solve, S4HasThreeLinesInPlaneXZero) {
  CubicForm f = family_s4(1.0);
  SolveReport s = solve_lines(f, 6);
  int in_plane = 0;
  for (const auto& l : s.lines)
    if (std::abs(l.point0()(0)) < 1e-9 * l.point0().norm() && std::abs(l.point1()(0)) < 1e-9 * l.point1().norm())
      ++in_plane;
  EXPECT_EQ(in_plane, 3);
  EXPECT_TRUE(contains_line(s.lines, line_from_equations(Vec4(1, 0, 0, 0), Vec4(0, 0, 0, 1))));
}

TEST(Solve, S3xC2ContainsStatedLine) {
  SolveReport s = solve_lines(family_s3c2(1.0), 8);
  EXPECT_TRUE(contains_line(s.lines, line_from_equations(Vec4(1, 1, 0, 0), Vec4(0, 0, 1, 1))));
}

TEST(Incidence, DuplicateLineRejected) {
  auto lines = fermat_start_lines();
  Line dup = lines[0];
  dup.plucker(0) += 1e-9;
  lines[1] = dup;
  EXPECT_THROW(incidence_graph(lines), IncidenceError);
}

TEST(Incidence, WrongCountRejected) {
  auto lines = fermat_start_lines();
  lines.pop_back();
  EXPECT_THROW(incidence_graph(lines), IncidenceError);
}
