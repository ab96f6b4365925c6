#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubic_form.hpp"
#include "line.hpp"
#include "linesolver.hpp"
#include "matching.hpp"
#include "schlafli.hpp"

namespace c27 {

inline constexpr double kSymmetryResidual = 1e-10;
inline constexpr double kEckardtTolerance = 1e-8;
inline constexpr double kMatrixConditionLimit = 1e12;

class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejects matrices that are numerically singular.
inline void require_projective_matrix(const Mat4& m) {
  Eigen::JacobiSVD<Mat4> svd(m);
  auto sv = svd.singularValues();
  if (!(sv(3) > 0.0) || sv(0) / sv(3) > kMatrixConditionLimit)
    throw SymmetryError("projective matrix is singular or badly conditioned");
}

namespace detail {
inline void add_term(Coeffs20& c, int i, int j, int k, Complex v) { c(monomial_index4(i, j, k)) += v; }
constexpr int X = 0, Y = 1, Z = 2, W = 3;
}  // namespace detail

/// a x^3 + x(y^2 + z^2 + w^2 - yw - zw) + w(y - z)(w - y - z), unnormalized.
inline Coeffs20 s4_coefficients(Complex a) {
  using namespace detail;
  Coeffs20 c = Coeffs20::Zero();
  add_term(c, X, X, X, a);
  add_term(c, X, Y, Y, 1.0);
  add_term(c, X, Z, Z, 1.0);
  add_term(c, X, W, W, 1.0);
  add_term(c, X, Y, W, -1.0);
  add_term(c, X, Z, W, -1.0);
  // w(y - z)(w - y - z) = y w^2 - z w^2 - y^2 w + z^2 w
  add_term(c, Y, W, W, 1.0);
  add_term(c, Z, W, W, -1.0);
  add_term(c, Y, Y, W, -1.0);
  add_term(c, Z, Z, W, 1.0);
  return c;
}

/// x^3 + y^3 + z^3 + w^3 + (a x + b y) z w, unnormalized.
inline Coeffs20 s3_coefficients(Complex a, Complex b) {
  using namespace detail;
  Coeffs20 c = fermat_coefficients();
  add_term(c, X, Z, W, a);
  add_term(c, Y, Z, W, b);
  return c;
}

inline Coeffs20 s3c2_coefficients(Complex a) { return s3_coefficients(a, a); }

/// x^2 L(y, z, w) + C(y, z, w) with L = l0 y + l1 z + l2 w and C given in the
/// plane-cubic monomial order of (y, z, w).
inline Coeffs20 c2_coefficients(const std::array<Complex, 3>& l, const std::array<Complex, 10>& cubic) {
  using namespace detail;
  Coeffs20 c = Coeffs20::Zero();
  for (int k = 0; k < 3; ++k) add_term(c, X, X, k + 1, l[k]);
  const auto& mons = cubic_monomials<3>();
  for (std::size_t m = 0; m < mons.size(); ++m) add_term(c, mons[m][0] + 1, mons[m][1] + 1, mons[m][2] + 1, cubic[m]);
  return c;
}

class FamilyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline CubicForm family_s4(Complex a) {
  if (std::abs(a) == 0.0) throw FamilyError("family_s4: a = 0 gives a singular surface");
  return CubicForm(s4_coefficients(a));
}
inline CubicForm family_s3(Complex a, Complex b) { return CubicForm(s3_coefficients(a, b)); }
inline CubicForm family_s3c2(Complex a) { return CubicForm(s3c2_coefficients(a)); }
inline CubicForm family_c2(const std::array<Complex, 3>& l, const std::array<Complex, 10>& cubic) {
  return CubicForm(c2_coefficients(l, cubic));
}

inline Mat4 mat4(std::initializer_list<std::initializer_list<Complex>> rows) {
  Mat4 m = Mat4::Zero();
  int i = 0;
  for (auto r : rows) {
    int j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Mat4 permutation_matrix(const std::array<int, 4>& p) {
  // (M v)_i = v_{p[i]}
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 4; ++i) m(i, p[i]) = 1.0;
  return m;
}

/// Symmetry matrices act on points, v -> M v, and satisfy F(M v) = F(v).
inline std::vector<Mat4> s4_symmetries() {
  return {
      mat4({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 1, 1, -1}}),   // (12)
      mat4({{1, 0, 0, 0}, {0, -1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}}),   // (13)
      mat4({{1, 0, 0, 0}, {0, 0, -1, 0}, {0, -1, 0, 0}, {0, -1, -1, 1}}),  // (34)
  };
}

inline std::vector<Mat4> s3_symmetries() {
  const Complex z = zeta3();
  return {
      permutation_matrix({0, 1, 3, 2}),                                  // (12)
      mat4({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, z}, {0, 0, z * z, 0}}),  // (13)
  };
}

inline Mat4 s3c2_involution() { return permutation_matrix({1, 0, 2, 3}); }

inline std::vector<Mat4> s3c2_symmetries() {
  auto g = s3_symmetries();
  g.push_back(s3c2_involution());
  return g;
}

inline Mat4 c2_involution() { return Mat4(Eigen::Vector4cd(-1.0, 1.0, 1.0, 1.0).asDiagonal()); }

/// Coordinate permutations and a cube-root-of-unity scaling of x.
inline std::vector<Mat4> fermat_symmetries() {
  Mat4 scale = Mat4::Identity();
  scale(0, 0) = zeta3();
  return {permutation_matrix({1, 0, 2, 3}), permutation_matrix({1, 2, 3, 0}), scale};
}

inline std::vector<Vec4> s4_eckardt_points() {
  return {Vec4(0, 0, 0, 1), Vec4(0, 1, 0, 0), Vec4(0, 1, 0, 1),
          Vec4(0, 1, 1, 1), Vec4(0, 0, 1, 0), Vec4(0, 0, 1, 1)};
}

inline std::vector<Vec4> s3_eckardt_points() {
  const Complex z = zeta3();
  return {Vec4(0, 0, 1, -1), Vec4(0, 0, 1, -z * z), Vec4(0, 0, 1, -z)};
}

inline std::vector<Vec4> s3c2_eckardt_points() {
  auto p = s3_eckardt_points();
  p.push_back(Vec4(1, -1, 0, 0));
  return p;
}

enum class FamilyName { Generic20, S4, S3, S3xC2, C2even, FlexP9 };

inline const std::map<std::string, FamilyName>& family_table() {
  static const std::map<std::string, FamilyName> t{
      {"Generic20", FamilyName::Generic20}, {"S4", FamilyName::S4},         {"S3", FamilyName::S3},
      {"S3xC2", FamilyName::S3xC2},         {"C2even", FamilyName::C2even}, {"FlexP9", FamilyName::FlexP9},
  };
  return t;
}

inline std::string to_string(FamilyName f) {
  for (const auto& [k, v] : family_table())
    if (v == f) return k;
  return "?";
}

inline FamilyName parse_family(const std::string& s) {
  auto it = family_table().find(s);
  if (it == family_table().end()) throw FamilyError("unknown family: " + s);
  return it->second;
}

using Params = std::vector<Complex>;

/// A parameter family of cubic forms, affine in its parameters. The
/// evaluator returns unnormalized coefficients (20 for surfaces, 10 for the
/// plane family).
struct FamilySpec {
  FamilyName name = FamilyName::Generic20;
  int parameter_dim = 20;
  std::function<Eigen::VectorXcd(const Params&)> evaluator;
  std::vector<Mat4> symmetry_generators;
  std::vector<Params> known_punctures;
  Params default_basepoint;

  Eigen::VectorXcd coefficients(const Params& p) const {
    if (static_cast<int>(p.size()) != parameter_dim)
      throw FamilyError(to_string(name) + ": expected " + std::to_string(parameter_dim) + " parameters");
    return evaluator(p);
  }
  Coeffs20 surface_coefficients(const Params& p) const {
    if (name == FamilyName::FlexP9) throw FamilyError("FlexP9 is a plane-cubic family");
    return coefficients(p);
  }
  CubicForm surface(const Params& p) const { return CubicForm(surface_coefficients(p)); }
};

inline Params cube_roots(Complex c) {
  // the three roots of a^3 = c
  Params r;
  for (int k = 0; k < 3; ++k) r.push_back(std::polar(std::pow(std::abs(c), 1.0 / 3.0), (std::arg(c) + 2.0 * kPi * k) / 3.0));
  return r;
}

/// Singular members of x^3 + y^3 + z^3 + w^3 + (a x + b y) z w.
inline Complex s3_discriminant(Complex a, Complex b) {
  Complex a3 = a * a * a, b3 = b * b * b;
  return (a3 + b3 + 27.0) * (a3 + b3 + 27.0) - 4.0 * a3 * b3;
}

/// Roots t of the S3 discriminant along p + t v, Newton-polished.
inline std::vector<Complex> s3_line_punctures(const Params& p, const Params& v) {
  using Poly = std::vector<Complex>;
  auto mul = [](const Poly& f, const Poly& g) {
    Poly h(f.size() + g.size() - 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    return h;
  };
  auto add = [](Poly f, const Poly& g, Complex s) {
    if (f.size() < g.size()) f.resize(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] += s * g[i];
    return f;
  };
  Poly a{p[0], v[0]}, b{p[1], v[1]};
  Poly a3 = mul(mul(a, a), a), b3 = mul(mul(b, b), b);
  Poly s = add(add(a3, b3, 1.0), Poly{27.0}, 1.0);
  Poly d = add(mul(s, s), mul(a3, b3), -4.0);
  while (d.size() > 1 && std::abs(d.back()) < 1e-14 * std::abs(d.front())) d.pop_back();
  const int n = static_cast<int>(d.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -d[i] / d[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots;
  for (int i = 0; i < n; ++i) {
    Complex t = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      Complex f = 0.0, df = 0.0;
      for (int k = n; k >= 0; --k) {
        df = df * t + f;
        f = f * t + d[k];
      }
      if (df == Complex(0.0)) break;
      t -= f / df;
    }
    roots.push_back(t);
  }
  return roots;
}

inline FamilySpec make_family(FamilyName name) {
  FamilySpec f;
  f.name = name;
  switch (name) {
    case FamilyName::Generic20:
      f.parameter_dim = 20;
      f.evaluator = [](const Params& p) {
        Eigen::VectorXcd c(20);
        for (int i = 0; i < 20; ++i) c(i) = p[i];
        return c;
      };
      f.default_basepoint.assign(20, Complex{});
      {
        Rng rng(20);
        for (auto& v : f.default_basepoint) v = rng.gaussian();
      }
      break;
    case FamilyName::S4:
      f.parameter_dim = 1;
      f.evaluator = [](const Params& p) { return Eigen::VectorXcd(s4_coefficients(p[0])); };
      f.symmetry_generators = s4_symmetries();
      f.known_punctures = {{0.0}, {-0.5}};
      f.default_basepoint = {1.0};
      break;
    case FamilyName::S3:
      f.parameter_dim = 2;
      f.evaluator = [](const Params& p) { return Eigen::VectorXcd(s3_coefficients(p[0], p[1])); };
      f.symmetry_generators = s3_symmetries();
      f.default_basepoint = {Complex{0.3, 0.2}, Complex{-0.1, 0.4}};
      break;
    case FamilyName::S3xC2:
      f.parameter_dim = 1;
      f.evaluator = [](const Params& p) { return Eigen::VectorXcd(s3c2_coefficients(p[0])); };
      f.symmetry_generators = s3c2_symmetries();
      for (auto r : cube_roots(-27.0 / 4.0)) f.known_punctures.push_back({r});
      f.default_basepoint = {1.0};
      break;
    case FamilyName::C2even:
      f.parameter_dim = 13;
      f.evaluator = [](const Params& p) {
        std::array<Complex, 3> l{p[0], p[1], p[2]};
        std::array<Complex, 10> c{};
        for (int i = 0; i < 10; ++i) c[i] = p[3 + i];
        return Eigen::VectorXcd(c2_coefficients(l, c));
      };
      f.symmetry_generators = {c2_involution()};
      f.default_basepoint.assign(13, Complex{});
      {
        Rng rng(13);
        for (auto& v : f.default_basepoint) v = rng.gaussian();
      }
      break;
    case FamilyName::FlexP9:
      f.parameter_dim = 10;
      f.evaluator = [](const Params& p) {
        Eigen::VectorXcd c(10);
        for (int i = 0; i < 10; ++i) c(i) = p[i];
        return c;
      };
      f.default_basepoint.assign(10, Complex{});
      {
        Rng rng(9);
        for (auto& v : f.default_basepoint) v = rng.gaussian();
      }
      break;
  }
  return f;
}

/// Relative residual of F o M against the best multiple of F.
inline double symmetry_residual(const CubicForm& f, const Mat4& m) {
  return proportionality_residual<4>(f.composed_coefficients(m), f.coefficients()).first;
}

/// Permutation of line slots induced by v -> M v: slot i goes to the slot of
/// the line M L_i.
inline MatchResult symmetry_match(const CubicForm& f, const Mat4& m, const std::vector<Line>& lines) {
  require_projective_matrix(m);
  double res = symmetry_residual(f, m);
  if (res > kSymmetryResidual)
    throw SymmetryError("matrix does not preserve the surface, residual " + std::to_string(res));
  std::vector<Line> moved;
  moved.reserve(lines.size());
  for (const auto& l : lines) moved.push_back(l.transformed(m));
  return match_lines(lines, moved);
}

inline Permutation symmetry_permutation(const CubicForm& f, const Mat4& m, const std::vector<Line>& lines) {
  return symmetry_match(f, m, lines).perm;
}

/// Same permutation expressed on canonical labels.
inline Permutation symmetry_permutation(const CubicForm& f, const Mat4& m, const std::vector<Line>& lines,
                                        const schlafli::SchlafliLabeling& labeling) {
  return labeling.to_labels(symmetry_permutation(f, m, lines));
}

struct EckardtPoint {
  Vec4 point;
  std::array<int, 3> slots;
};

/// Points where three of the given lines meet.
inline std::vector<EckardtPoint> eckardt_points(const std::vector<Line>& lines) {
  BitGraph g = meet_graph(lines);
  std::vector<EckardtPoint> out;
  for (const auto& t : schlafli::triangles(g)) {
    Vec4 p01 = intersection_point(lines[t[0]], lines[t[1]]);
    Vec4 p02 = intersection_point(lines[t[0]], lines[t[2]]);
    Vec4 p12 = intersection_point(lines[t[1]], lines[t[2]]);
    if (projective_distance(p01, p02) < kEckardtTolerance && projective_distance(p01, p12) < kEckardtTolerance &&
        projective_distance(p02, p12) < kEckardtTolerance)
      out.push_back({p01, t});
  }
  return out;
}

struct EckardtInvolution {
  Mat4 matrix;
  Vec4 fixed_plane;      // h with h . v = 0 fixed pointwise
  double quadric_residual;  // fit of the polar quadric as (h . v)(t . v)
  double symmetry_residual;
};

/// Reconstructs the involution attached to an Eckardt point e: the polar
/// quadric T(e, v, v) factors as (h . v)(t . v) with t the tangent plane at e,
/// and M = I - 2 e h^T / (h . e) fixes the plane h . v = 0 and the point e.
inline EckardtInvolution eckardt_involution(const CubicForm& f, const Vec4& e) {
  Mat4 s = f.tensor().contract(e);
  Vec4 t = f.gradient(e);
  if (t.norm() < 1e-12) throw SymmetryError("eckardt_involution: point is singular");
  // s_ij = (h_i t_j + t_i h_j) / 2, linear in h
  Eigen::Matrix<Complex, 16, 4> a = Eigen::Matrix<Complex, 16, 4>::Zero();
  Eigen::Matrix<Complex, 16, 1> rhs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int row = 4 * i + j;
      a(row, i) += 0.5 * t(j);
      a(row, j) += 0.5 * t(i);
      rhs(row) = s(i, j);
    }
  Vec4 h = a.colPivHouseholderQr().solve(rhs);
  EckardtInvolution inv;
  inv.fixed_plane = h;
  inv.quadric_residual = (a * h - rhs).norm() / std::max(rhs.norm(), 1e-300);
  Complex he = (h.transpose() * e)(0);
  if (std::abs(he) < 1e-12 * h.norm() * e.norm()) throw SymmetryError("eckardt_involution: point lies on its plane");
  inv.matrix = Mat4::Identity() - 2.0 * e * h.transpose() / he;
  inv.symmetry_residual = symmetry_residual(f, inv.matrix);
  return inv;
}

/// Three projective points are collinear when the 4x3 matrix has rank 2.
inline bool collinear(const Vec4& a, const Vec4& b, const Vec4& c, double tol = 1e-8) {
  Eigen::Matrix<Complex, 4, 3> m;
  m.col(0) = a / a.norm();
  m.col(1) = b / b.norm();
  m.col(2) = c / c.norm();
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 3>> svd(m);
  return svd.singularValues()(2) < tol;
}

struct PunctureCandidate {
  Complex t;            // parameter value on the scanned line
  double metric;        // min pairwise line distance at the best sample
  int refinement_steps;
  double last_step;     // size of the final refinement step
};

struct PunctureScanOptions {
  int samples = 40;
  double dip_fraction = 0.5;  // local minima below this fraction of the largest metric
  double tolerance = 1e-10;
  int max_refinement_steps = 60;
  std::uint64_t seed = 1;
};

/// Locates parameters on the segment z0 -> z1 of a one-parameter path
/// c(t) where the 27 lines degenerate: samples the minimal pairwise line
/// distance (0 where the solve fails), takes its pronounced local minima,
/// and refines each by a secant iteration on the squared chart difference of
/// the nearly colliding pair, which is analytic in t and vanishes at the
/// branch point.
inline std::vector<PunctureCandidate> puncture_scan(const std::function<Coeffs20(Complex)>& path, Complex z0,
                                                    Complex z1, const PunctureScanOptions& opt = {}) {
  Rng rng(opt.seed);
  const Mat4 frame = rng.unitary<4>();
  std::uint64_t solve_seed = rng.next();

  struct Sample {
    Complex t;
    double metric = 0.0;
    std::optional<std::pair<Line, Line>> pair;
  };
  // With `follow`, the pair closest to the previous pair is kept, so the
  // refinement stays on one coalescing pair when several collide together.
  auto sample = [&](Complex t, const std::optional<std::pair<Line, Line>>& follow = std::nullopt) {
    Sample s{t};
    try {
      CubicForm f(path(t));
      auto rep = solve_lines(f, solve_seed++);
      double best = std::numeric_limits<double>::infinity();
      double best_score = best;
      for (std::size_t i = 0; i < rep.lines.size(); ++i)
        for (std::size_t j = i + 1; j < rep.lines.size(); ++j) {
          double d = line_distance(rep.lines[i], rep.lines[j]);
          best = std::min(best, d);
          double score = d;
          if (follow) {
            const auto& [p, q] = *follow;
            score = std::min(line_distance(rep.lines[i], p) + line_distance(rep.lines[j], q),
                             line_distance(rep.lines[i], q) + line_distance(rep.lines[j], p));
          }
          if (score < best_score) {
            best_score = score;
            s.pair = std::make_pair(rep.lines[i], rep.lines[j]);
          }
        }
      s.metric = best;
    } catch (const std::exception&) {
      s.metric = 0.0;
    }
    return s;
  };
  auto g_of = [&](const Sample& s) -> std::optional<Complex> {
    if (!s.pair) return std::nullopt;
    Vec4 x1, x2;
    if (!line_to_chart(s.pair->first, frame, x1) || !line_to_chart(s.pair->second, frame, x2)) return std::nullopt;
    Vec4 d = x1 - x2;
    return (d.array() * d.array()).sum();
  };

  std::vector<Sample> samples;
  for (int k = 0; k <= opt.samples; ++k) samples.push_back(sample(z0 + (z1 - z0) * (double(k) / opt.samples)));
  double top = 0.0;
  for (const auto& s : samples) top = std::max(top, s.metric);

  std::vector<PunctureCandidate> out;
  const int n = static_cast<int>(samples.size());
  for (int k = 0; k < n; ++k) {
    double m = samples[k].metric;
    bool left = k == 0 || m < samples[k - 1].metric;
    bool right = k == n - 1 || m <= samples[k + 1].metric;
    if (!(left && right) || !(m < opt.dip_fraction * top)) continue;

    // secant iteration from the two best neighbors
    int other = (k == 0) ? 1 : (k == n - 1) ? n - 2 : (samples[k - 1].metric < samples[k + 1].metric ? k - 1 : k + 1);
    Sample a = samples[other], b = samples[k];
    if (!b.pair) {
      // the sample itself failed: step halfway toward the neighbor
      b = sample(0.5 * (a.t + b.t));
    }
    if (b.pair) a = sample(a.t, b.pair);
    PunctureCandidate c{b.t, samples[k].metric, 0, std::abs(a.t - b.t)};
    const Complex lo = samples[std::max(k - 1, 0)].t, hi = samples[std::min(k + 1, n - 1)].t;
    const double bracket = std::abs(hi - lo);
    auto in_bracket = [&](Complex t) { return std::abs(t - lo) + std::abs(t - hi) <= bracket * (1.0 + 1e-9); };
    bool escaped = false;
    auto ga = g_of(a), gb = g_of(b);
    for (int it = 0; it < opt.max_refinement_steps && ga && gb; ++it) {
      Complex denom = *gb - *ga;
      if (std::abs(denom) == 0.0) break;
      Complex tn = b.t - *gb * (b.t - a.t) / denom;
      c.refinement_steps = it + 1;
      c.last_step = std::abs(tn - b.t);
      if (!in_bracket(tn)) {
        escaped = true;
        break;
      }
      c.t = tn;
      if (c.last_step < opt.tolerance) break;
      Sample s = sample(tn, b.pair);
      if (!s.pair) break;  // too close to the singular member to solve
      a = b;
      ga = gb;
      b = s;
      gb = g_of(b);
    }
    if (escaped) {
      // golden-section search for the metric minimum on [lo, hi]
      const double r = (std::sqrt(5.0) - 1.0) / 2.0;
      double x0 = 0.0, x1 = 1.0;
      auto at = [&](double x) { return lo + (hi - lo) * x; };
      double m1 = sample(at(x1 - r * (x1 - x0))).metric, m2 = sample(at(x0 + r * (x1 - x0))).metric;
      int it = 0;
      for (; it < opt.max_refinement_steps && (x1 - x0) * bracket > opt.tolerance; ++it) {
        double xa = x1 - r * (x1 - x0), xb = x0 + r * (x1 - x0);
        if (m1 <= m2) {
          x1 = xb;
          m2 = m1;
          m1 = sample(at(x1 - r * (x1 - x0))).metric;
        } else {
          x0 = xa;
          m1 = m2;
          m2 = sample(at(x0 + r * (x1 - x0))).metric;
        }
      }
      c.t = at(0.5 * (x0 + x1));
      c.refinement_steps += it;
      c.last_step = (x1 - x0) * bracket;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace c27
