#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace c27 {

/// Degree-3 monomials in N variables as ascending index triples, in
/// graded-lex order: for N = 4 this is x^3, x^2y, x^2z, x^2w, xy^2, xyz, ...,
/// w^3 with (x, y, z, w) = (0, 1, 2, 3).
template <int N>
inline const std::vector<std::array<int, 3>>& cubic_monomials() {
  static const auto table = [] {
    std::vector<std::array<int, 3>> out;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j)
        for (int k = j; k < N; ++k) out.push_back({i, j, k});
    return out;
  }();
  return table;
}

template <int N>
inline constexpr int kCubicMonomialCount = N * (N + 1) * (N + 2) / 6;

/// Number of distinct orderings of an index triple.
inline int triple_multiplicity(const std::array<int, 3>& m) {
  if (m[0] == m[1] && m[1] == m[2]) return 1;
  if (m[0] == m[1] || m[1] == m[2]) return 3;
  return 6;
}

template <int N>
inline std::string monomial_name(const std::array<int, 3>& m) {
  static const char* vars = N == 4 ? "xyzw" : "xyz";
  std::string s;
  for (int v = 0; v < N; ++v) {
    int e = 0;
    for (int idx : m) e += idx == v;
    if (e == 0) continue;
    s += vars[v];
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

/// Symmetric 3-tensor T with F(v) = T(v, v, v). Gradient is 3 T(v, v, .)
/// and the Hessian matrix is 6 T(v, ., .).
template <int N>
class SymTensor {
 public:
  using Vec = Eigen::Matrix<Complex, N, 1>;
  using Mat = Eigen::Matrix<Complex, N, N>;
  using Coeffs = Eigen::Matrix<Complex, kCubicMonomialCount<N>, 1>;

  SymTensor() { t_.fill(Complex{0.0, 0.0}); }

  static SymTensor from_coefficients(const Coeffs& c) {
    SymTensor s;
    const auto& mons = cubic_monomials<N>();
    for (std::size_t m = 0; m < mons.size(); ++m) {
      auto idx = mons[m];
      Complex share = c(static_cast<int>(m)) / static_cast<double>(triple_multiplicity(idx));
      std::array<int, 3> p = idx;
      do {
        s.at(p[0], p[1], p[2]) = share;
      } while (std::next_permutation(p.begin(), p.end()));
    }
    return s;
  }

  Coeffs coefficients() const {
    Coeffs c;
    const auto& mons = cubic_monomials<N>();
    for (std::size_t m = 0; m < mons.size(); ++m) {
      auto idx = mons[m];
      c(static_cast<int>(m)) = at(idx[0], idx[1], idx[2]) * static_cast<double>(triple_multiplicity(idx));
    }
    return c;
  }

  Complex& at(int i, int j, int k) { return t_[(i * N + j) * N + k]; }
  const Complex& at(int i, int j, int k) const { return t_[(i * N + j) * N + k]; }

  /// Matrix T(v, ., .).
  Mat contract(const Vec& v) const {
    Mat a = Mat::Zero();
    for (int i = 0; i < N; ++i) {
      if (v(i) == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) a(j, k) += v(i) * at(i, j, k);
    }
    return a;
  }

  Complex operator()(const Vec& u, const Vec& v, const Vec& w) const {
    return u.transpose() * contract(v) * w;
  }
  Complex evaluate(const Vec& v) const { return (*this)(v, v, v); }
  Vec gradient(const Vec& v) const {
    Mat a = contract(v);
    return 3.0 * (a * v);
  }
  Mat hessian(const Vec& v) const { return 6.0 * contract(v); }

  /// Tensor of F o M, i.e. T'(u, v, w) = T(Mu, Mv, Mw).
  SymTensor transformed(const Mat& m) const {
    SymTensor a, b, c;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int z = 0; z < N; ++z) {
          Complex s{0.0, 0.0};
          for (int k = 0; k < N; ++k) s += at(i, j, k) * m(k, z);
          a.at(i, j, z) = s;
        }
    for (int i = 0; i < N; ++i)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < N; ++z) {
          Complex s{0.0, 0.0};
          for (int j = 0; j < N; ++j) s += a.at(i, j, z) * m(j, y);
          b.at(i, y, z) = s;
        }
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y)
        for (int z = 0; z < N; ++z) {
          Complex s{0.0, 0.0};
          for (int i = 0; i < N; ++i) s += b.at(i, y, z) * m(i, x);
          c.at(x, y, z) = s;
        }
    return c;
  }

  SymTensor operator+(const SymTensor& o) const {
    SymTensor r;
    for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = t_[i] + o.t_[i];
    return r;
  }
  SymTensor operator-(const SymTensor& o) const {
    SymTensor r;
    for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = t_[i] - o.t_[i];
    return r;
  }
  SymTensor operator*(Complex s) const {
    SymTensor r;
    for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = t_[i] * s;
    return r;
  }

 private:
  std::array<Complex, N * N * N> t_;
};

class FormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cubic form in N variables, coefficients scaled so the largest has
/// modulus 1.
template <int N>
class Form {
 public:
  using Coeffs = typename SymTensor<N>::Coeffs;
  using Vec = typename SymTensor<N>::Vec;
  using Mat = typename SymTensor<N>::Mat;
  static constexpr int kMonomials = kCubicMonomialCount<N>;

  Form() = default;

  explicit Form(const Coeffs& raw) {
    double m = raw.cwiseAbs().maxCoeff();
    if (!(m > 0.0) || !std::isfinite(m)) throw FormError("cubic form is identically zero");
    coeffs_ = raw / m;
    tensor_ = SymTensor<N>::from_coefficients(coeffs_);
  }

  static Form from_vector(const std::vector<Complex>& c) {
    if (static_cast<int>(c.size()) != kMonomials) throw FormError("cubic form: wrong coefficient count");
    Coeffs v;
    for (int i = 0; i < kMonomials; ++i) v(i) = c[i];
    return Form(v);
  }

  const Coeffs& coefficients() const noexcept { return coeffs_; }
  const SymTensor<N>& tensor() const noexcept { return tensor_; }
  Complex coefficient(int i, int j, int k) const {
    std::array<int, 3> m{i, j, k};
    std::sort(m.begin(), m.end());
    const auto& mons = cubic_monomials<N>();
    for (std::size_t t = 0; t < mons.size(); ++t)
      if (mons[t] == m) return coeffs_(static_cast<int>(t));
    return {};
  }

  Complex operator()(const Vec& v) const { return tensor_.evaluate(v); }
  Vec gradient(const Vec& v) const { return tensor_.gradient(v); }
  Mat hessian(const Vec& v) const { return tensor_.hessian(v); }

  /// Coefficients of F o M (points v -> M v), not normalized.
  Coeffs composed_coefficients(const Mat& m) const { return tensor_.transformed(m).coefficients(); }
  Form composed(const Mat& m) const { return Form(composed_coefficients(m)); }

 private:
  Coeffs coeffs_ = Coeffs::Zero();
  SymTensor<N> tensor_;
};

using CubicForm = Form<4>;
using PlaneCubicForm = Form<3>;
using Coeffs20 = CubicForm::Coeffs;
using Coeffs10 = PlaneCubicForm::Coeffs;

/// Smallest relative residual of F o M against a multiple of G:
/// min over lambda of |F o M - lambda G| / |G|. Returns the residual and
/// the optimal lambda.
template <int N>
inline std::pair<double, Complex> proportionality_residual(const typename Form<N>::Coeffs& fm,
                                                           const typename Form<N>::Coeffs& g) {
  Complex gg = g.squaredNorm();
  Complex lambda = g.dot(fm) / gg;  // conj(g) . fm
  double scale = std::max(fm.norm(), g.norm() * std::abs(lambda));
  double res = (fm - lambda * g).norm() / std::max(scale, 1e-300);
  return {res, lambda};
}

/// Fermat surface x^3 + y^3 + z^3 + w^3.
inline Coeffs20 fermat_coefficients() {
  Coeffs20 c = Coeffs20::Zero();
  const auto& mons = cubic_monomials<4>();
  for (std::size_t m = 0; m < mons.size(); ++m)
    if (mons[m][0] == mons[m][2]) c(static_cast<int>(m)) = 1.0;
  return c;
}

inline int monomial_index4(int i, int j, int k) {
  std::array<int, 3> m{i, j, k};
  std::sort(m.begin(), m.end());
  const auto& mons = cubic_monomials<4>();
  for (std::size_t t = 0; t < mons.size(); ++t)
    if (mons[t] == m) return static_cast<int>(t);
  throw FormError("bad monomial");
}

}  // namespace c27
