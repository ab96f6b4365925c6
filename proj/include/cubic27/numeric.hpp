#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace c27 {

using Complex = std::complex<double>;
using Vec3 = Eigen::Matrix<Complex, 3, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;
using Vec6 = Eigen::Matrix<Complex, 6, 1>;
using Mat3 = Eigen::Matrix<Complex, 3, 3>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;

inline constexpr double kPi = 3.14159265358979323846;

/// Primitive cube root of unity exp(2 pi i / 3).
inline Complex zeta3() { return std::polar(1.0, 2.0 * kPi / 3.0); }

/// Deterministic random source used everywhere randomness enters.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Complex gaussian() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }
  Complex unit_phase() { return std::polar(1.0, uniform(0.0, 2.0 * kPi)); }
  std::uint64_t next() { return engine_(); }
  std::mt19937_64& engine() { return engine_; }

  template <int N>
  Eigen::Matrix<Complex, N, 1> gaussian_vector() {
    Eigen::Matrix<Complex, N, 1> v;
    for (int i = 0; i < N; ++i) v(i) = gaussian();
    return v;
  }

  /// Haar-distributed unitary matrix (QR of a complex Gaussian matrix with
  /// the phases of R's diagonal divided out).
  template <int N>
  Eigen::Matrix<Complex, N, N> unitary() {
    Eigen::Matrix<Complex, N, N> g;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) g(i, j) = gaussian();
    Eigen::HouseholderQR<Eigen::Matrix<Complex, N, N>> qr(g);
    Eigen::Matrix<Complex, N, N> q = qr.householderQ();
    Eigen::Matrix<Complex, N, N> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int j = 0; j < N; ++j) {
      Complex d = r(j, j);
      if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace c27
