#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "numeric.hpp"

namespace c27 {

struct TrackerOptions {
  double initial_step = 0.02;
  double max_step = 0.05;
  double min_step = 1e-14;
  double corrector_tolerance = 1e-10;  // relative to 1 + |x|
  int max_corrector_iterations = 3;
  double max_norm = 1e8;
  double polish_tolerance = 1e-14;
  int polish_iterations = 10;
  int max_steps = 200000;
};

template <int D>
struct TrackResult {
  bool ok = false;
  Eigen::Matrix<Complex, D, 1> x;
  bool interrupted = false;  // stopped early because |x| exceeded the recharting bound
  double s = 0.0;            // parameter reached
  double residual = 0.0;     // |H(x, 1)| after polish
  double last_update = 0.0;  // last Newton update norm during polish
  double min_step_used = 1.0;
  int steps = 0;
  int rejections = 0;
  std::string failure;
};

/// Predictor-corrector continuation of a square system H(x, s) = 0 from
/// s_begin to 1. The system provides
///   void evaluate(const Vec& x, double s, Vec& h, Mat& hx, Vec& hs) const;
/// Predictor: classical RK4 on dx/ds = -Hx^{-1} Hs. Corrector: Newton with
/// contraction checks. Steps halve on rejection and grow after three
/// consecutive accepts. When |x| exceeds `rechart_norm` the run stops with
/// `interrupted` set so the caller can change coordinates and resume.
template <int D, typename System>
TrackResult<D> track_path(const System& sys, Eigen::Matrix<Complex, D, 1> x, const TrackerOptions& opt = {},
                          double s_begin = 0.0, double rechart_norm = std::numeric_limits<double>::infinity()) {
  using Vec = Eigen::Matrix<Complex, D, 1>;
  using Mat = Eigen::Matrix<Complex, D, D>;
  TrackResult<D> r;
  Vec h, hs;
  Mat hx;

  auto tangent = [&](const Vec& y, double s, Vec& out) {
    sys.evaluate(y, s, h, hx, hs);
    Eigen::PartialPivLU<Mat> lu(hx);
    out = -lu.solve(hs);
    return out.allFinite();
  };

  // Returns true on converged Newton at parameter s; y is updated in place.
  auto correct = [&](Vec& y, double s, double predictor_size) {
    double prev = 0.0;
    for (int it = 0; it < opt.max_corrector_iterations; ++it) {
      sys.evaluate(y, s, h, hx, hs);
      Eigen::PartialPivLU<Mat> lu(hx);
      Vec dx = -lu.solve(h);
      if (!dx.allFinite()) return false;
      double n = dx.norm();
      double tol = opt.corrector_tolerance * (1.0 + y.norm());
      if (it == 0 && n > std::max(0.1 * predictor_size, tol)) return false;
      if (it > 0 && n > tol && n > 0.5 * prev) return false;
      y += dx;
      if (n <= tol) return true;
      prev = n;
    }
    return false;
  };

  {
    Vec y = x;
    // Start points are exact up to rounding; a few Newton steps tidy them.
    for (int it = 0; it < 3; ++it) {
      sys.evaluate(y, s_begin, h, hx, hs);
      Vec dx = -Eigen::PartialPivLU<Mat>(hx).solve(h);
      if (!dx.allFinite()) break;
      y += dx;
      if (dx.norm() < opt.polish_tolerance * (1.0 + y.norm())) break;
    }
    if (y.allFinite() && (y - x).norm() < 1e-6 * (1.0 + x.norm())) x = y;
  }

  double s = s_begin;
  double step = opt.initial_step;
  int streak = 0;
  Vec k1, k2, k3, k4;
  while (s < 1.0) {
    if (++r.steps > opt.max_steps) {
      r.failure = "step limit";
      r.x = x;
      return r;
    }
    step = std::min(step, 1.0 - s);
    bool ok = tangent(x, s, k1) && tangent(x + 0.5 * step * k1, s + 0.5 * step, k2) &&
              tangent(x + 0.5 * step * k2, s + 0.5 * step, k3) && tangent(x + step * k3, s + step, k4);
    Vec y = x;
    if (ok) {
      Vec delta = (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      y = x + delta;
      double s_next = (1.0 - s <= step) ? 1.0 : s + step;
      ok = correct(y, s_next, delta.norm()) && y.norm() < opt.max_norm;
      if (ok) {
        x = y;
        s = s_next;
        r.min_step_used = std::min(r.min_step_used, step);
        if (++streak >= 3) {
          step = std::min(2.0 * step, opt.max_step);
          streak = 0;
        }
        if (s < 1.0 && x.norm() > rechart_norm) {
          r.interrupted = true;
          r.s = s;
          r.x = x;
          return r;
        }
        continue;
      }
    }
    ++r.rejections;
    streak = 0;
    step *= 0.5;
    if (step < opt.min_step) {
      r.failure = x.norm() > 0.1 * opt.max_norm ? "path diverged" : "step size underflow";
      r.x = x;
      r.s = s;
      return r;
    }
  }
  r.s = 1.0;

  for (int it = 0; it < opt.polish_iterations; ++it) {
    sys.evaluate(x, 1.0, h, hx, hs);
    Vec dx = -Eigen::PartialPivLU<Mat>(hx).solve(h);
    if (!dx.allFinite()) break;
    x += dx;
    r.last_update = dx.norm();
    if (r.last_update < opt.polish_tolerance * (1.0 + x.norm())) break;
  }
  sys.evaluate(x, 1.0, h, hx, hs);
  r.residual = h.norm();
  r.x = x;
  r.ok = x.allFinite();
  if (!r.ok) r.failure = "non-finite endpoint";
  return r;
}

}  // namespace c27
