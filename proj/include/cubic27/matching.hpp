#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "line.hpp"
#include "permutation.hpp"

namespace c27 {

inline constexpr double kMatchGapRatio = 1e3;
inline constexpr double kMatchMaxDistance = 1e-6;

class MatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum-cost perfect assignment (Hungarian method with potentials).
/// Returns assignment[row] = column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

struct MatchResult {
  Permutation perm;            // moved[i] corresponds to base[perm(i)]
  double max_distance = 0.0;   // worst matched distance
  double min_gap_ratio = 0.0;  // worst second-best / best ratio
};

/// Matches points of one solution set to another by a distance function,
/// enforcing the gap ratio between best and second-best candidates.
template <typename T, typename Dist>
MatchResult match_by_distance(const std::vector<T>& base, const std::vector<T>& moved, Dist dist,
                              double max_distance = kMatchMaxDistance, double gap = kMatchGapRatio) {
  const std::size_t n = base.size();
  if (moved.size() != n) throw MatchError("match: solution counts differ");
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = dist(moved[i], base[j]);
  auto assignment = hungarian(cost);
  MatchResult r;
  r.min_gap_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double best = cost[i][assignment[i]];
    double second = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (static_cast<int>(j) != assignment[i]) second = std::min(second, cost[i][j]);
    r.max_distance = std::max(r.max_distance, best);
    double ratio = second / std::max(best, 1e-300);
    r.min_gap_ratio = std::min(r.min_gap_ratio, ratio);
  }
  if (r.max_distance > max_distance)
    throw MatchError("match: best distance " + std::to_string(r.max_distance) + " too large");
  if (r.min_gap_ratio < gap)
    throw MatchError("match: ambiguous matching, gap ratio " + std::to_string(r.min_gap_ratio));
  r.perm = Permutation::from_images(assignment);
  return r;
}

inline MatchResult match_lines(const std::vector<Line>& base, const std::vector<Line>& moved) {
  return match_by_distance(base, moved, [](const Line& a, const Line& b) { return line_distance(a, b); });
}

}  // namespace c27
