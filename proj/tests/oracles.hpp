#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

/// Fraction of [lo, hi] within distance r of some centre: length of the union
/// of [c - r, c + r] clipped to [lo, hi], divided by hi - lo.
inline double covered_fraction_1d(std::vector<double> centres, double r, double lo, double hi) {
  std::sort(centres.begin(), centres.end());
  double covered = 0.0, reach = lo;
  for (double c : centres) {
    const double a = std::max(c - r, reach), b = std::min(c + r, hi);
    if (b > a) {
      covered += b - a;
      reach = b;
    }
  }
  return covered / (hi - lo);
}

/// Plain double loop over every point pair; no blocking, no early exit.
inline double brute_nearest(const std::vector<double>& x, const std::vector<std::vector<double>>& pts) {
  double best = INFINITY;
  for (const auto& p : pts) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - p[k]) * (x[k] - p[k]);
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

/// Even-parity sign vectors of {-1/2, 1/2}^d, generated by recursion on the
/// last coordinate (independent of the bit-mask enumeration in the library).
inline void even_vertices(std::size_t d, std::vector<double>& prefix, int parity,
                          std::vector<std::vector<double>>& out) {
  if (prefix.size() == d) {
    if (parity == 0) out.push_back(prefix);
    return;
  }
  for (double s : {-0.5, 0.5}) {
    prefix.push_back(s);
    even_vertices(d, prefix, parity ^ (s < 0 ? 1 : 0), out);
    prefix.pop_back();
  }
}

inline std::vector<std::vector<double>> even_vertices(std::size_t d) {
  std::vector<std::vector<double>> out;
  std::vector<double> prefix;
  even_vertices(d, prefix, 0, out);
  return out;
}

/// Max over a (steps+1)^3 grid of [-1,1]^3 of the distance to the nearest point.
inline double grid_max_nearest_3d(const std::vector<std::vector<double>>& pts, int steps) {
  double worst = 0.0;
  std::vector<double> x(3);
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      for (int k = 0; k <= steps; ++k) {
        x = {-1.0 + 2.0 * i / steps, -1.0 + 2.0 * j / steps, -1.0 + 2.0 * k / steps};
        worst = std::max(worst, brute_nearest(x, pts));
      }
  return worst;
}

/// Fixed-sample mean squared nearest distance, by direct enumeration.
inline double mse_1d(const std::vector<double>& pts, const std::vector<double>& centres) {
  double s = 0.0;
  for (double p : pts) {
    double b = INFINITY;
    for (double c : centres) b = std::min(b, (p - c) * (p - c));
    s += b;
  }
  return s / static_cast<double>(pts.size());
}

/// Kolmogorov-Smirnov statistic of a sample against U[lo, hi].
inline double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    dmax = std::max({dmax, (i + 1) / n - f, f - i / n});
  }
  return dmax;
}

}  // namespace oracle
