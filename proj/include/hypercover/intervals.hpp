#pragma once

// Exact binomial confidence intervals.

#include <algorithm>
#include <cstddef>
#include <utility>

#include <boost/math/special_functions/beta.hpp>

namespace hypercover {

/// Two-sided confidence level used for every reported interval.
inline constexpr double kConfidence = 0.99;

/// Clopper-Pearson interval for a binomial proportion with `hits` out of `trials`.
inline std::pair<double, double> clopper_pearson(std::size_t hits, std::size_t trials,
                                                 double confidence = kConfidence) {
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(hits), n = static_cast<double>(trials);
  const double lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2);
  const double hi = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2);
  return {lo, hi};
}

/// P(B <= k) for B ~ Binomial(n, p).
inline double binomial_cdf(std::size_t k, std::size_t n, double p) {
  if (k >= n) return 1.0;
  // P(B <= k) = I_{1-p}(n - k, k + 1)
  return boost::math::ibetac(static_cast<double>(k + 1), static_cast<double>(n - k), p);
}

/// 1-based ranks (lo, hi) such that [X_(lo), X_(hi)] covers the q-quantile of a
/// continuous distribution with probability >= confidence, from n i.i.d. draws.
///
/// lo is the largest rank with P(B < lo) <= alpha/2 and hi the smallest with
/// P(B >= hi) <= alpha/2, where B ~ Binomial(n, q). Ranks are clamped to
/// [1, n]; when the sample is too small for the requested level the interval
/// simply runs to the extreme order statistics.
inline std::pair<std::size_t, std::size_t> order_statistic_ranks(std::size_t n, double q,
                                                                 double confidence = kConfidence) {
  const double tail = (1.0 - confidence) / 2;
  // lo: largest l in [1, n] with cdf(l - 1) <= tail.
  std::size_t a = 1, b = n;
  if (binomial_cdf(0, n, q) > tail) {
    b = 1;
  } else {
    while (a < b) {
      const std::size_t mid = a + (b - a + 1) / 2;
      if (binomial_cdf(mid - 1, n, q) <= tail) a = mid; else b = mid - 1;
    }
  }
  const std::size_t lo = std::max<std::size_t>(a, 1);
  // hi: smallest u in [1, n] with 1 - cdf(u - 1) <= tail.
  a = 1;
  b = n;
  while (a < b) {
    const std::size_t mid = a + (b - a) / 2;
    if (1.0 - binomial_cdf(mid - 1, n, q) <= tail) b = mid; else a = mid + 1;
  }
  return {lo, std::max(a, lo)};
}

}  // namespace hypercover
