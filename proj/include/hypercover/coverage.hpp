#pragma once

// Monte Carlo estimation of the covered-volume cdf F(r, X_n), weak-covering
// quantiles r_{1-gamma}, and covering radii.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "hypercover/core.hpp"
#include "hypercover/intervals.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

/// Sorted nearest-design distances rho(U_i, X_n) of N i.i.d. uniform points.
class DistanceSample {
 public:
  DistanceSample(std::vector<double> sorted_distances, std::uint64_t seed)
      : distances_(std::move(sorted_distances)), seed_(seed) {
    if (distances_.empty()) throw parameter_error("distance sample: N must be >= 1");
  }

  std::span<const double> distances() const noexcept { return distances_; }
  std::size_t size() const noexcept { return distances_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t chunk_size() const noexcept { return kSampleChunk; }
  double min() const noexcept { return distances_.front(); }
  double max() const noexcept { return distances_.back(); }

  /// Number of distances <= r.
  std::size_t count_within(double r) const {
    return static_cast<std::size_t>(std::upper_bound(distances_.begin(), distances_.end(), r) -
                                    distances_.begin());
  }

  /// Empirical cdf at r.
  double ecdf(double r) const { return static_cast<double>(count_within(r)) / static_cast<double>(size()); }

 private:
  std::vector<double> distances_;
  std::uint64_t seed_;
};

/// N nearest-point distances from uniform points in `box` to `set`, sorted.
///
/// The N points are split into fixed chunks of kSampleChunk, each with its own
/// stream, so the result is identical for any thread count.
template <NearestSearch S>
DistanceSample distance_sample(const Box& box, const S& set, std::size_t n_samples, std::uint64_t seed,
                               Execution exec = {}) {
  if (n_samples == 0) throw parameter_error("distance_sample: N must be >= 1");
  const std::size_t d = box.dimension();
  if (set.dimension() != d)
    throw contract_error("distance_sample: box has dimension " + std::to_string(d) + ", design has " +
                         std::to_string(set.dimension()));
  if constexpr (std::is_same_v<S, Design>) {
    if (!set.inside(box)) throw contract_error("distance_sample: design has points outside the box");
  }
  std::vector<double> out(n_samples);
  const std::size_t chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk;
    const std::size_t count = std::min(kSampleChunk, n_samples - begin);
    std::vector<double> pts(count * d);
    SeededStream stream(seed, c);
    fill_uniform(box, stream, pts);
    std::span<double> dst(out.data() + begin, count);
    nearest_squared_batch(set, std::span<const double>(pts), dst);
    for (double& v : dst) v = std::sqrt(v);
  });
  std::sort(out.begin(), out.end());
  return DistanceSample(std::move(out), seed);
}

/// Estimate of F(r, X_n) with a 99% Clopper-Pearson interval.
struct CoverageEstimate {
  double r = 0.0;
  double fraction = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;

  double half_width() const noexcept { return std::max(fraction - ci_low, ci_high - fraction); }
};

inline CoverageEstimate coverage_from_counts(double r, std::size_t hits, std::size_t trials, std::uint64_t seed) {
  const auto [lo, hi] = clopper_pearson(hits, trials);
  const double f = static_cast<double>(hits) / static_cast<double>(trials);
  return {r, f, std::min(lo, f), std::max(hi, f), trials, seed};
}

inline CoverageEstimate coverage_at(const DistanceSample& sample, double r) {
  if (!(r >= 0.0)) throw parameter_error("coverage_at: r must be >= 0");
  return coverage_from_counts(r, sample.count_within(r), sample.size(), sample.seed());
}

/// Estimate of the radius r_{1-gamma} achieving (1 - gamma)-covering.
struct QuantileEstimate {
  double gamma = 0.0;
  double r_quantile = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t rank = 0;
  /// N * gamma < 10: too few tail points for a trustworthy estimate.
  bool low_tail_count = false;
};

/// Order statistic at rank ceil((1 - gamma) N), with a distribution-free 99% interval.
inline QuantileEstimate quantile(const DistanceSample& sample, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw parameter_error("quantile: gamma must lie in (0, 1)");
  const std::size_t n = sample.size();
  const double nd = static_cast<double>(n);
  // ceil((1 - gamma) N) = N - floor(gamma N); the slack absorbs rounding in gamma N.
  const auto tail = static_cast<std::size_t>(std::floor(gamma * nd * (1.0 + 1e-12)));
  const std::size_t rank = std::max<std::size_t>(n - std::min(tail, n), 1);
  const auto [lo, hi] = order_statistic_ranks(n, 1.0 - gamma);
  const auto xs = sample.distances();
  QuantileEstimate q;
  q.gamma = gamma;
  q.rank = rank;
  q.r_quantile = xs[rank - 1];
  q.ci_low = std::min(xs[lo - 1], q.r_quantile);
  q.ci_high = std::max(xs[hi - 1], q.r_quantile);
  q.low_tail_count = nd * gamma < 10.0;
  return q;
}

/// Exact covering radius of a 1-d design on an interval.
inline double covering_radius_1d_exact(const Design& design, const Box& box) {
  if (design.dimension() != 1 || box.dimension() != 1)
    throw parameter_error("covering_radius_1d_exact: requires d = 1");
  std::vector<double> x(design.coordinates().begin(), design.coordinates().end());
  std::sort(x.begin(), x.end());
  const double lo = box.lower(0), hi = box.upper(0);
  double cr = std::max(x.front() - lo, hi - x.back());
  for (std::size_t i = 1; i < x.size(); ++i) cr = std::max(cr, (x[i] - x[i - 1]) / 2);
  return std::max(cr, 0.0);
}

/// Covering radius sqrt(d + 8) / 2 of the 2^(d-1) half-fraction on [-1, 1]^d, d > 2.
inline double covering_radius_factorial_exact(std::size_t d) {
  if (d <= 2) throw parameter_error("covering_radius_factorial_exact: closed form holds only for d > 2");
  return std::sqrt(static_cast<double>(d) + 8.0) / 2.0;
}

/// Lower bound on CR(X_n): the larger of the maximum of an N-point distance
/// sample and the nearest distance at `probe_vertices` box vertices.
///
/// All vertices are probed when probe_vertices >= 2^d; otherwise vertices are
/// drawn at random from a stream derived from `seed`. Neither the sample nor
/// the probed vertices depend on the design, so at fixed seed the bound can
/// only shrink as points are added.
template <NearestSearch S>
double covering_radius_lower_bound(const Box& box, const S& set, std::size_t n_samples, std::uint64_t seed,
                                   std::uint64_t probe_vertices, Execution exec = {}) {
  double bound = distance_sample(box, set, n_samples, seed, exec).max();
  const std::size_t d = box.dimension();
  std::vector<double> v(d);
  const auto probe = [&](std::uint64_t bits) {
    for (std::size_t k = 0; k < d; ++k) v[k] = (bits >> k) & 1u ? box.upper(k) : box.lower(k);
  };
  const bool enumerate = d < 64 && probe_vertices >= (std::uint64_t{1} << d);
  if (enumerate) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
      probe(m);
      bound = std::max(bound, nearest_distance(v, set));
    }
  } else {
    SeededStream stream(derive_seed(seed, 0x76657274ull /* "vert" */, 0), 0);
    for (std::uint64_t i = 0; i < probe_vertices; ++i) {
      for (std::size_t k = 0; k < d; ++k) v[k] = stream() >> 63 ? box.upper(k) : box.lower(k);
      bound = std::max(bound, nearest_distance(v, set));
    }
  }
  return bound;
}

}  // namespace hypercover
