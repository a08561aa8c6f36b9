#pragma once

// Quantization error theta_p = E rho^p(U, X_n) and Lloyd iterations on a fixed sample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hypercover/core.hpp"
#include "hypercover/coverage.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

struct QuantizationReport {
  std::vector<double> orders;
  std::vector<double> theta_p;     // may under/overflow to 0 or inf for extreme p
  std::vector<double> theta_root;  // theta_p^(1/p), always finite
  std::vector<double> mc_se;       // plug-in standard error of theta_p
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimates of theta_p and theta_p^(1/p) for each order p.
///
/// Powers are taken of distances scaled by the sample maximum, so theta_root
/// stays finite and accurate for very large p.
inline QuantizationReport quantization_error(const DistanceSample& sample, const std::vector<double>& orders) {
  QuantizationReport rep;
  rep.orders = orders;
  rep.n_samples = sample.size();
  rep.seed = sample.seed();
  const double n = static_cast<double>(sample.size());
  const double top = sample.max();
  for (double p : orders) {
    if (!(p > 0.0) || !std::isfinite(p)) throw parameter_error("quantization_error: every order p must be > 0");
    if (top == 0.0) {
      rep.theta_p.push_back(0.0);
      rep.theta_root.push_back(0.0);
      rep.mc_se.push_back(0.0);
      continue;
    }
    double sum = 0.0, sum_sq = 0.0;
    for (double x : sample.distances()) {
      const double v = std::pow(x / top, p);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = n > 1 ? std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1) : 0.0;
    const double scale = std::pow(top, p);
    rep.theta_p.push_back(scale * mean);
    rep.theta_root.push_back(top * std::pow(mean, 1.0 / p));
    rep.mc_se.push_back(scale * std::sqrt(var / n));
  }
  return rep;
}

/// Mean squared nearest distance of `points` (row-major) to the design.
inline double lloyd_objective(std::span<const double> points, const Design& design, Execution exec = {}) {
  const std::size_t d = design.dimension();
  if (points.empty() || points.size() % d != 0)
    throw contract_error("lloyd: point buffer does not match design dimension");
  const std::size_t m = points.size() / d;
  const std::size_t chunks = (m + kSampleChunk - 1) / kSampleChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk, count = std::min(kSampleChunk, m - begin);
    std::vector<double> sq(count);
    design.nearest_squared_batch(points.subspan(begin * d, count * d), sq);
    double s = 0.0;
    for (double v : sq) s += v;
    partial[c] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total / static_cast<double>(m);
}

/// One Lloyd iteration: assign each point to its nearest design point (lowest
/// index on ties) and move every design point to the centroid of its cell.
/// Points of empty cells stay where they are.
inline Design lloyd_step(std::span<const double> points, const Design& design, Execution exec = {}) {
  const std::size_t d = design.dimension(), n = design.size();
  if (points.empty() || points.size() % d != 0)
    throw contract_error("lloyd_step: point buffer does not match design dimension");
  const std::size_t m = points.size() / d;
  const std::size_t chunks = (m + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::vector<double>> sums(chunks);
  std::vector<std::vector<std::size_t>> counts(chunks);
  parallel_for(chunks, exec, [&](std::size_t c) {
    const std::size_t begin = c * kSampleChunk, count = std::min(kSampleChunk, m - begin);
    std::vector<double> sq(count);
    std::vector<std::size_t> idx(count);
    const auto block = points.subspan(begin * d, count * d);
    design.nearest_batch(block, sq, idx);
    auto& s = sums[c];
    auto& k = counts[c];
    s.assign(n * d, 0.0);
    k.assign(n, 0);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = idx[i];
      ++k[j];
      for (std::size_t a = 0; a < d; ++a) s[j * d + a] += block[i * d + a];
    }
  });
  // Reduce in chunk order so the result does not depend on scheduling.
  std::vector<double> sum(n * d, 0.0);
  std::vector<std::size_t> cnt(n, 0);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < n * d; ++i) sum[i] += sums[c][i];
    for (std::size_t j = 0; j < n; ++j) cnt[j] += counts[c][j];
  }
  std::vector<double> next(design.coordinates().begin(), design.coordinates().end());
  for (std::size_t j = 0; j < n; ++j) {
    if (cnt[j] == 0) continue;
    for (std::size_t a = 0; a < d; ++a) next[j * d + a] = sum[j * d + a] / static_cast<double>(cnt[j]);
  }
  return Design(d, std::move(next));
}

struct LloydResult {
  Design design;
  /// Objective of the initial design followed by the objective after each iteration.
  std::vector<double> objective_trace;
};

/// Lloyd iterations on one fixed sample of N uniform points in the box.
inline LloydResult lloyd_run(const Box& box, const Design& design, std::size_t n_samples, std::uint64_t seed,
                             std::size_t iterations, Execution exec = {}) {
  if (iterations == 0) throw parameter_error("lloyd_run: iterations must be >= 1");
  if (box.dimension() != design.dimension()) throw contract_error("lloyd_run: box and design dimensions differ");
  if (!design.inside(box)) throw contract_error("lloyd_run: design has points outside the box");
  const auto points = sample_uniform_chunked(box, n_samples, seed, exec);
  LloydResult res{design, {}};
  res.objective_trace.reserve(iterations + 1);
  res.objective_trace.push_back(lloyd_objective(points, res.design, exec));
  for (std::size_t it = 0; it < iterations; ++it) {
    res.design = lloyd_step(points, res.design, exec);
    res.objective_trace.push_back(lloyd_objective(points, res.design, exec));
  }
  return res;
}

}  // namespace hypercover
