#pragma once

// Drivers for the four covering phenomena: the finite-n gap to the asymptotic
// law, its cdf-level picture, the delta-effect, and the factorial design's
// weak-covering quantiles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hypercover/asymptotics.hpp"
#include "hypercover/core.hpp"
#include "hypercover/coverage.hpp"
#include "hypercover/designs.hpp"
#include "hypercover/parallel.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

/// Radius calibration could not bracket or reach its target.
class calibration_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seed-derivation tags, one per independent purpose within a job.
inline constexpr std::uint64_t kDesignTag = 0x64657369676eull;  // "design"
inline constexpr std::uint64_t kSampleTag = 0x73616d706c65ull;  // "sample"

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SweepRow {
  double d = kNaN;
  double delta = kNaN;
  double r = kNaN;
  double coverage = kNaN;
  double ci_low = kNaN;
  double ci_high = kNaN;
  double approx = kNaN;  // asymptotic prediction, where the figure has one
  double spread = kNaN;  // std. deviation of coverage over replicate designs
};

struct SweepResult {
  std::string figure;
  std::string axis;  // "d", "delta" or "r"
  std::vector<SweepRow> rows;
  std::size_t n = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::string family;
};

/// A uniform n-point design in [0, 1]^d, drawn from the job's design stream.
inline Design uniform_unit_design(std::size_t d, std::size_t n, std::uint64_t seed) {
  return Design(d, sample_uniform(Box::cube(d, 0.0, 1.0), n, SeededStream(seed, 0)));
}

/// Coverage at the asymptotic 'target' radius for i.i.d. uniform designs in [0,1]^d.
///
/// For each d, `replicates` designs are drawn; the reported coverage is their
/// mean, the interval is Clopper-Pearson on the pooled hits, and `spread` is
/// the standard deviation across replicates.
inline SweepResult asymptotic_gap_sweep(std::vector<std::size_t> dims, std::size_t n, double target,
                                        std::size_t n_samples, std::uint64_t seed, std::size_t replicates = 10,
                                        Execution exec = {}) {
  if (n == 0 || n_samples == 0 || replicates == 0)
    throw parameter_error("asymptotic_gap_sweep: n, N and replicates must be >= 1");
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  SweepResult out{"fig1", "d", {}, n, n_samples, seed, "uniform"};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t d = dims[i];
    if (d == 0) throw parameter_error("asymptotic_gap_sweep: dimensions must be >= 1");
    const double r = asymptotic_radius(n, d, target);
    const Box box = Box::cube(d, 0.0, 1.0);
    std::vector<double> fractions;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < replicates; ++k) {
      const std::uint64_t job = d * replicates + k;
      const Design design = uniform_unit_design(d, n, derive_seed(seed, kDesignTag, job));
      const auto sample = distance_sample(box, design, n_samples, derive_seed(seed, kSampleTag, job), exec);
      const std::size_t h = sample.count_within(r);
      hits += h;
      fractions.push_back(static_cast<double>(h) / static_cast<double>(n_samples));
    }
    double mean = 0.0;
    for (double f : fractions) mean += f;
    mean /= static_cast<double>(replicates);
    double ss = 0.0;
    for (double f : fractions) ss += (f - mean) * (f - mean);
    const auto pooled = coverage_from_counts(r, hits, n_samples * replicates, seed);
    SweepRow row;
    row.d = static_cast<double>(d);
    row.r = r;
    row.coverage = mean;
    row.ci_low = std::min(pooled.ci_low, mean);
    row.ci_high = std::max(pooled.ci_high, mean);
    row.approx = target;
    row.spread = replicates > 1 ? std::sqrt(ss / static_cast<double>(replicates - 1)) : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

/// Estimated F(r, X_n) of one uniform design in [0,1]^d next to its asymptotic approximation.
inline SweepResult cdf_comparison(std::size_t d, std::size_t n, std::vector<double> r_grid, std::size_t n_samples,
                                  std::uint64_t seed, Execution exec = {}) {
  if (d == 0 || n == 0) throw parameter_error("cdf_comparison: need d >= 1 and n >= 1");
  std::sort(r_grid.begin(), r_grid.end());
  const Design design = uniform_unit_design(d, n, derive_seed(seed, kDesignTag, 0));
  const auto sample = distance_sample(Box::cube(d, 0.0, 1.0), design, n_samples, derive_seed(seed, kSampleTag, 0), exec);
  SweepResult out{"fig2", "r", {}, n, n_samples, seed, "uniform"};
  for (double r : r_grid) {
    const auto est = coverage_at(sample, r);
    SweepRow row;
    row.d = static_cast<double>(d);
    row.r = r;
    row.coverage = est.fraction;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    row.approx = approx_coverage(r, n, d);
    out.rows.push_back(row);
  }
  return out;
}

/// Distance samples on [-1,1]^d for uniform_delta designs, one per delta.
///
/// Every delta uses the same design stream (the design is the same uniform
/// draw rescaled to [-delta, delta]^d) and the same evaluation points, so
/// differences between rows are not blurred by independent noise.
inline std::vector<DistanceSample> delta_samples(std::size_t d, std::size_t n, const std::vector<double>& delta_grid,
                                                 std::size_t n_samples, std::uint64_t seed, Execution exec = {}) {
  const Box box = Box::cube(d, -1.0, 1.0);
  std::vector<DistanceSample> samples;
  samples.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    const Design design = uniform_delta_design(d, n, delta, SeededStream(derive_seed(seed, kDesignTag, 0), 0));
    samples.push_back(distance_sample(box, design, n_samples, derive_seed(seed, kSampleTag, 0), exec));
  }
  return samples;
}

/// Coverage of [-1,1]^d at radius r for uniform_delta designs across a delta grid.
inline SweepResult delta_sweep(std::size_t d, std::size_t n, double r, std::vector<double> delta_grid,
                               std::size_t n_samples, std::uint64_t seed, Execution exec = {}) {
  if (!(r > 0.0)) throw parameter_error("delta_sweep: r must be > 0");
  if (delta_grid.empty()) throw parameter_error("delta_sweep: empty delta grid");
  std::sort(delta_grid.begin(), delta_grid.end());
  const auto samples = delta_samples(d, n, delta_grid, n_samples, seed, exec);
  SweepResult out{"fig3", "delta", {}, n, n_samples, seed, "uniform_delta"};
  for (std::size_t i = 0; i < delta_grid.size(); ++i) {
    const auto est = coverage_at(samples[i], r);
    SweepRow row;
    row.d = static_cast<double>(d);
    row.delta = delta_grid[i];
    row.r = r;
    row.coverage = est.fraction;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    out.rows.push_back(row);
  }
  return out;
}

struct Calibration {
  double r = 0.0;
  double best_delta = 0.0;
  double coverage = 0.0;  // max over the grid of the estimated coverage at r
  std::size_t iterations = 0;
};

inline constexpr double kCalibrationTolerance = 0.005;

/// Bisection on r until the best-over-delta estimated coverage is within
/// kCalibrationTolerance of `target`. Uses one fixed set of samples, so the
/// objective is a monotone step function of r and the result is deterministic.
inline Calibration calibrate_radius_for_target(std::size_t d, std::size_t n, const std::vector<double>& delta_grid,
                                               double target, std::size_t n_samples, std::uint64_t seed,
                                               Execution exec = {}, double r_lo = 0.0, double r_hi = kNaN) {
  if (!(target > 0.0 && target < 1.0)) throw parameter_error("calibrate: target must lie in (0, 1)");
  if (delta_grid.empty()) throw parameter_error("calibrate: empty delta grid");
  if (std::isnan(r_hi)) r_hi = box_diameter(Box::cube(d, -1.0, 1.0));
  const auto samples = delta_samples(d, n, delta_grid, n_samples, seed, exec);
  const auto best = [&](double r) {
    std::size_t arg = 0;
    double f = -1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double v = samples[i].ecdf(r);
      if (v > f) {
        f = v;
        arg = i;
      }
    }
    return std::pair{f, arg};
  };
  if (best(r_lo).first > target + kCalibrationTolerance || best(r_hi).first < target - kCalibrationTolerance)
    throw calibration_error("calibrate: [" + std::to_string(r_lo) + ", " + std::to_string(r_hi) +
                            "] does not bracket coverage " + std::to_string(target));
  for (std::size_t it = 1; it <= 200; ++it) {
    const double mid = 0.5 * (r_lo + r_hi);
    const auto [f, arg] = best(mid);
    if (std::abs(f - target) <= kCalibrationTolerance) return {mid, delta_grid[arg], f, it};
    (f < target ? r_lo : r_hi) = mid;
  }
  throw calibration_error("calibrate: coverage did not reach the target within tolerance");
}

struct FactorialStudy {
  SweepResult cdf;
  double r1_exact = 0.0;
  std::vector<QuantileEstimate> quantiles;
  std::vector<double> ratios;  // r_{1-gamma} / r_1 per gamma
};

/// Weak-covering quantiles of the 2^(d-1) half-fraction on [-1,1]^d against its exact covering radius.
///
/// Uses the implicit O(d) nearest-point form, so d is not limited by 2^(d-1).
/// The cdf is reported on `cdf_steps` + 1 equally spaced radii in [0, r_1].
inline FactorialStudy factorial_study(std::size_t d, const std::vector<double>& gammas, std::size_t n_samples,
                                      std::uint64_t seed, std::size_t cdf_steps = 100, Execution exec = {}) {
  const double r1 = covering_radius_factorial_exact(d);
  const FactorialHalfDesign design(d);
  const auto sample = distance_sample(Box::cube(d, -1.0, 1.0), design, n_samples, seed, exec);
  FactorialStudy st;
  st.r1_exact = r1;
  st.cdf = SweepResult{"fig4", "r", {}, 0, n_samples, seed, "factorial_half"};
  st.cdf.n = d <= 63 ? std::size_t{1} << (d - 1) : 0;
  for (std::size_t i = 0; i <= cdf_steps; ++i) {
    const double r = cdf_steps == 0 ? r1 : r1 * static_cast<double>(i) / static_cast<double>(cdf_steps);
    const auto est = coverage_at(sample, r);
    SweepRow row;
    row.d = static_cast<double>(d);
    row.r = r;
    row.coverage = est.fraction;
    row.ci_low = est.ci_low;
    row.ci_high = est.ci_high;
    st.cdf.rows.push_back(row);
  }
  for (double g : gammas) {
    st.quantiles.push_back(quantile(sample, g));
    st.ratios.push_back(st.quantiles.back().r_quantile / r1);
  }
  return st;
}

}  // namespace hypercover
