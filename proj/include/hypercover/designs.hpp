#pragma once

// Generators for the design families under study.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "hypercover/core.hpp"
#include "hypercover/rng.hpp"

namespace hypercover {

enum class DesignFamily { uniform_delta, factorial_half, grid_midpoint_1d, paper_1d };

inline std::string_view to_string(DesignFamily f) {
  switch (f) {
    case DesignFamily::uniform_delta: return "uniform_delta";
    case DesignFamily::factorial_half: return "factorial_half";
    case DesignFamily::grid_midpoint_1d: return "grid_midpoint_1d";
    case DesignFamily::paper_1d: return "paper_1d";
  }
  return "?";
}

inline DesignFamily parse_family(std::string_view s) {
  if (s == "uniform_delta" || s == "uniform") return DesignFamily::uniform_delta;
  if (s == "factorial_half" || s == "factorial") return DesignFamily::factorial_half;
  if (s == "grid_midpoint_1d" || s == "midpoint") return DesignFamily::grid_midpoint_1d;
  if (s == "paper_1d") return DesignFamily::paper_1d;
  throw parameter_error("unknown design family '" + std::string(s) + "'");
}

struct DesignSpec {
  DesignFamily family = DesignFamily::uniform_delta;
  std::size_t d = 1;
  std::size_t n = 1;
  double delta = 1.0;
  std::optional<std::uint64_t> seed;
};

/// n i.i.d. uniform points in [-delta, delta]^d (inside the domain [-1, 1]^d).
inline Design uniform_delta_design(std::size_t d, std::size_t n, double delta, SeededStream stream) {
  if (!(delta > 0.0 && delta <= 1.0)) throw parameter_error("uniform_delta: need 0 < delta <= 1");
  if (d == 0 || n == 0) throw parameter_error("uniform_delta: need d >= 1 and n >= 1");
  return Design(d, sample_uniform(Box::cube(d, -delta, delta), n, stream));
}

/// Largest d for which the half-fraction is materialized point by point.
inline constexpr std::size_t kMaxMaterializedFactorialDim = 24;

/// The 2^(d-1) vertices of {-1/2, +1/2}^d with an even number of negative
/// coordinates, in ascending lexicographic order.
inline Design factorial_half_design(std::size_t d) {
  if (d < 2) throw parameter_error("factorial_half: need d >= 2");
  if (d > kMaxMaterializedFactorialDim)
    throw parameter_error("factorial_half: d = " + std::to_string(d) +
                          " is too large to enumerate (max " +
                          std::to_string(kMaxMaterializedFactorialDim) + ")");
  const std::uint64_t total = std::uint64_t{1} << d;
  std::vector<double> coords;
  coords.reserve((total / 2) * d);
  // Bit (d-1-k) set means coordinate k is negative; descending masks give ascending points.
  for (std::uint64_t m = total; m-- > 0;) {
    if (std::popcount(m) % 2 != 0) continue;
    for (std::size_t k = 0; k < d; ++k) coords.push_back((m >> (d - 1 - k)) & 1u ? -0.5 : 0.5);
  }
  return Design(d, std::move(coords));
}

/// Implicit form of factorial_half_design with an exact O(d) nearest-point query.
///
/// The nearest vertex of the full cube {-1/2, 1/2}^d is sign(x). If its sign
/// product is -1 the nearest even-parity vertex flips the coordinate with the
/// smallest |x_i|, which adds 2|x_i| to the squared distance.
class FactorialHalfDesign {
 public:
  explicit FactorialHalfDesign(std::size_t d) : d_(d) {
    if (d < 2) throw parameter_error("factorial_half: need d >= 2");
  }

  std::size_t dimension() const noexcept { return d_; }
  /// Number of points, 2^(d-1), as a double (exceeds 64 bits for large d).
  double size() const noexcept { return std::ldexp(1.0, static_cast<int>(d_) - 1); }

  double nearest_squared(std::span<const double> x) const {
    double s = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    bool odd = false;
    for (std::size_t k = 0; k < d_; ++k) {
      const double a = std::abs(x[k]);
      const double t = a - 0.5;
      s += t * t;
      smallest = std::min(smallest, a);
      odd ^= std::signbit(x[k]) && x[k] != 0.0;
    }
    return odd ? s + 2.0 * smallest : s;
  }

  Design materialize() const { return factorial_half_design(d_); }

 private:
  std::size_t d_;
};

/// Midpoints (2j - 1) / (2n) of n equal cells of [0, 1].
inline Design midpoint_design_1d(std::size_t n) {
  if (n == 0) throw parameter_error("midpoint_design_1d: need n >= 1");
  std::vector<double> c(n);
  for (std::size_t j = 1; j <= n; ++j) c[j - 1] = static_cast<double>(2 * j - 1) / static_cast<double>(2 * n);
  return Design(1, std::move(c));
}

/// Points (2j - 1) / (2n - 1), j = 1..n, on [0, 1].
inline Design paper_1d_design(std::size_t n) {
  if (n == 0) throw parameter_error("paper_1d_design: need n >= 1");
  std::vector<double> c(n);
  for (std::size_t j = 1; j <= n; ++j)
    c[j - 1] = static_cast<double>(2 * j - 1) / static_cast<double>(2 * n - 1);
  return Design(1, std::move(c));
}

/// The domain each family is defined on.
inline Box default_domain(const DesignSpec& spec) {
  switch (spec.family) {
    case DesignFamily::uniform_delta:
    case DesignFamily::factorial_half: return Box::cube(spec.d, -1.0, 1.0);
    default: return Box::cube(1, 0.0, 1.0);
  }
}

inline Design make_design(const DesignSpec& spec) {
  switch (spec.family) {
    case DesignFamily::uniform_delta:
      if (!spec.seed) throw parameter_error("uniform_delta: a seed is required");
      return uniform_delta_design(spec.d, spec.n, spec.delta, SeededStream(*spec.seed, 0));
    case DesignFamily::factorial_half: return factorial_half_design(spec.d);
    case DesignFamily::grid_midpoint_1d:
      if (spec.d != 1) throw parameter_error("grid_midpoint_1d: requires d = 1");
      return midpoint_design_1d(spec.n);
    case DesignFamily::paper_1d:
      if (spec.d != 1) throw parameter_error("paper_1d: requires d = 1");
      return paper_1d_design(spec.n);
  }
  throw parameter_error("unknown design family");
}

}  // namespace hypercover
