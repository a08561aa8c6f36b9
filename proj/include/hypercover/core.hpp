#pragma once

// Domain geometry: boxes, designs and the Euclidean nearest-point kernel.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypercover {

/// Invalid user-supplied parameter (delta out of range, p <= 0, ...).
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs that disagree with each other (dimension mismatch, point outside box).
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Point = std::vector<double>;

/// Axis-aligned hyperrectangle with positive volume.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw parameter_error("box: dimension must be >= 1");
    if (lower_.size() != upper_.size())
      throw parameter_error("box: lower and upper bounds differ in dimension");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
        throw parameter_error("box: need finite lower < upper on axis " + std::to_string(i));
    }
  }

  /// The same interval [lo, hi] on every one of d axes.
  static Box cube(std::size_t d, double lo, double hi) {
    return Box(std::vector<double>(d, lo), std::vector<double>(d, hi));
  }

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double lower(std::size_t i) const { return lower_[i]; }
  double upper(std::size_t i) const { return upper_[i]; }

  double volume() const noexcept {
    double v = 1.0;
    for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
    return v;
  }

  bool contains(std::span<const double> x) const noexcept {
    if (x.size() != lower_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    return true;
  }

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Length of the main diagonal; an upper bound on any distance inside the box.
inline double box_diameter(const Box& box) {
  double s = 0.0;
  for (std::size_t i = 0; i < box.dimension(); ++i) {
    const double w = box.upper(i) - box.lower(i);
    s += w * w;
  }
  return std::sqrt(s);
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Anything that can answer "squared distance from x to the nearest point".
template <class S>
concept NearestSearch = requires(const S& s, std::span<const double> x) {
  { s.dimension() } -> std::convertible_to<std::size_t>;
  { s.nearest_squared(x) } -> std::convertible_to<double>;
};

/// An ordered set of n points in R^d (row-major storage).
///
/// A dimension-major copy of the coordinates is kept alongside the rows so the
/// blocked nearest-point scan runs over contiguous memory for every axis.
class Design {
 public:
  /// Query points handled per pass over the design in the batch kernel.
  static constexpr std::size_t kQueryBlock = 4;
  /// Design points per cache block in the batch kernel.
  static constexpr std::size_t kPointBlock = 256;

  Design(std::size_t d, std::vector<double> coords) : d_(d), coords_(std::move(coords)) {
    if (d_ == 0) throw parameter_error("design: dimension must be >= 1");
    if (coords_.empty() || coords_.size() % d_ != 0)
      throw parameter_error("design: need n >= 1 points with " + std::to_string(d_) +
                            " coordinates each");
    for (double c : coords_)
      if (!std::isfinite(c)) throw parameter_error("design: non-finite coordinate");
    n_ = coords_.size() / d_;
    by_axis_.resize(coords_.size());
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t k = 0; k < d_; ++k) by_axis_[k * n_ + j] = coords_[j * d_ + k];
  }

  static Design from_points(const std::vector<Point>& pts) {
    if (pts.empty()) throw parameter_error("design: need n >= 1 points");
    const std::size_t d = pts.front().size();
    std::vector<double> coords;
    coords.reserve(pts.size() * d);
    for (const auto& p : pts) {
      if (p.size() != d) throw contract_error("design: rows have different dimensions");
      coords.insert(coords.end(), p.begin(), p.end());
    }
    return Design(d, std::move(coords));
  }

  std::size_t dimension() const noexcept { return d_; }
  std::size_t size() const noexcept { return n_; }
  std::span<const double> point(std::size_t j) const { return {coords_.data() + j * d_, d_}; }
  std::span<const double> coordinates() const noexcept { return coords_; }

  /// Copy of this design with one more point appended.
  Design with_point(std::span<const double> x) const {
    require_dimension(x.size());
    std::vector<double> c = coords_;
    c.insert(c.end(), x.begin(), x.end());
    return Design(d_, std::move(c));
  }

  bool inside(const Box& box) const {
    if (box.dimension() != d_) return false;
    for (std::size_t j = 0; j < n_; ++j)
      if (!box.contains(point(j))) return false;
    return true;
  }

  void require_dimension(std::size_t d) const {
    if (d != d_)
      throw contract_error("dimension mismatch: point has " + std::to_string(d) +
                           " coordinates, design has " + std::to_string(d_));
  }

  /// Squared distance to the nearest design point and its index (ties go to the lowest index).
  std::pair<double, std::size_t> nearest(std::span<const double> x) const {
    require_dimension(x.size());
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double s = squared_distance(x, point(j));
      if (s < best) {
        best = s;
        arg = j;
      }
    }
    return {best, arg};
  }

  double nearest_squared(std::span<const double> x) const { return nearest(x).first; }

  /// Batch form of nearest_squared over m row-major queries.
  ///
  /// Blocked brute force: each block of design points is streamed once per
  /// group of kQueryBlock queries; accumulation is over axes in fixed order so
  /// results are bitwise independent of how callers chunk their queries.
  void nearest_squared_batch(std::span<const double> queries, std::span<double> out) const {
    scan_blocks(queries, out, std::span<std::size_t>{});
  }

  /// Like nearest_squared_batch, also reporting the nearest index (lowest on ties).
  void nearest_batch(std::span<const double> queries, std::span<double> out,
                     std::span<std::size_t> index) const {
    if (index.size() != out.size()) throw contract_error("nearest_batch: index buffer size mismatch");
    scan_blocks(queries, out, index);
  }

  friend bool operator==(const Design& a, const Design& b) {
    return a.d_ == b.d_ && a.coords_ == b.coords_;
  }

 private:
  void scan_blocks(std::span<const double> queries, std::span<double> out,
                   std::span<std::size_t> index) const {
    if (queries.size() != out.size() * d_)
      throw contract_error("nearest_squared_batch: query buffer does not match dimension");
    const bool want_index = !index.empty();
    const std::size_t m = out.size();
    double acc[kQueryBlock][kPointBlock];
    for (std::size_t q0 = 0; q0 < m; q0 += kQueryBlock) {
      const std::size_t qn = std::min(kQueryBlock, m - q0);
      double best[kQueryBlock];
      std::size_t arg[kQueryBlock] = {};
      std::fill(best, best + kQueryBlock, std::numeric_limits<double>::infinity());
      for (std::size_t j0 = 0; j0 < n_; j0 += kPointBlock) {
        const std::size_t bn = std::min(kPointBlock, n_ - j0);
        for (std::size_t q = 0; q < qn; ++q) std::fill(acc[q], acc[q] + bn, 0.0);
        for (std::size_t k = 0; k < d_; ++k) {
          const double* col = by_axis_.data() + k * n_ + j0;
          for (std::size_t q = 0; q < qn; ++q) {
            const double xk = queries[(q0 + q) * d_ + k];
            double* a = acc[q];
            for (std::size_t j = 0; j < bn; ++j) {
              const double t = xk - col[j];
              a[j] += t * t;
            }
          }
        }
        for (std::size_t q = 0; q < qn; ++q) {
          if (want_index) {
            for (std::size_t j = 0; j < bn; ++j)
              if (acc[q][j] < best[q]) {
                best[q] = acc[q][j];
                arg[q] = j0 + j;
              }
          } else {
            double b = best[q];
            for (std::size_t j = 0; j < bn; ++j) b = std::min(b, acc[q][j]);
            best[q] = b;
          }
        }
      }
      for (std::size_t q = 0; q < qn; ++q) {
        out[q0 + q] = best[q];
        if (want_index) index[q0 + q] = arg[q];
      }
    }
  }

  std::size_t d_ = 0;
  std::size_t n_ = 0;
  std::vector<double> coords_;
  std::vector<double> by_axis_;
};

/// Euclidean distance from x to the nearest point of the set.
template <NearestSearch S>
double nearest_distance(std::span<const double> x, const S& set) {
  if (x.size() != set.dimension())
    throw contract_error("nearest_distance: point has " + std::to_string(x.size()) +
                         " coordinates, design has " + std::to_string(set.dimension()));
  return std::sqrt(set.nearest_squared(x));
}

/// Squared nearest distances for m row-major queries, using the batch kernel when available.
template <NearestSearch S>
void nearest_squared_batch(const S& set, std::span<const double> queries, std::span<double> out) {
  if constexpr (requires { set.nearest_squared_batch(queries, out); }) {
    set.nearest_squared_batch(queries, out);
  } else {
    const std::size_t d = set.dimension();
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = set.nearest_squared(queries.subspan(i * d, d));
  }
}

}  // namespace hypercover
