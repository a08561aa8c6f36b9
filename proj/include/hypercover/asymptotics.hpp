#pragma once

// Large-n law for i.i.d. uniform designs: the normalized distance
// t = (n V_d)^(1/d) rho(U, X_n) has limiting cdf F_d(t) = 1 - exp(-t^d).
// Everything is evaluated in the log domain so d can run to several hundred.

#include <cmath>
#include <numbers>

#include "hypercover/core.hpp"

namespace hypercover {

struct AsymptoticModel {
  std::size_t d = 1;
  std::size_t n = 1;
};

/// log V_d, V_d = pi^(d/2) / Gamma(d/2 + 1).
inline double log_unit_ball_volume(std::size_t d) {
  if (d == 0) throw parameter_error("unit_ball_volume: need d >= 1");
  const double h = static_cast<double>(d) / 2.0;
  return h * std::log(std::numbers::pi) - std::lgamma(h + 1.0);
}

inline double unit_ball_volume(std::size_t d) { return std::exp(log_unit_ball_volume(d)); }

/// F_d(t) = 1 - exp(-t^d).
inline double limit_cdf(double t, std::size_t d) {
  if (!(t >= 0.0)) throw parameter_error("limit_cdf: t must be >= 0");
  if (d == 0) throw parameter_error("limit_cdf: need d >= 1");
  if (t == 0.0) return 0.0;
  return -std::expm1(-std::exp(static_cast<double>(d) * std::log(t)));
}

/// Radius r with F_d((n V_d)^(1/d) r) = target.
inline double asymptotic_radius(std::size_t n, std::size_t d, double target) {
  if (!(target > 0.0 && target < 1.0)) throw parameter_error("asymptotic_radius: target must lie in (0, 1)");
  if (n == 0) throw parameter_error("asymptotic_radius: need n >= 1");
  const double log_td = std::log(-std::log1p(-target));
  return std::exp((log_td - std::log(static_cast<double>(n)) - log_unit_ball_volume(d)) / static_cast<double>(d));
}

/// Asymptotic approximation F(r, X_n) ~ F_d((n V_d)^(1/d) r).
inline double approx_coverage(double r, std::size_t n, std::size_t d) {
  if (!(r >= 0.0)) throw parameter_error("approx_coverage: r must be >= 0");
  if (n == 0) throw parameter_error("approx_coverage: need n >= 1");
  if (r == 0.0) return 0.0;
  const double log_td = std::log(static_cast<double>(n)) + log_unit_ball_volume(d) + static_cast<double>(d) * std::log(r);
  return -std::expm1(-std::exp(log_td));
}

inline double asymptotic_radius(const AsymptoticModel& m, double target) { return asymptotic_radius(m.n, m.d, target); }
inline double approx_coverage(const AsymptoticModel& m, double r) { return approx_coverage(r, m.n, m.d); }

}  // namespace hypercover
