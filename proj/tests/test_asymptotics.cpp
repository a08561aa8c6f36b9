#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hypercover/asymptotics.hpp"

using namespace hypercover;

TEST(UnitBallVolume, ClosedForms) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 2e-12);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, std::numbers::pi * 1e-12);
  const double v10 = std::pow(std::numbers::pi, 5) / 120.0;
  EXPECT_NEAR(unit_ball_volume(10), v10, v10 * 1e-12);
  EXPECT_NEAR(v10, 2.55016, 5e-6);
  EXPECT_THROW(unit_ball_volume(0), parameter_error);
}

TEST(UnitBallVolume, GammaRecurrence) {
  for (std::size_t d = 2; d <= 100; ++d) {
    const double ratio = std::sqrt(std::numbers::pi) * std::tgamma((d + 1) / 2.0) / std::tgamma(d / 2.0 + 1.0);
    const double expect = unit_ball_volume(d - 1) * ratio;
    EXPECT_NEAR(unit_ball_volume(d), expect, std::abs(expect) * 1e-10) << "d=" << d;
  }
  // Log form stays finite far beyond where V_d underflows.
  EXPECT_TRUE(std::isfinite(log_unit_ball_volume(5000)));
}

TEST(LimitCdf, Values) {
  EXPECT_EQ(limit_cdf(0.0, 5), 0.0);
  for (std::size_t d : {1, 2, 10, 300}) EXPECT_NEAR(limit_cdf(1.0, d), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(limit_cdf(1.1, 20), 1.0 - std::exp(-std::pow(1.1, 20)), 1e-15);
  EXPECT_NEAR(limit_cdf(1.1, 20), 0.99880, 5e-6);
  EXPECT_THROW(limit_cdf(-0.1, 3), parameter_error);
}

TEST(LimitCdf, IsACdf) {
  for (std::size_t d : {1, 3, 20, 500}) {
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double f = limit_cdf(i / 100.0, d);
      EXPECT_GE(f, prev);
      EXPECT_LE(f, 1.0);
      prev = f;
    }
    EXPECT_EQ(limit_cdf(40.0, d), 1.0);
  }
}

TEST(AsymptoticRadius, ClosedForms) {
  EXPECT_NEAR(asymptotic_radius(10, 1, 0.9), std::log(10.0) / 20.0, 1e-15);
  EXPECT_NEAR(asymptotic_radius(10, 1, 0.9), 0.11513, 5e-6);
  EXPECT_NEAR(asymptotic_radius(100, 2, 1.0 - std::exp(-1.0)), 1.0 / std::sqrt(100 * std::numbers::pi), 1e-14);
  EXPECT_LT(asymptotic_radius(100, 5, 1e-12), 1e-2);
  EXPECT_THROW(asymptotic_radius(10, 2, 0.0), parameter_error);
  EXPECT_THROW(asymptotic_radius(10, 2, 1.0), parameter_error);
}

TEST(AsymptoticRadius, Monotonicity) {
  for (std::size_t d : {1, 5, 20, 100}) {
    double prev = 0.0;
    for (double c = 0.05; c < 1.0; c += 0.05) {
      const double r = asymptotic_radius(1000, d, c);
      EXPECT_GT(r, prev);
      prev = r;
    }
    prev = INFINITY;
    for (std::size_t n : {1, 10, 100, 1000, 100000}) {
      const double r = asymptotic_radius(n, d, 0.9);
      EXPECT_LE(r, prev);
      prev = r;
    }
  }
}

TEST(ApproxCoverage, InverseOfAsymptoticRadius) {
  EXPECT_EQ(approx_coverage(0.0, 100, 3), 0.0);
  for (std::size_t d : {1, 2, 7, 20, 50, 200})
    for (std::size_t n : {1, 1000, 100000})
      for (double c : {0.01, 0.5, 0.9, 0.999})
        EXPECT_NEAR(approx_coverage(asymptotic_radius(n, d, c), n, d), c, 1e-12) << d << " " << n << " " << c;
}

TEST(ApproxCoverage, NondecreasingInRadius) {
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double f = approx_coverage(2.0 * i / 2000.0, 10000, 20);
    EXPECT_GE(f, prev);
    prev = f;
  }
  const AsymptoticModel m{20, 10000};
  EXPECT_EQ(approx_coverage(m, 0.5), approx_coverage(0.5, 10000, 20));
}
