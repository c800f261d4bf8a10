#include <cmath>

#include <gtest/gtest.h>

#include "cavkin/special_functions.hpp"

using namespace cavkin::special;

// reference values from mpmath at 30 digits
TEST(SpecialFunctions, Erfcx) {
  EXPECT_NEAR(erfcx(0.5), 0.61569034419292587487, 1e-15);
  EXPECT_NEAR(erfcx(5.0), 0.11070463773306862637, 1e-15);
  EXPECT_NEAR(erfcx(-1.0), 5.0089800807622834, 1e-14);
  // large argument: erfcx(x) ~ 1 / (x sqrt(pi))
  EXPECT_NEAR(erfcx(1e6) * 1e6 * std::sqrt(M_PI), 1.0, 1e-12);
}

TEST(SpecialFunctions, BesselRatio) {
  EXPECT_NEAR(bessel_ratio(1.0), 0.446389965896534507, 1e-15);
  EXPECT_NEAR(bessel_ratio(1e-8), 0.5e-8, 1e-20);
  EXPECT_NEAR(bessel_ratio(500.0), 1.0 - 1.0 / 1000.0 - 1.0 / 8.0 / 250000.0 - 1.0 / 8.0 / 1.25e8, 1e-9);
}

TEST(SpecialFunctions, LogBesselI0) {
  EXPECT_NEAR(log_bessel_i0(0.3), 0.0223746886220419032417, 1e-16);
  EXPECT_NEAR(log_bessel_i0(50.0), 47.1275755018718045842, 1e-13);
  EXPECT_NEAR(log_bessel_i0(1e-6), 0.25e-12, 1e-24);
  EXPECT_NEAR(std::exp(log_bessel_i0(2.0)), bessel_i0(2.0), 1e-14);
}

TEST(SpecialFunctions, ScaledBessel) {
  for (double x : {0.1, 1.0, 7.0, 30.0}) {
    EXPECT_NEAR(bessel_i_scaled(1, x), bessel_i(1, x) * std::exp(-x), 1e-14);
  }
}

TEST(SpecialFunctions, RatioDerivativeMatchesFiniteDifference) {
  for (double x : {0.2, 1.0, 4.0}) {
    const double h = 1e-5;
    const double fd = (bessel_ratio(x + h) - bessel_ratio(x - h)) / (2 * h);
    EXPECT_NEAR(bessel_ratio_derivative(x), fd, 1e-9);
  }
}
