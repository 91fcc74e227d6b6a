#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "skdv/weights.hpp"

namespace skdv {
namespace {

template <class F>
double fd4(F f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

TEST(Weights, ValuesAtTheOrigin) {
  EXPECT_DOUBLE_EQ(weight_w(0.0), std::numbers::pi / 4.0);
  EXPECT_DOUBLE_EQ(weight_g(0.0), 0.5);
  EXPECT_DOUBLE_EQ(weight_g_d1(0.0), 0.0);
  EXPECT_DOUBLE_EQ(weight_g_d2(0.0), -0.5);
}

TEST(Weights, ClosedFormsAwayFromTheOrigin) {
  for (double x : {-7.0, -1.3, 0.4, 2.0, 15.0}) {
    EXPECT_NEAR(weight_g(x), 1.0 / (2.0 * std::cosh(x)), 1e-16 + 1e-15 * weight_g(x));
    EXPECT_NEAR(weight_w(x), std::atan(std::exp(x)), 1e-15);
  }
  EXPECT_NEAR(weight_w(60.0), std::numbers::pi / 2.0, 1e-15);
  EXPECT_GT(weight_g(800.0), -1.0);  // no overflow
  EXPECT_EQ(weight_g(-800.0), weight_g(800.0));
}

TEST(Weights, DerivativeChainHolds) {
  const double h = 1e-3;
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    EXPECT_NEAR(fd4(weight_w, x, h), weight_g(x), 1e-11) << x;
    EXPECT_NEAR(fd4(weight_g, x, h), weight_g_d1(x), 1e-11) << x;
    EXPECT_NEAR(fd4(weight_g_d1, x, h), weight_g_d2(x), 1e-11) << x;
  }
}

TEST(Weights, WIsIncreasingAndBounded) {
  double prev = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.5) {
    const double w = weight_w(x);
    EXPECT_GT(w, prev);
    EXPECT_LT(w, std::numbers::pi / 2.0 + 1e-15);
    prev = w;
  }
}

// |g'| + |g''| <= C e^{-|x|}; the ratio increases to 2 as |x| grows.
TEST(Weights, DerivativeBoundIsFinite) {
  const auto r = weight_derivative_bounds(40.0, 8001);
  EXPECT_LE(r.constant, 2.0 + 1e-12);
  EXPECT_GT(r.constant, 1.99);
  EXPECT_NEAR(r.ratio_at_edge, 2.0, 1e-6);
  EXPECT_EQ(r.samples, 8001u);
}

}  // namespace
}  // namespace skdv
