#include "skdv/weights.hpp"

#include <cmath>
#include <numbers>

namespace skdv {

double weight_g(double x) {
  const double e = std::exp(-std::abs(x));
  return e / (1.0 + e * e);
}

double weight_w(double x) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (x > 40.0) return half_pi - std::exp(-x);  // arctan(e^-x) = e^-x to double precision
  if (x > 0.0) return half_pi - std::atan(std::exp(-x));
  return std::atan(std::exp(x));
}

double weight_g_d1(double x) { return -std::tanh(x) * weight_g(x); }

double weight_g_d2(double x) {
  const double t = std::tanh(x);
  return weight_g(x) * (2.0 * t * t - 1.0);
}

WeightBoundReport weight_derivative_bounds(double x_max, std::size_t samples) {
  WeightBoundReport r;
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = -x_max + 2.0 * x_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double ratio = (std::abs(weight_g_d1(x)) + std::abs(weight_g_d2(x))) * std::exp(std::abs(x));
    if (ratio > r.constant) {
      r.constant = ratio;
      r.argmax = x;
    }
    if (i == samples - 1) r.ratio_at_edge = ratio;
  }
  return r;
}

}  // namespace skdv
