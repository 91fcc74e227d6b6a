#pragma once

#include <cstddef>

namespace skdv {

// g(x) = 1 / (e^x + e^-x), evaluated without overflow.
double weight_g(double x);
// w(x) = arctan(e^x); w' = g.
double weight_w(double x);
double weight_g_d1(double x);  // g' = w''
double weight_g_d2(double x);  // g'' = w'''

struct WeightBoundReport {
  double constant = 0.0;      // smallest C with |w''| + |w'''| <= C e^{-|x|} on the samples
  double argmax = 0.0;        // where the ratio peaks
  double ratio_at_edge = 0.0; // ratio at the largest |x| sampled
  std::size_t samples = 0;
};

WeightBoundReport weight_derivative_bounds(double x_max = 40.0, std::size_t samples = 8001);

}  // namespace skdv
