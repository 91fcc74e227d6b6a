#pragma once

#include <span>
#include <vector>

#include "skdv/model.hpp"

namespace skdv {

struct MomentSample {
  double time = 0.0;
  double b_moment = 0.0;  // int x v
  double u_moment = 0.0;  // int x |u|^2
  double f_moment = 0.0;  // -(2 alpha / gamma) b_moment + u_moment
  double predicted_slope_f = 0.0;
  double v_l2_sq = 0.0;   // ||v||^2, for the rate of b_moment
  bool boundary_flag = false;
};

// Slope of F obtained by integrating the first-moment laws:
//   dB/dt = ||v||^2 / 2 - gamma ||u0||^2,  d/dt int x|u|^2 = (alpha ||v||^2 - Q(0)) / gamma,
// hence dF/dt = 2 alpha ||u0||^2 - Q(0) / gamma.
double predicted_slope_f(const SystemState& initial, const ModelParams& p);
// The slope as printed alongside the breather argument: -(Q(0)/gamma + 2 alpha ||u0||^2).
double printed_slope_f(const SystemState& initial, const ModelParams& p);

MomentSample moment_sample(const SystemState& s, const ModelParams& p, double predicted_slope,
                           double boundary_threshold = kDefaultBoundaryThreshold);

struct DriftReport {
  double fitted_slope = 0.0;
  double intercept = 0.0;
  double predicted_slope = 0.0;
  double slope_error = 0.0;       // |fitted - predicted|
  double relative_error = 0.0;    // slope_error / |predicted|
  double max_fit_deviation = 0.0; // max |F - affine fit|
  bool informative = true;        // predicted slope not near zero
  bool boundary_flag = false;
};

DriftReport drift_check(std::span<const MomentSample> series, double near_zero_slope = 1e-8);

// Rate of b_moment from samples (4th-order differences in the interior) against
// ||v||^2/2 - gamma ||u0||^2. Samples must be equally spaced.
struct BRateReport {
  double max_error = 0.0;
  std::vector<double> times;
  std::vector<double> errors;
};

BRateReport b_rate_check(std::span<const MomentSample> series, const ModelParams& p, double u0_l2_sq);

}  // namespace skdv
