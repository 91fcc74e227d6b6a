#include "skdv/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skdv/conservation.hpp"
#include "skdv/virial.hpp"

namespace skdv {

namespace {

void require_gamma(const ModelParams& p) {
  if (p.gamma == 0.0) throw std::invalid_argument("moment laws need gamma != 0");
}

}  // namespace

double predicted_slope_f(const SystemState& s0, const ModelParams& p) {
  require_gamma(p);
  return 2.0 * p.alpha * mass(s0) - q_momentum(s0, p) / p.gamma;
}

double printed_slope_f(const SystemState& s0, const ModelParams& p) {
  require_gamma(p);
  return -(q_momentum(s0, p) / p.gamma + 2.0 * p.alpha * mass(s0));
}

MomentSample moment_sample(const SystemState& s, const ModelParams& p, double predicted_slope,
                           double boundary_threshold) {
  require_gamma(p);
  const auto& g = s.grid();
  MomentSample m;
  m.time = s.time;
  for (std::size_t j = 0; j < g.size(); ++j) {
    m.b_moment += g.x(j) * s.v[j];
    m.u_moment += g.x(j) * std::norm(s.u[j]);
  }
  m.b_moment *= g.dx();
  m.u_moment *= g.dx();
  m.f_moment = -2.0 * p.alpha / p.gamma * m.b_moment + m.u_moment;
  m.predicted_slope_f = predicted_slope;
  m.v_l2_sq = l2_norm_sq(s.v);
  m.boundary_flag = outer_mass_fraction(s) > boundary_threshold;
  return m;
}

DriftReport drift_check(std::span<const MomentSample> series, double near_zero_slope) {
  if (series.size() < 10) throw std::invalid_argument("drift check needs at least 10 samples");
  DriftReport r;
  const double n = static_cast<double>(series.size());
  double mt = 0.0, mf = 0.0;
  for (const auto& s : series) {
    mt += s.time;
    mf += s.f_moment;
    r.boundary_flag = r.boundary_flag || s.boundary_flag;
  }
  mt /= n;
  mf /= n;
  double stf = 0.0, stt = 0.0;
  for (const auto& s : series) {
    stf += (s.time - mt) * (s.f_moment - mf);
    stt += (s.time - mt) * (s.time - mt);
  }
  if (!(stt > 0.0)) throw std::invalid_argument("drift check needs distinct sample times");
  r.fitted_slope = stf / stt;
  r.intercept = mf - r.fitted_slope * mt;
  for (const auto& s : series)
    r.max_fit_deviation = std::max(r.max_fit_deviation, std::abs(s.f_moment - (r.intercept + r.fitted_slope * s.time)));
  r.predicted_slope = series.front().predicted_slope_f;
  r.slope_error = std::abs(r.fitted_slope - r.predicted_slope);
  r.informative = std::abs(r.predicted_slope) > near_zero_slope;
  r.relative_error = r.informative ? r.slope_error / std::abs(r.predicted_slope) : r.slope_error;
  return r;
}

BRateReport b_rate_check(std::span<const MomentSample> series, const ModelParams& p, double u0_l2_sq) {
  if (series.size() < 5) throw std::invalid_argument("rate check needs at least 5 samples");
  const double h = series[1].time - series[0].time;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (std::abs(series[i].time - series[i - 1].time - h) > 1e-9 * h)
      throw std::invalid_argument("rate check needs equally spaced samples");
  BRateReport r;
  for (std::size_t i = 2; i + 2 < series.size(); ++i) {
    const double vals[5] = {series[i - 2].b_moment, series[i - 1].b_moment, series[i].b_moment,
                            series[i + 1].b_moment, series[i + 2].b_moment};
    const double rate = central_difference5(vals, h);
    const double law = 0.5 * series[i].v_l2_sq - p.gamma * u0_l2_sq;
    const double e = std::abs(rate - law);
    r.times.push_back(series[i].time);
    r.errors.push_back(e);
    r.max_error = std::max(r.max_error, e);
  }
  return r;
}

}  // namespace skdv
