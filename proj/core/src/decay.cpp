#include "skdv/decay.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace skdv {

void WindowSpec::validate() const {
  if (!(p > 0.0 && p < 2.0 / 3.0)) throw std::invalid_argument("window exponent p must lie in (0, 2/3)");
  if (!(m >= 0.0 && m < 1.0 - p / 2.0)) throw std::invalid_argument("window center exponent m must lie in [0, 1 - p/2)");
  if (!(constant > 0.0) || !std::isfinite(constant)) throw std::invalid_argument("window constant must be positive");
}

WindowedSample windowed_energies(const SystemState& s, const WindowSpec& window, const ModelParams& p, double power) {
  if (!(s.time > 0.0)) throw std::invalid_argument("windowed energies need t > 0");
  const auto& grid = s.grid();
  const double c = window.center(s.time), hw = window.half_width(s.time);
  WindowedSample out;
  out.time = s.time;
  out.clipped = c - hw < -grid.half_length() || c + hw >= grid.half_length();
  const auto ux = derivative(s.u, 1);
  const auto vx = derivative(s.v, 1);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::abs(grid.x(j) - c) > hw) continue;
    const double v = s.v[j], m = std::abs(s.u[j]), rho = m * m;
    out.mixed += std::abs(v * v / 2.0 - p.gamma * rho);
    out.coupling += m * std::abs(p.alpha * v + p.beta * rho);
    out.grad_u += std::norm(ux[j]);
    out.grad_v += vx[j] * vx[j];
    out.power_u += std::pow(m, power);
    out.power_v += std::pow(std::abs(v), power);
  }
  const double dx = grid.dx();
  out.mixed *= dx;
  out.coupling *= dx;
  out.grad_u *= dx;
  out.grad_v *= dx;
  out.power_u *= dx;
  out.power_v *= dx;
  return out;
}

WindowedEnergy windowed_energy(const SystemState& s, const WindowSpec& window, EnergyKind kind, const ModelParams& p,
                               double power) {
  const auto all = windowed_energies(s, window, p, power);
  WindowedEnergy e;
  e.clipped = all.clipped;
  switch (kind) {
    case EnergyKind::mixed: e.value = all.mixed; break;
    case EnergyKind::coupling: e.value = all.coupling; break;
    case EnergyKind::grad_v: e.value = all.grad_v; break;
    case EnergyKind::grad_u: e.value = all.grad_u; break;
    case EnergyKind::power_v: e.value = all.power_v; break;
    case EnergyKind::power_u: e.value = all.power_u; break;
  }
  return e;
}

namespace {

int dyadic_exponent(double t) { return static_cast<int>(std::floor(std::log2(t))); }

}  // namespace

LiminfReport liminf_tracker(std::span<const double> times, std::span<const double> values, double decay_factor) {
  if (times.size() != values.size()) throw std::invalid_argument("liminf tracker: series lengths differ");
  LiminfReport r;
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("liminf tracker: times must increase");
    running = std::min(running, values[i]);
    r.running_min.push_back(running);
    if (!(times[i] > 0.0)) continue;
    const int j = dyadic_exponent(times[i]);
    if (r.blocks.empty() || r.blocks.back().exponent != j) r.blocks.push_back({j, times[i], values[i], 0});
    auto& b = r.blocks.back();
    ++b.samples;
    if (values[i] < b.value) {
      b.value = values[i];
      b.time = times[i];
    }
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& b : r.blocks)
    if (b.value > 0.0) pts.emplace_back(std::log(b.time), std::log(b.value));
  if (pts.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0.0, sxx = 0.0;
    for (auto [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    r.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  if (!r.blocks.empty()) {
    const double first = r.blocks.front().value, last = r.blocks.back().value;
    r.first_to_last = last > 0.0 ? first / last : (first > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    r.decay_declared = r.blocks.size() >= 2 && r.first_to_last >= decay_factor;
  }
  return r;
}

std::string to_string(AccumulatorTag tag) {
  switch (tag) {
    case AccumulatorTag::mixed_kdv: return "mixed_kdv";
    case AccumulatorTag::schrodinger_coupling: return "schrodinger_coupling";
    case AccumulatorTag::gradient_v: return "gradient_v";
    case AccumulatorTag::gradient_u: return "gradient_u";
    case AccumulatorTag::quartic_u: return "quartic_u";
    case AccumulatorTag::cubic_u: return "cubic_u";
    case AccumulatorTag::uv_product: return "uv_product";
    case AccumulatorTag::power_k: return "power_k";
  }
  return "unknown";
}

AccumulatorSet::AccumulatorSet() {
  for (std::size_t i = 0; i < kNumAccumulators; ++i) entries[i].tag = static_cast<AccumulatorTag>(i);
}

std::array<double, kNumAccumulators> accumulator_integrands(const SystemState& s, const VirialConfig& cfg,
                                                            const ModelParams& p, double power_excess) {
  const double t = s.time;
  check_time(t, TimeMode::accumulator);
  const auto weight = accumulator_weight(s.grid(), cfg, t);
  const auto ux = derivative(s.u, 1);
  const auto vx = derivative(s.v, 1);
  std::array<double, kNumAccumulators> sums{};
  for (std::size_t j = 0; j < weight.size(); ++j) {
    const double wt = weight[j];
    const double v = s.v[j], m = std::abs(s.u[j]), rho = m * m;
    sums[0] += wt * std::abs(v * v / 2.0 - p.gamma * rho);
    sums[1] += wt * m * std::abs(p.alpha * v + p.beta * rho);
    sums[2] += wt * vx[j] * vx[j];
    sums[3] += wt * std::norm(ux[j]);
    sums[4] += wt * rho * rho;
    sums[5] += wt * rho * m;
    sums[6] += wt * m * std::abs(v);
    sums[7] += wt * std::pow(std::abs(v), 2.0 + power_excess);
  }
  const double scale = s.grid().dx() / t;
  for (auto& x : sums) x *= scale;
  return sums;
}

void weighted_accumulator_step(const SystemState& s, const VirialConfig& cfg, const ModelParams& p,
                               AccumulatorSet& acc) {
  const auto f = accumulator_integrands(s, cfg, p, acc.power_excess);
  if (!acc.started) {
    acc.started = true;
    acc.last_integrand = f;
    for (auto& e : acc.entries) e.last_time = s.time;
    return;
  }
  for (std::size_t i = 0; i < kNumAccumulators; ++i) {
    auto& e = acc.entries[i];
    const double dt = s.time - e.last_time;
    if (dt < 0.0) throw std::invalid_argument("accumulator step backwards in time");
    e.value += 0.5 * dt * (acc.last_integrand[i] + f[i]);
    e.last_time = s.time;
  }
  acc.last_integrand = f;
}

std::vector<BlockIncrement> block_increments(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("block increments: series lengths differ");
  std::vector<BlockIncrement> out;
  if (times.empty()) return out;
  double prev_value = values.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const int j = dyadic_exponent(times[i]);
    if (out.empty() || out.back().exponent != j) {
      if (!out.empty()) prev_value = values[i - 1];
      out.push_back({j, times[i], times[i], 0.0});
    }
    out.back().t_end = times[i];
    out.back().increment = values[i] - prev_value;
  }
  return out;
}

SignPartition sign_partition_measure(const SystemState& s, const ModelParams& p, double rel_tol) {
  const auto& grid = s.grid();
  double scale = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j)
    scale = std::max(scale, s.v[j] * s.v[j] / 2.0 + std::abs(p.gamma) * std::norm(s.u[j]));
  const double tol = rel_tol * scale;
  SignPartition r;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = s.v[j] * s.v[j] / 2.0 - p.gamma * std::norm(s.u[j]);
    if (d > tol)
      r.plus += grid.dx();
    else if (d < -tol)
      r.minus += grid.dx();
    else
      r.zero += grid.dx();
  }
  return r;
}

GateTracker::GateTracker(ModelParams p) : p_(p), min_(std::numeric_limits<double>::infinity()) {}

void GateTracker::update(const SystemState& s) {
  for (double v : s.v.samples()) min_ = std::min(min_, p_.alpha * p_.gamma + p_.beta * v / 2.0);
}

GateReport smallness_gate_check(double tracked_min, const ModelParams& p, const SmallnessReport& smallness,
                                double tolerance) {
  GateReport r;
  r.bound = p.alpha * p.gamma / 2.0;
  r.min_value = tracked_min;
  if (!(p.beta < 0.0)) {
    r.note = "not applicable: beta >= 0";
    return r;
  }
  if (!smallness.satisfied) {
    r.note = "not applicable: smallness criterion not satisfied";
    return r;
  }
  r.applicable = true;
  r.holds = tracked_min >= r.bound - tolerance;
  return r;
}

GateReport smallness_gate_check(std::span<const SystemState> trajectory, const ModelParams& p,
                                const SmallnessReport& smallness, double tolerance) {
  GateTracker tracker(p);
  for (const auto& s : trajectory) tracker.update(s);
  return smallness_gate_check(tracker.min_value(), p, smallness, tolerance);
}

double boundary_mass(const SystemState& s) { return outer_mass_fraction(s, kOuterFraction); }

ElementaryInequalities check_elementary_inequalities(const SystemState& s, const ModelParams& p, double m,
                                                     double eps) {
  if (!(p.gamma > 0.0)) throw std::invalid_argument("elementary inequalities need gamma > 0");
  if (!(m > 0.0) || !(eps > 0.0)) throw std::invalid_argument("elementary inequalities need m > 0 and eps > 0");
  const double q = 2.0 + m;
  const double big = std::pow(eps, q / m), small = std::pow(eps, -q / 2.0);
  double sup_v = 0.0, sup_u = 0.0;
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    sup_v = std::max(sup_v, std::pow(std::abs(s.v[j]), m));
    sup_u = std::max(sup_u, std::pow(std::abs(s.u[j]), m));
  }
  ElementaryInequalities r;
  double mix = 0.0, vq = 0.0, uq = 0.0;
  for (std::size_t j = 0; j < s.v.size(); ++j) {
    const double v = std::abs(s.v[j]), u = std::abs(s.u[j]);
    mix += std::abs(v * v / 2.0 - p.gamma * u * u);
    vq += std::pow(v, q);
    uq += std::pow(u, q);
  }
  const double dx = s.grid().dx();
  mix *= dx;
  vq *= dx;
  uq *= dx;
  r.lhs_v = vq;
  r.rhs_v = 2.0 * sup_v * mix + 2.0 * p.gamma * (big * vq + small * uq);
  r.lhs_u = uq;
  r.rhs_u = sup_u / std::abs(p.gamma) * mix + (big * uq + small * vq) / (2.0 * p.gamma);
  return r;
}

}  // namespace skdv
