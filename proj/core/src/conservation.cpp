#include "skdv/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skdv {

double mass(const SystemState& s) { return l2_norm_sq(s.u); }

double q_momentum(const SystemState& s, const ModelParams& p) {
  const auto ux = derivative(s.u, 1);
  const double dx = s.grid().dx();
  double acc = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j)
    acc += p.alpha * s.v[j] * s.v[j] + 2.0 * p.gamma * (s.u[j] * std::conj(ux[j])).imag();
  return acc * dx;
}

double energy(const SystemState& s, const ModelParams& p) {
  const auto ux = derivative(s.u, 1);
  const auto vx = derivative(s.v, 1);
  const double a = p.alpha, b = p.beta, g = p.gamma;
  double acc = 0.0;
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    const double rho = std::norm(s.u[j]);
    const double v = s.v[j];
    acc += a * g * v * rho - a / 6.0 * v * v * v + 0.5 * b * g * rho * rho + 0.5 * a * vx[j] * vx[j] +
           g * std::norm(ux[j]);
  }
  return acc * s.grid().dx();
}

double h1_norm(const RealField& f) { return std::sqrt(l2_norm_sq(f) + l2_norm_sq(derivative(f, 1))); }

double h1_norm(const ComplexField& f) { return std::sqrt(l2_norm_sq(f) + l2_norm_sq(derivative(f, 1))); }

InvariantSample sample_invariants(const SystemState& s, const ModelParams& p) {
  InvariantSample out;
  out.time = s.time;
  out.mass = mass(s);
  out.q_momentum = q_momentum(s, p);
  out.energy = energy(s, p);
  out.v_l2_sq = l2_norm_sq(s.v);
  const double ux2 = l2_norm_sq(derivative(s.u, 1));
  out.ux_l2 = std::sqrt(ux2);
  out.u_h1 = std::sqrt(out.mass + ux2);
  out.v_h1 = h1_norm(s.v);
  return out;
}

double GnProfile::evaluate(double y) const {
  if (shape == Shape::gaussian) return std::exp(-y * y);
  return std::pow(1.0 / std::cosh(y), exponent);
}

GnSweep GnSweep::standard(const SpectralGrid& grid, std::size_t num_widths) {
  GnSweep s;
  s.profiles.push_back({GnProfile::Shape::gaussian, 0.0});
  for (double q : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) s.profiles.push_back({GnProfile::Shape::sech_power, q});
  const double lo = 8.0 * grid.dx(), hi = grid.half_length() / 8.0;
  const std::size_t n = std::max<std::size_t>(num_widths, 2);
  for (std::size_t i = 0; i < n; ++i)
    s.widths.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
  return s;
}

double gn_ratio(const RealField& f, GnForm form) {
  const double l2 = std::sqrt(l2_norm_sq(f));
  const double dl2 = std::sqrt(l2_norm_sq(derivative(f, 1)));
  if (l2 == 0.0 || dl2 == 0.0) return 0.0;
  const double dx = f.grid().dx();
  double acc = 0.0;
  if (form == GnForm::quartic) {
    for (double a : f.samples()) acc += a * a * a * a;
    return std::pow(acc * dx, 0.25) / (std::pow(dl2, 0.25) * std::pow(l2, 0.75));
  }
  for (double a : f.samples()) acc += std::abs(a * a * a);
  return std::cbrt(acc * dx) / (std::pow(dl2, 1.0 / 6.0) * std::pow(l2, 5.0 / 6.0));
}

GnEstimate estimate_gn_constant(const GridPtr& grid, GnForm form, const GnSweep& sweep) {
  GnEstimate best;
  for (const auto& prof : sweep.profiles) {
    for (double w : sweep.widths) {
      if (!(w > 0.0)) throw std::invalid_argument("GN sweep widths must be positive");
      std::vector<double> vals(grid->size());
      for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = sweep.amplitude * prof.evaluate(grid->x(j) / w);
      const RealField f(grid, std::move(vals));
      const SystemState probe(ComplexField(grid), f);
      if (outer_mass_fraction(probe) > 1e-12) continue;
      const double r = gn_ratio(f, form);
      ++best.evaluated;
      if (r > best.value) {
        best.value = r;
        best.best_profile = prof;
        best.best_width = w;
      }
    }
  }
  return best;
}

double default_gn_constant(const GridPtr& grid) {
  const auto sweep = GnSweep::standard(*grid);
  return std::max(estimate_gn_constant(grid, GnForm::quartic, sweep).value,
                  estimate_gn_constant(grid, GnForm::cubic, sweep).value);
}

double smallness_mu(const ModelParams& p) { return std::min(std::abs(p.gamma), std::abs(p.alpha) / 2.0); }

namespace {

void check_params(const ModelParams& p, double c_gn) {
  if (!(smallness_mu(p) > 0.0)) throw std::invalid_argument("smallness constant needs alpha != 0 and gamma != 0");
  if (!(c_gn > 0.0) || !std::isfinite(c_gn)) throw std::invalid_argument("GN constant must be positive");
}

}  // namespace

double smallness_constant(const ModelParams& p, double c) {
  check_params(p, c);
  const double a = std::abs(p.alpha), b = std::abs(p.beta), g = std::abs(p.gamma);
  const double mu = smallness_mu(p);
  const double head = 2.0 + 2.0 * g / a + 8.0 * g * g / (a * a);
  const double first = (4.0 * (c * a * g + 2.0 * a + 3.0 * g + 32.0 * g * g / mu) + 2.0 * b * g * c) / mu;
  const double mixed = a * g * g + b * g / 2.0;
  const double second = 32.0 * mixed * mixed / (mu * mu) * std::pow(c, 8);
  const double bracket = std::pow(a + 2.0 * g, 5.0 / 3.0) + std::pow(g, 10) / (std::pow(mu, 20.0 / 3.0) * std::pow(a, 5.0 / 3.0));
  const double third = std::pow(c, 24) * std::ldexp(1.0, 22) / (std::pow(mu, 4.0 / 3.0) * std::cbrt(a)) * bracket;
  return head + first + second + third;
}

double smallness_constant_intro(const ModelParams& p, double c) {
  check_params(p, c);
  const double a = std::abs(p.alpha), b = std::abs(p.beta), g = std::abs(p.gamma);
  const double mu = smallness_mu(p);
  const double head = 2.0 * (1.0 + g / a + 4.0 * g * g / (a * a));
  const double first = (4.0 * (c * a * g + 2.0 * a + 3.0 * g + 32.0 * g * g / mu) + c * b * g) / mu;
  const double mixed = a * g * g + b * g / 2.0;
  const double second = mixed * mixed / (mu * mu) * c;
  const double bracket = std::pow(a + 2.0 * g, 5.0 / 3.0) + std::pow(g, 10) / (std::pow(mu, 20.0 / 3.0) * std::pow(a, 5.0 / 3.0));
  const double third = c / (std::pow(mu, 4.0 / 3.0) * std::cbrt(a)) * bracket;
  return head + first + second + third;
}

double phi_function(double c_abg, double u0_h1, double v0_h1) {
  if (u0_h1 < 0.0 || v0_h1 < 0.0) throw std::invalid_argument("norms must be nonnegative");
  return std::sqrt(c_abg) * (u0_h1 + v0_h1 + std::pow(u0_h1, 5) + std::pow(v0_h1, 5));
}

SmallnessReport phi_smallness(double u0_h1, double v0_h1, const ModelParams& p, double c_gn) {
  SmallnessReport r;
  r.c_gn = c_gn;
  r.mu = smallness_mu(p);
  r.c_abg = smallness_constant(p, c_gn);
  r.c_abg_intro = smallness_constant_intro(p, c_gn);
  r.intro_ratio = r.c_abg_intro / r.c_abg;
  r.phi = phi_function(r.c_abg, u0_h1, v0_h1);
  r.phi_intro = phi_function(r.c_abg_intro, u0_h1, v0_h1);
  r.criterion_lhs = -p.beta * r.phi;
  r.criterion_rhs = p.alpha * p.gamma;
  r.applicable = p.alpha * p.gamma > 0.0 && p.beta < 0.0;
  r.satisfied = r.criterion_lhs <= r.criterion_rhs;
  return r;
}

double admissible_scale(double u0_h1, double v0_h1, const ModelParams& p, double c_gn) {
  if (!(p.beta < 0.0) || !(p.alpha * p.gamma > 0.0))
    throw std::invalid_argument("admissible scale needs beta < 0 and alpha * gamma > 0");
  if (u0_h1 + v0_h1 == 0.0) throw std::invalid_argument("admissible scale needs nonzero data");
  const double c = smallness_constant(p, c_gn);
  auto ok = [&](double s) { return -p.beta * phi_function(c, s * u0_h1, s * v0_h1) <= p.alpha * p.gamma; };
  double lo = 0.0, hi = 1.0;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

AprioriReport apriori_monitor(std::span<const InvariantSample> traj, double phi, const ModelParams& p) {
  AprioriReport r;
  r.phi = phi;
  r.min_margin = phi;
  if (traj.empty()) return r;
  const double q0 = traj.front().q_momentum;
  const double u0 = std::sqrt(traj.front().mass);
  for (const auto& s : traj) {
    const double sum = s.u_h1 + s.v_h1;
    r.max_norm_sum = std::max(r.max_norm_sum, sum);
    r.min_margin = std::min(r.min_margin, phi - sum);
    if (sum > phi) r.bound_holds = false;
    if (p.alpha != 0.0) {
      const double bound = (std::abs(q0) + 2.0 * std::abs(p.gamma) * u0 * s.ux_l2) / std::abs(p.alpha);
      const double excess = s.v_l2_sq - bound;
      r.max_l2_bound_excess = std::max(r.max_l2_bound_excess, excess);
      if (excess > 1e-10 * std::max(1.0, bound)) r.l2_bound_holds = false;
    }
  }
  return r;
}

}  // namespace skdv
