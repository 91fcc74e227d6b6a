#include "skdv/virial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "skdv/weights.hpp"

namespace skdv {

double VirialConfig::lambda1(double t) const { return std::pow(t, p1); }
double VirialConfig::lambda2(double t) const { return std::pow(t, p1 * p2); }
double VirialConfig::eta(double t) const { return std::pow(t, r1()); }

double VirialConfig::theta3_value(const ModelParams& p) const {
  if (theta3) return *theta3;
  if (p.alpha == 0.0) throw std::invalid_argument("automatic theta3 needs alpha != 0");
  return 2.0 * theta2 * p.gamma / p.alpha;
}

std::vector<std::string> VirialConfig::violations() const {
  std::vector<std::string> out;
  if (!(p2 > 1.0)) out.emplace_back("p2 must exceed 1");
  if (!(p1 > 0.0 && p1 < 2.0 / (p2 + 2.0))) out.emplace_back("p1 must lie in (0, 2/(p2+2))");
  if (!(theta2 > 0.0)) out.emplace_back("theta2 must be positive");
  if (theta3 && !(*theta3 > 0.0)) out.emplace_back("theta3 must be positive");
  return out;
}

void VirialConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid virial configuration:";
  for (const auto& s : v) os << ' ' << s << ';';
  throw std::invalid_argument(os.str());
}

void check_time(double t, TimeMode mode) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("virial functionals need t > 0");
  if (mode == TimeMode::accumulator && t < 2.0)
    throw std::invalid_argument("virial functionals are defined on t >= 2; use exploration mode below that");
}

WeightFields weight_fields(const SpectralGrid& grid, const VirialConfig& cfg, double t) {
  const double l1 = cfg.lambda1(t), l2 = cfg.lambda2(t);
  const double r1 = cfg.p1 / t, r2 = cfg.p1 * cfg.p2 / t;  // lambda_i' / lambda_i
  const std::size_t n = grid.size();
  WeightFields f;
  f.t = t;
  f.w_g.resize(n);
  f.wp_g.resize(n);
  f.w_gp.resize(n);
  f.d_xx.resize(n);
  f.d_t.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y1 = grid.x(j) / l1, y2 = grid.x(j) / l2;
    const double w = weight_w(y1), wp = weight_g(y1), wpp = weight_g_d1(y1);
    const double g = weight_g(y2), gp = weight_g_d1(y2), gpp = weight_g_d2(y2);
    f.w_g[j] = w * g;
    f.wp_g[j] = wp * g;
    f.w_gp[j] = w * gp;
    f.d_xx[j] = wpp * g / (l1 * l1) + 2.0 * wp * gp / (l1 * l2) + w * gpp / (l2 * l2);
    f.d_t[j] = -r1 * y1 * wp * g - r2 * y2 * w * gp;
  }
  return f;
}

std::vector<double> accumulator_weight(const SpectralGrid& grid, const VirialConfig& cfg, double t) {
  const double l1 = cfg.lambda1(t), l2 = cfg.lambda2(t);
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = weight_g(grid.x(j) / l1) * weight_g(grid.x(j) / l2);
  return out;
}

namespace {

double weighted_sum(std::span<const double> a, std::span<const double> w, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * w[j];
  return s * dx;
}

std::vector<double> momentum_density(const SystemState& s) {
  const auto ux = derivative(s.u, 1);
  std::vector<double> out(s.u.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (s.u[j] * std::conj(ux[j])).imag();
  return out;
}

}  // namespace

double functional_J2(const SystemState& s, const VirialConfig& cfg, const ModelParams&, TimeMode mode) {
  check_time(s.time, mode);
  const auto w = weight_fields(s.grid(), cfg, s.time);
  std::vector<double> v2(s.v.size());
  for (std::size_t j = 0; j < v2.size(); ++j) v2[j] = s.v[j] * s.v[j];
  return cfg.theta2 / cfg.eta(s.time) * weighted_sum(v2, w.w_g, s.grid().dx());
}

double functional_J3(const SystemState& s, const VirialConfig& cfg, const ModelParams& p, TimeMode mode) {
  check_time(s.time, mode);
  const auto w = weight_fields(s.grid(), cfg, s.time);
  return cfg.theta3_value(p) / cfg.eta(s.time) * weighted_sum(momentum_density(s), w.w_g, s.grid().dx());
}

VirialTerms virial_terms(const SystemState& s, const VirialConfig& cfg, const ModelParams& p, TimeMode mode) {
  const double t = s.time;
  check_time(t, mode);
  const auto& grid = s.grid();
  const double dx = grid.dx();
  const std::size_t n = grid.size();
  const auto wf = weight_fields(grid, cfg, t);
  const double eta = cfg.eta(t), l2 = cfg.lambda2(t);
  const double th2 = cfg.theta2, th3 = cfg.theta3_value(p);
  const double a = p.alpha, b = p.beta, g = p.gamma;
  const double eta_rate = cfg.r1() / t;  // eta' / eta

  const auto vx = derivative(s.v, 1);
  const auto ux = derivative(s.u, 1);
  const auto vt = time_derivative_v(s, p);
  const auto ut = time_derivative_u(s, p);
  const auto uxt = derivative(ut, 1);

  std::vector<double> v2(n), vx2(n), cubic(n), vvx(n), rho_vx(n), P(n), R(n), ux2(n), rho2(n), vvt(n), Pt(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = s.v[j], rho = std::norm(s.u[j]);
    v2[j] = v * v;
    vx2[j] = vx[j] * vx[j];
    cubic[j] = v * v * v / 3.0 - g * rho * v;
    vvx[j] = v * vx[j];
    rho_vx[j] = rho * vx[j];
    const cplx uu = s.u[j] * std::conj(ux[j]);
    P[j] = uu.imag();
    R[j] = uu.real();
    ux2[j] = std::norm(ux[j]);
    rho2[j] = rho * rho;
    vvt[j] = v * vt[j];
    Pt[j] = (ut[j] * std::conj(ux[j]) + s.u[j] * std::conj(uxt[j])).imag();
  }

  VirialTerms r;
  r.t = t;
  const double int_v2_W = weighted_sum(v2, wf.w_g, dx);
  const double int_P_W = weighted_sum(P, wf.w_g, dx);
  r.j2 = th2 / eta * int_v2_W;
  r.j3 = th3 / eta * int_P_W;

  r.lhs2 = 3.0 * th2 / t * weighted_sum(vx2, wf.wp_g, dx);
  r.j21 = -th2 * eta_rate / eta * int_v2_W;
  r.j22 = th2 / eta * weighted_sum(v2, wf.d_t, dx);
  r.j23 = 2.0 * th2 / (eta * l2) * weighted_sum(cubic, wf.w_gp, dx);
  r.j24 = -3.0 * th2 / (eta * l2) * weighted_sum(vx2, wf.w_gp, dx) - 2.0 * th2 / eta * weighted_sum(vvx, wf.d_xx, dx);
  r.flux2 = 2.0 * th2 / t * weighted_sum(cubic, wf.wp_g, dx);
  r.mixed_integral = weighted_sum(rho_vx, wf.w_g, dx);
  r.mixed2 = -2.0 * th2 * g / eta * r.mixed_integral;

  r.lhs3 = 2.0 * th3 / t * weighted_sum(ux2, wf.wp_g, dx) + b * th3 / (2.0 * t) * weighted_sum(rho2, wf.wp_g, dx);
  r.j31 = th3 / eta * (weighted_sum(P, wf.d_t, dx) - eta_rate * int_P_W);
  r.j321 = -2.0 * th3 / (eta * l2) * weighted_sum(ux2, wf.w_gp, dx);
  r.j322 = -th3 / eta * weighted_sum(R, wf.d_xx, dx);
  r.j323 = -b * th3 / (2.0 * eta * l2) * weighted_sum(rho2, wf.w_gp, dx);
  r.mixed3 = th3 * a / eta * r.mixed_integral;

  r.dj2_dt_equation = r.j21 + r.j22 + 2.0 * th2 / eta * weighted_sum(vvt, wf.w_g, dx);
  r.dj3_dt_equation = r.j31 + th3 / eta * weighted_sum(Pt, wf.w_g, dx);
  return r;
}

double central_difference5(std::span<const double> f, double h) {
  if (f.size() != 5) throw std::invalid_argument("central difference needs five samples");
  return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

namespace {

double window_spacing(std::span<const SystemState> window) {
  if (window.size() != 5) throw std::invalid_argument("identity residuals need exactly five snapshots");
  const double h = window[1].time - window[0].time;
  if (!(h > 0.0)) throw std::invalid_argument("snapshot times must increase");
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i].grid_ptr() != window[0].grid_ptr()) throw std::invalid_argument("snapshots on different grids");
    if (std::abs(window[i].time - window[i - 1].time - h) > 1e-9 * h)
      throw std::invalid_argument("snapshots must be equally spaced");
  }
  return h;
}

template <class F>
double functional_rate(std::span<const SystemState> window, double h, F functional) {
  double vals[5];
  for (std::size_t i = 0; i < 5; ++i) vals[i] = functional(window[i]);
  return central_difference5(vals, h);
}

}  // namespace

IdentityResidualSample identity_residual_prop2(std::span<const SystemState> window, const VirialConfig& cfg,
                                               const ModelParams& p, double dt_used, TimeMode mode) {
  const double h = window_spacing(window);
  const auto& c = window[2];
  const auto terms = virial_terms(c, cfg, p, mode);
  IdentityResidualSample r;
  r.time = c.time;
  r.dt_used = dt_used;
  r.dj_dt = functional_rate(window, h, [&](const SystemState& s) { return functional_J2(s, cfg, p, TimeMode::exploration); });
  r.lhs = terms.lhs2;
  r.j_int_terms = terms.j2_int();
  r.rhs = -r.dj_dt + r.j_int_terms + terms.flux2 + terms.mixed2;
  r.residual = r.lhs - r.rhs;
  r.j_int_remainder = terms.lhs2 + terms.dj2_dt_equation - terms.flux2 - terms.mixed2;
  r.equation_residual = r.j_int_remainder - r.j_int_terms;
  return r;
}

IdentityResidualSample identity_residual_prop3(std::span<const SystemState> window, const VirialConfig& cfg,
                                               const ModelParams& p, double dt_used, TimeMode mode) {
  const double h = window_spacing(window);
  const auto& c = window[2];
  const auto terms = virial_terms(c, cfg, p, mode);
  IdentityResidualSample r;
  r.time = c.time;
  r.dt_used = dt_used;
  r.dj_dt = functional_rate(window, h, [&](const SystemState& s) { return functional_J3(s, cfg, p, TimeMode::exploration); });
  r.lhs = terms.lhs3;
  r.j_int_terms = terms.j3_int();
  r.rhs = -r.dj_dt + r.j_int_terms + terms.mixed3;
  r.residual = r.lhs - r.rhs;
  r.j_int_remainder = terms.lhs3 + terms.dj3_dt_equation - terms.mixed3;
  r.equation_residual = r.j_int_remainder - r.j_int_terms;
  return r;
}

CombinedResidualSample identity_residual_combined(std::span<const SystemState> window, const VirialConfig& cfg,
                                                  const ModelParams& p, double dt_used, TimeMode mode) {
  if (!cfg.theta3_auto()) throw std::invalid_argument("combined identity requires theta3 = auto");
  const double h = window_spacing(window);
  const auto& c = window[2];
  const auto terms = virial_terms(c, cfg, p, mode);
  const double th3 = cfg.theta3_value(p);
  const double eta = cfg.eta(c.time);

  CombinedResidualSample out;
  out.prop2 = identity_residual_prop2(window, cfg, p, dt_used, mode);
  out.prop3 = identity_residual_prop3(window, cfg, p, dt_used, mode);
  out.mixed_coefficient = -2.0 * cfg.theta2 * p.gamma + th3 * p.alpha;

  auto& r = out.combined;
  r.time = c.time;
  r.dt_used = dt_used;
  r.dj_dt = functional_rate(window, h, [&](const SystemState& s) {
    return functional_J2(s, cfg, p, TimeMode::exploration) + functional_J3(s, cfg, p, TimeMode::exploration);
  });
  r.lhs = terms.lhs2 + terms.lhs3;
  r.j_int_terms = terms.j2_int() + terms.j3_int();
  const double mixed = out.mixed_coefficient / eta * terms.mixed_integral;
  r.rhs = -r.dj_dt + r.j_int_terms + terms.flux2 + mixed;
  r.residual = r.lhs - r.rhs;
  r.j_int_remainder = r.lhs + terms.dj2_dt_equation + terms.dj3_dt_equation - terms.flux2 - mixed;
  r.equation_residual = r.j_int_remainder - r.j_int_terms;
  out.sum_mismatch = r.residual - (out.prop2.residual + out.prop3.residual);
  return out;
}

std::vector<double> momentum_density_rate(const SystemState& s, const ModelParams& p) {
  const auto& grid = s.grid_ptr();
  const std::size_t n = s.u.size();
  const auto ux = derivative(s.u, 1);
  const auto vx = derivative(s.v, 1);
  std::vector<double> re(n), ux2(n), rho2(n);
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = (s.u[j] * std::conj(ux[j])).real();
    ux2[j] = std::norm(ux[j]);
    const double rho = std::norm(s.u[j]);
    rho2[j] = rho * rho;
  }
  const auto re_xx = derivative(RealField(grid, re), 2);
  const auto ux2_x = derivative(RealField(grid, ux2), 1);
  const auto rho2_x = derivative(RealField(grid, rho2), 1);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = -re_xx[j] + 2.0 * ux2_x[j] + p.alpha * std::norm(s.u[j]) * vx[j] + 0.5 * p.beta * rho2_x[j];
  return out;
}

double pointwise_law_discrepancy(const SystemState& s, const ModelParams& p) {
  const auto law = momentum_density_rate(s, p);
  const auto ux = derivative(s.u, 1);
  const auto ut = time_derivative_u(s, p);
  const auto uxt = derivative(ut, 1);
  double m = 0.0;
  for (std::size_t j = 0; j < law.size(); ++j) {
    const double pt = (ut[j] * std::conj(ux[j]) + s.u[j] * std::conj(uxt[j])).imag();
    m = std::max(m, std::abs(pt - law[j]));
  }
  return m;
}

double pointwise_law_discrepancy(std::span<const SystemState> window, const ModelParams& p) {
  const double h = window_spacing(window);
  std::vector<std::vector<double>> dens;
  for (const auto& s : window) dens.push_back(momentum_density(s));
  const auto law = momentum_density_rate(window[2], p);
  double m = 0.0;
  for (std::size_t j = 0; j < law.size(); ++j) {
    const double vals[5] = {dens[0][j], dens[1][j], dens[2][j], dens[3][j], dens[4][j]};
    m = std::max(m, std::abs(central_difference5(vals, h) - law[j]));
  }
  return m;
}

KeyIdentityReport check_key_identities(const SystemState& s, const ModelParams& p) {
  const double a = p.alpha, b = p.beta, g = p.gamma;
  if (a == 0.0 || g == 0.0) throw std::invalid_argument("key identities need alpha != 0 and gamma != 0");
  KeyIdentityReport r;
  auto track = [](IdentityCheck& c, double lhs, double rhs, std::initializer_list<double> terms) {
    c.max_abs = std::max(c.max_abs, std::abs(lhs - rhs));
    c.scale = std::max(c.scale, std::abs(lhs));
    for (double t : terms) c.scale = std::max(c.scale, std::abs(t));
  };
  for (std::size_t j = 0; j < s.u.size(); ++j) {
    const double v = s.v[j], m = std::abs(s.u[j]), rho = m * m;
    const double kdv_mix = v * v / 2.0 - g * rho;
    const double coupling = a * v + b * rho;

    const double c1 = 2.0 * v / 3.0 * kdv_mix, c2 = -g * rho / (3.0 * a) * coupling, c3 = g * b * rho * rho / (3.0 * a);
    track(r.cc1, v * v * v / 3.0 - g * rho * v, c1 + c2 + c3, {c1, c2, c3});

    const double q1 = 4.0 * g * g * rho * rho, q2 = 4.0 * (v * v / 2.0 + g * rho) * kdv_mix;
    track(r.quartic, v * v * v * v, q1 + q2, {q1, q2});

    const double k1 = -m * kdv_mix / g, k2 = v / (2.0 * g * a) * m * coupling, k3 = -b / (2.0 * g * a) * v * m * rho;
    track(r.cubic, m * rho, k1 + k2 + k3, {k1, k2, k3});
  }
  return r;
}

}  // namespace skdv
