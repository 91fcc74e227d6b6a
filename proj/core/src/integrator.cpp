#include "skdv/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace skdv {

std::string to_string(Scheme s) { return s == Scheme::strang ? "strang" : "lie"; }

std::size_t StepperConfig::num_steps() const {
  const double r = t_end / dt;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument("t_end must be an integer multiple of dt");
  return static_cast<std::size_t>(n);
}

std::vector<std::string> StepperConfig::validate(const SpectralGrid& grid) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (snapshot_stride == 0) throw std::invalid_argument("snapshot_stride must be positive");
  (void)num_steps();
  std::vector<std::string> warnings;
  const double km = grid.k_max();
  const double phase = dt * km * km * km;
  if (phase > splitting_phase_bound) {
    std::ostringstream os;
    os << "dt * k_max^3 = " << phase << " exceeds splitting bound " << splitting_phase_bound;
    warnings.push_back(os.str());
  }
  return warnings;
}

namespace {

const cplx kI{0.0, 1.0};

class Propagator {
 public:
  Propagator(GridPtr grid, double dt) : grid_(std::move(grid)), mu_(grid_->size()), mv_(grid_->size()) {
    const auto k = grid_->wavenumbers();
    for (std::size_t j = 0; j < k.size(); ++j) {
      mu_[j] = std::polar(1.0, -k[j] * k[j] * dt);
      mv_[j] = std::polar(1.0, k[j] * k[j] * k[j] * dt);
    }
    // The third derivative has a zero Nyquist symbol, so that mode is left alone.
    mv_[grid_->nyquist_index()] = 1.0;
  }

  void apply(SystemState& s) const {
    std::vector<cplx> c(s.u.size()), tmp(s.u.size());
    grid_->forward(s.u.samples(), c);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= mu_[j];
    grid_->inverse(c, s.u.samples());

    for (std::size_t j = 0; j < c.size(); ++j) tmp[j] = s.v[j];
    grid_->forward(tmp, c);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= mv_[j];
    grid_->inverse(c, tmp);
    for (std::size_t j = 0; j < c.size(); ++j) s.v[j] = tmp[j].real();
  }

 private:
  GridPtr grid_;
  std::vector<cplx> mu_, mv_;
};

// Spectral coefficients of the flux-derivative -d/dx(v^2/2 - gamma rho) given
// v coefficients and the frozen coefficients of gamma * rho.
class BurgersRhs {
 public:
  BurgersRhs(const SpectralGrid& grid, std::vector<cplx> gamma_rho_hat, bool dealias)
      : grid_(grid), grho_(std::move(gamma_rho_hat)), dealias_(dealias) {}

  std::vector<cplx> operator()(std::span<const cplx> v_hat) const {
    std::vector<cplx> sq;
    if (dealias_) {
      auto fine = grid_.to_fine(v_hat);
      for (auto& z : fine) z = cplx{z.real() * z.real(), 0.0};
      sq = grid_.from_fine(fine);
    } else {
      std::vector<cplx> phys(v_hat.size());
      grid_.inverse(v_hat, phys);
      for (auto& z : phys) z = cplx{z.real() * z.real(), 0.0};
      sq.resize(v_hat.size());
      grid_.forward(phys, sq);
    }
    const auto k = grid_.wavenumbers();
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = -kI * k[j] * (0.5 * sq[j] - grho_[j]);
    sq[grid_.nyquist_index()] = 0.0;
    return sq;
  }

 private:
  const SpectralGrid& grid_;
  std::vector<cplx> grho_;
  bool dealias_;
};

void rotate_u(ComplexField& u, const RealField& v, std::span<const double> rho, const ModelParams& p,
              double dt) {
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -(p.alpha * v[j] + p.beta * rho[j]) * dt);
}

void advance_v(RealField& v, const ComplexField& u, const ModelParams& p, double dt, bool dealias) {
  const auto& grid = v.grid();
  const std::size_t n = v.size();
  std::vector<cplx> grho;
  if (p.gamma == 0.0) {
    grho.assign(n, cplx{});
  } else {
    auto uc = spectrum(u);
    if (dealias) {
      auto fine = grid.to_fine(uc);
      for (auto& z : fine) z = p.gamma * std::norm(z);
      grho = grid.from_fine(fine);
    } else {
      std::vector<cplx> phys(n);
      for (std::size_t j = 0; j < n; ++j) phys[j] = p.gamma * std::norm(u[j]);
      grho.resize(n);
      grid.forward(phys, grho);
    }
  }
  const BurgersRhs rhs(grid, std::move(grho), dealias);

  std::vector<cplx> y(n), stage(n), acc(n);
  for (std::size_t j = 0; j < n; ++j) stage[j] = v[j];
  grid.forward(stage, y);

  auto k1 = rhs(y);
  for (std::size_t j = 0; j < n; ++j) stage[j] = y[j] + 0.5 * dt * k1[j];
  auto k2 = rhs(stage);
  for (std::size_t j = 0; j < n; ++j) stage[j] = y[j] + 0.5 * dt * k2[j];
  auto k3 = rhs(stage);
  for (std::size_t j = 0; j < n; ++j) stage[j] = y[j] + dt * k3[j];
  auto k4 = rhs(stage);
  for (std::size_t j = 0; j < n; ++j) acc[j] = y[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

  grid.inverse(acc, stage);
  for (std::size_t j = 0; j < n; ++j) v[j] = stage[j].real();
}

void nonlinear_in_place(SystemState& s, double dt, const ModelParams& p, bool dealias, bool symmetric) {
  std::vector<double> rho(s.u.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(s.u[j]);
  if (symmetric) {
    rotate_u(s.u, s.v, rho, p, 0.5 * dt);
    advance_v(s.v, s.u, p, dt, dealias);
    rotate_u(s.u, s.v, rho, p, 0.5 * dt);
  } else {
    rotate_u(s.u, s.v, rho, p, dt);
    advance_v(s.v, s.u, p, dt, dealias);
  }
}

}  // namespace

SystemState dispersion_step(const SystemState& s, double dt) {
  SystemState out = s;
  Propagator(s.grid_ptr(), dt).apply(out);
  out.time = s.time + dt;
  return out;
}

SystemState nonlinear_step(const SystemState& s, double dt, const ModelParams& p, bool dealias, bool symmetric) {
  if (!s.all_finite()) throw std::domain_error("nonlinear_step: non-finite input state");
  SystemState out = s;
  nonlinear_in_place(out, dt, p, dealias, symmetric);
  if (!out.all_finite()) throw std::domain_error("nonlinear_step: blow-up (non-finite values produced)");
  return out;
}

SystemState step(const SystemState& s, double dt, const ModelParams& p, Scheme scheme, bool dealias) {
  SystemState out = s;
  if (scheme == Scheme::strang) {
    const Propagator half(s.grid_ptr(), 0.5 * dt);
    half.apply(out);
    nonlinear_in_place(out, dt, p, dealias, true);
    half.apply(out);
  } else {
    Propagator(s.grid_ptr(), dt).apply(out);
    nonlinear_in_place(out, dt, p, dealias, false);
  }
  out.time = s.time + dt;
  return out;
}

namespace {

double v_h1_norm(const RealField& v) {
  const auto c = spectrum(v);
  const auto& g = v.grid();
  const auto k = g.wavenumbers();
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += (1.0 + k[j] * k[j]) * std::norm(c[j]);
  return std::sqrt(s * g.dx() / static_cast<double>(g.size()));
}

}  // namespace

RunResult run(const SystemState& initial, const StepperConfig& cfg, const ModelParams& p, StepObserver* observer) {
  const Regime regime = p.regime();
  if (regime == Regime::invalid) throw std::invalid_argument("model regime invalid: alpha * gamma < 0");
  if (regime == Regime::decoupled_test && !cfg.allow_test_regime)
    throw std::invalid_argument("decoupled parameters are a test regime; enable it explicitly");
  if (!initial.all_finite()) throw std::domain_error("run: non-finite initial state");

  RunResult result{initial, 0, false, {}, false, 0.0, std::nullopt, {}};
  result.warnings = cfg.validate(initial.grid());
  if (regime == Regime::decoupled_test) result.warnings.emplace_back("decoupled test regime");

  const std::size_t steps = cfg.num_steps();
  const double t0 = initial.time;
  const auto& grid = initial.grid_ptr();
  const Propagator half(grid, 0.5 * cfg.dt), full(grid, cfg.dt);
  SystemState& s = result.final_state;

  auto snapshot = [&](std::size_t n) {
    const double bm = outer_mass_fraction(s);
    result.max_boundary_mass = std::max(result.max_boundary_mass, bm);
    if (bm > cfg.boundary_threshold && !result.boundary_flag) {
      result.boundary_flag = true;
      result.first_flag_time = s.time;
    }
    if (cfg.blowup_h1_limit) {
      const double h1 = v_h1_norm(s.v);
      if (h1 > *cfg.blowup_h1_limit) {
        std::ostringstream os;
        os << "||v||_H1 = " << h1 << " exceeds limit " << *cfg.blowup_h1_limit << " at t = " << s.time;
        result.blowup = true;
        result.blowup_reason = os.str();
      }
    }
    if (observer) observer->on_snapshot(s, n, bm);
  };

  if (observer) observer->on_start(s);
  snapshot(0);
  for (std::size_t n = 1; n <= steps && !result.blowup; ++n) {
    if (cfg.scheme == Scheme::strang) {
      half.apply(s);
      nonlinear_in_place(s, cfg.dt, p, cfg.dealias, true);
      half.apply(s);
    } else {
      full.apply(s);
      nonlinear_in_place(s, cfg.dt, p, cfg.dealias, false);
    }
    s.time = t0 + static_cast<double>(n) * cfg.dt;
    result.steps_taken = n;
    if (!s.all_finite()) {
      std::ostringstream os;
      os << "non-finite sample at t = " << s.time;
      result.blowup = true;
      result.blowup_reason = os.str();
      break;
    }
    if (observer) observer->on_step(s, n);
    if (n % cfg.snapshot_stride == 0 || n == steps) snapshot(n);
  }
  return result;
}

}  // namespace skdv
