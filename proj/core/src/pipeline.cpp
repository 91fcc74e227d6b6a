#include "skdv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "skdv/csv.hpp"

namespace skdv {

namespace {

class DiagnosticsObserver final : public StepObserver {
 public:
  DiagnosticsObserver(const RunConfig& cfg, RunOutcome& out, double phi, std::optional<double> predicted_slope)
      : cfg_(cfg), out_(out), phi_(phi), slope_(predicted_slope), gate_(cfg.model) {
    out_.accumulators.power_excess = cfg.diagnostics.accumulator_power_excess;
  }

  void on_start(const SystemState& s) override { gate_.update(s); }

  void on_step(const SystemState& s, std::size_t) override {
    gate_.update(s);
    if (s.time >= cfg_.diagnostics.decay_start) weighted_accumulator_step(s, cfg_.virial, cfg_.model, out_.accumulators);
  }

  void on_snapshot(const SystemState& s, std::size_t, double boundary) override {
    const auto inv = sample_invariants(s, cfg_.model);
    out_.invariants.push_back({inv, phi_ - (inv.u_h1 + inv.v_h1)});

    if (slope_) out_.moments.push_back(moment_sample(s, cfg_.model, *slope_, cfg_.stepper.boundary_threshold));

    bool clipped = false;
    if (s.time >= cfg_.diagnostics.decay_start) {
      std::array<double, kNumAccumulators> acc{};
      for (std::size_t i = 0; i < kNumAccumulators; ++i) acc[i] = out_.accumulators.entries[i].value;
      for (std::size_t w = 0; w < cfg_.windows.size(); ++w) {
        const auto e = windowed_energies(s, cfg_.windows[w], cfg_.model, cfg_.diagnostics.power_k);
        clipped = clipped || e.clipped;
        out_.decay.push_back({w, cfg_.windows[w], e, acc});
      }
    }
    out_.flags.push_back({s.time, boundary, false, clipped});

    // Automatic theta3 divides by alpha, so decoupled test runs with alpha = 0 have no virial rows.
    if (cfg_.diagnostics.residual_every == 0 || (cfg_.virial.theta3_auto() && cfg_.model.alpha == 0.0)) return;
    window_.push_back(s);
    if (window_.size() > 5) window_.pop_front();
    ++snapshots_;
    if (window_.size() < 5) return;
    const auto& mid = window_[2];
    if (mid.time < 2.0 || (snapshots_ - 3) % cfg_.diagnostics.residual_every != 0) return;
    if (std::abs((window_[4].time - window_[3].time) - (window_[1].time - window_[0].time)) >
        1e-9 * (window_[1].time - window_[0].time))
      return;  // the last snapshot may be short
    const std::vector<SystemState> states(window_.begin(), window_.end());
    VirialRow row;
    row.time = mid.time;
    row.j2 = functional_J2(mid, cfg_.virial, cfg_.model);
    row.j3 = functional_J3(mid, cfg_.virial, cfg_.model);
    if (cfg_.virial.theta3_auto()) {
      const auto c = identity_residual_combined(states, cfg_.virial, cfg_.model, cfg_.stepper.dt);
      row.res_prop2 = c.prop2.residual;
      row.res_prop3 = c.prop3.residual;
      row.res_combined = c.combined.residual;
      row.equation_res_prop2 = c.prop2.equation_residual;
      row.equation_res_prop3 = c.prop3.equation_residual;
      row.mixed_coefficient = c.mixed_coefficient;
    } else {
      const auto r2 = identity_residual_prop2(states, cfg_.virial, cfg_.model, cfg_.stepper.dt);
      const auto r3 = identity_residual_prop3(states, cfg_.virial, cfg_.model, cfg_.stepper.dt);
      row.res_prop2 = r2.residual;
      row.res_prop3 = r3.residual;
      row.res_combined = std::numeric_limits<double>::quiet_NaN();
      row.equation_res_prop2 = r2.equation_residual;
      row.equation_res_prop3 = r3.equation_residual;
      row.mixed_coefficient = -2.0 * cfg_.virial.theta2 * cfg_.model.gamma + cfg_.virial.theta3_value(cfg_.model) * cfg_.model.alpha;
    }
    out_.virial.push_back(row);
  }

  double gate_min() const { return gate_.min_value(); }

 private:
  const RunConfig& cfg_;
  RunOutcome& out_;
  double phi_;
  std::optional<double> slope_;
  GateTracker gate_;
  std::deque<SystemState> window_;
  std::size_t snapshots_ = 0;
};

double state_distance(const SystemState& a, const SystemState& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.u.size(); ++j) s += std::norm(a.u[j] - b.u[j]) + (a.v[j] - b.v[j]) * (a.v[j] - b.v[j]);
  return std::sqrt(s * a.grid().dx());
}

RunConfig with_dt(const RunConfig& base, double dt, std::size_t stride) {
  RunConfig c = base;
  c.stepper.dt = dt;
  c.stepper.snapshot_stride = stride;
  return c;
}

// Runs without diagnostics and returns the final state.
SystemState evolve(const RunConfig& cfg, const SystemState& initial) {
  auto r = run(initial, cfg.stepper, cfg.model);
  if (r.blowup) throw std::runtime_error("evolution blew up: " + r.blowup_reason);
  return r.final_state;
}

// Collects snapshots whose times fall in [from, to].
class SnapshotCollector final : public StepObserver {
 public:
  SnapshotCollector(double from, double to) : from_(from), to_(to) {}
  void on_snapshot(const SystemState& s, std::size_t, double) override {
    if (s.time >= from_ - 1e-12 && s.time <= to_ + 1e-12) states.push_back(s);
  }
  std::vector<SystemState> states;

 private:
  double from_, to_;
};

}  // namespace

std::pair<std::vector<double>, std::vector<double>> RunOutcome::decay_series(std::size_t window,
                                                                             EnergyKind kind) const {
  std::vector<double> t, v;
  for (const auto& row : decay) {
    if (row.window != window) continue;
    t.push_back(row.energies.time);
    const auto& e = row.energies;
    switch (kind) {
      case EnergyKind::mixed: v.push_back(e.mixed); break;
      case EnergyKind::coupling: v.push_back(e.coupling); break;
      case EnergyKind::grad_v: v.push_back(e.grad_v); break;
      case EnergyKind::grad_u: v.push_back(e.grad_u); break;
      case EnergyKind::power_v: v.push_back(e.power_v); break;
      case EnergyKind::power_u: v.push_back(e.power_u); break;
    }
  }
  return {t, v};
}

int RunOutcome::exit_code(bool strict) const {
  if (result.blowup) return 3;
  if (strict && result.boundary_flag) return 4;
  return 0;
}

RunOutcome run_with_diagnostics(const RunConfig& cfg) {
  cfg.validate();
  return run_with_diagnostics(cfg, cfg.make_initial_state());
}

RunOutcome run_with_diagnostics(const RunConfig& cfg, const SystemState& initial) {
  cfg.validate();
  RunOutcome out(RunResult{initial, 0, false, {}, false, 0.0, std::nullopt, {}});
  out.config_hash = cfg.hash_hex();

  const double u0 = h1_norm(initial.u), v0 = h1_norm(initial.v);
  // The smallness constant needs alpha and gamma nonzero; decoupled test runs skip it.
  if (smallness_mu(cfg.model) > 0.0) {
    const double c_gn = cfg.diagnostics.gn_constant ? *cfg.diagnostics.gn_constant
                                                    : default_gn_constant(initial.grid_ptr());
    out.smallness = phi_smallness(u0, v0, cfg.model, c_gn);
  }
  const double phi = out.smallness.phi;

  StepperConfig stepper = cfg.stepper;
  if (!stepper.blowup_h1_limit) stepper.blowup_h1_limit = cfg.diagnostics.blowup_factor * std::max(phi, u0 + v0);

  std::optional<double> slope;
  if (cfg.model.gamma != 0.0) slope = predicted_slope_f(initial, cfg.model);

  DiagnosticsObserver obs(cfg, out, phi, slope);
  out.result = run(initial, stepper, cfg.model, &obs);

  if (!out.flags.empty() && out.result.blowup) {
    FlagRow last = out.flags.back();
    last.time = out.result.final_state.time;
    last.boundary_mass = boundary_mass(out.result.final_state);
    last.blowup = true;
    if (out.flags.back().time == last.time)
      out.flags.back() = last;
    else
      out.flags.push_back(last);
  }

  std::vector<InvariantSample> samples;
  for (const auto& r : out.invariants) samples.push_back(r.sample);
  out.apriori = apriori_monitor(samples, phi, cfg.model);
  out.gate = smallness_gate_check(obs.gate_min(), cfg.model, out.smallness);
  if (out.moments.size() >= 10) out.drift = drift_check(out.moments);
  return out;
}

void write_outputs(const RunOutcome& o, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "invariants.csv", csv_schema::invariants, o.config_hash);
    for (const auto& r : o.invariants)
      w.row({r.sample.time, r.sample.mass, r.sample.q_momentum, r.sample.energy, r.sample.u_h1, r.sample.v_h1, r.margin});
    w.finish();
  }
  {
    CsvWriter w(dir / "virial.csv", csv_schema::virial, o.config_hash);
    for (const auto& r : o.virial) w.row({r.time, r.j2, r.j3, r.res_prop2, r.res_prop3, r.res_combined});
    w.finish();
  }
  {
    CsvWriter w(dir / "decay.csv", csv_schema::decay, o.config_hash);
    for (const auto& r : o.decay) {
      const auto& e = r.energies;
      const auto& a = r.accumulators;
      auto acc = [&](AccumulatorTag t) { return a[static_cast<std::size_t>(t)]; };
      w.row({e.time, r.spec.p, r.spec.m, e.mixed, e.coupling, e.grad_u, e.grad_v, e.power_u, e.power_v,
             acc(AccumulatorTag::mixed_kdv), acc(AccumulatorTag::schrodinger_coupling), acc(AccumulatorTag::gradient_u),
             acc(AccumulatorTag::gradient_v), acc(AccumulatorTag::quartic_u)});
    }
    w.finish();
  }
  {
    CsvWriter w(dir / "moments.csv", csv_schema::moments, o.config_hash);
    for (const auto& m : o.moments) w.row({m.time, m.b_moment, m.u_moment, m.f_moment, m.predicted_slope_f});
    w.finish();
  }
  {
    CsvWriter w(dir / "flags.csv", csv_schema::flags, o.config_hash);
    for (const auto& f : o.flags)
      w.row({f.time, f.boundary_mass, f.blowup ? 1.0 : 0.0, f.window_clipped ? 1.0 : 0.0});
    w.finish();
  }
}

std::vector<double> observed_orders(std::span<const double> errors, std::span<const double> steps) {
  if (errors.size() != steps.size()) throw std::invalid_argument("observed orders: length mismatch");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    out.push_back(std::log(std::abs(errors[i]) / std::abs(errors[i + 1])) / std::log(steps[i] / steps[i + 1]));
  return out;
}

double IdentityRefinement::min_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto* v : {&order_prop2, &order_prop3, &order_combined})
    for (double x : *v) m = std::min(m, x);
  return m;
}

IdentityRefinement identity_refinement(const RunConfig& base, std::span<const double> dts, double probe_time,
                                       std::size_t stride) {
  if (!base.virial.theta3_auto()) throw std::invalid_argument("identity refinement uses theta3 = auto");
  if (probe_time < 2.0) throw std::invalid_argument("identity refinement probes t >= 2");
  const auto initial = base.make_initial_state();
  IdentityRefinement out;
  std::vector<double> r2, r3, rc, steps;
  for (double dt : dts) {
    RunConfig c = with_dt(base, dt, stride);
    const double h = static_cast<double>(stride) * dt;
    c.stepper.t_end = probe_time + 2.0 * h;
    c.validate();
    SnapshotCollector col(probe_time - 2.0 * h, probe_time + 2.0 * h);
    const auto res = run(initial, c.stepper, c.model, &col);
    if (res.blowup) throw std::runtime_error("refinement run blew up: " + res.blowup_reason);
    if (col.states.size() != 5) throw std::runtime_error("probe time is not on the snapshot lattice");
    const auto s = identity_residual_combined(col.states, c.virial, c.model, dt);
    out.rows.push_back({dt, s.combined.time, s.prop2.residual, s.prop3.residual, s.combined.residual,
                        s.prop2.equation_residual, s.prop3.equation_residual, s.mixed_coefficient, s.sum_mismatch});
    r2.push_back(s.prop2.residual);
    r3.push_back(s.prop3.residual);
    rc.push_back(s.combined.residual);
    steps.push_back(dt);
  }
  out.order_prop2 = observed_orders(r2, steps);
  out.order_prop3 = observed_orders(r3, steps);
  out.order_combined = observed_orders(rc, steps);
  return out;
}

DriftStudy invariant_drift_study(const RunConfig& base, std::span<const double> dts) {
  const auto initial = base.make_initial_state();
  const double m0 = mass(initial), q0 = q_momentum(initial, base.model), e0 = energy(initial, base.model);
  const double i0 = integrate(initial.v);
  DriftStudy out;
  for (double dt : dts) {
    RunConfig c = with_dt(base, dt, base.stepper.snapshot_stride);
    c.validate();
    const auto s = evolve(c, initial);
    out.rows.push_back({dt, std::abs(mass(s) - m0) / (m0 > 0.0 ? m0 : 1.0), std::abs(integrate(s.v) - i0),
                        std::abs(q_momentum(s, c.model) - q0), std::abs(energy(s, c.model) - e0)});
  }
  for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
    out.q_ratios.push_back(out.rows[i].q_drift / out.rows[i + 1].q_drift);
    out.energy_ratios.push_back(out.rows[i].energy_drift / out.rows[i + 1].energy_drift);
  }
  return out;
}

SelfConvergence self_convergence(const RunConfig& base, std::span<const double> dts, double reference_dt) {
  const auto initial = base.make_initial_state();
  RunConfig rc = with_dt(base, reference_dt, base.stepper.snapshot_stride);
  rc.validate();
  const auto ref = evolve(rc, initial);
  SelfConvergence out;
  for (double dt : dts) {
    RunConfig c = with_dt(base, dt, base.stepper.snapshot_stride);
    c.validate();
    out.dts.push_back(dt);
    out.errors.push_back(state_distance(evolve(c, initial), ref));
  }
  out.orders = observed_orders(out.errors, out.dts);
  return out;
}

double free_schrodinger_error(std::size_t n, double half_length, double dt, double t_end) {
  const auto grid = SpectralGrid::make(n, half_length);
  SystemState s = SystemState::zero(grid);
  for (std::size_t j = 0; j < n; ++j) s.u[j] = std::exp(-grid->x(j) * grid->x(j));
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.snapshot_stride = cfg.num_steps();
  cfg.allow_test_regime = true;
  const auto r = run(s, cfg, ModelParams{0.0, 0.0, 0.0});
  const cplx a(1.0, 4.0 * t_end);
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid->x(j);
    const cplx exact = std::exp(-x * x / a) / std::sqrt(a);
    err += std::norm(r.final_state.u[j] - exact);
  }
  return std::sqrt(err * grid->dx());
}

double kdv_soliton_error(std::size_t n, double half_length, double dt, double t_end, double speed) {
  const auto grid = SpectralGrid::make(n, half_length);
  SystemState s = SystemState::zero(grid);
  for (std::size_t j = 0; j < n; ++j) s.v[j] = kdv_soliton_profile(grid->x(j), speed);
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.snapshot_stride = cfg.num_steps();
  cfg.allow_test_regime = true;
  const auto r = run(s, cfg, ModelParams{0.0, 0.0, 0.0});
  const double shift = speed * t_end;
  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // Nearest periodic image of the travelled profile.
    double y = grid->x(j) - shift;
    y -= grid->length() * std::round(y / grid->length());
    const double d = r.final_state.v[j] - kdv_soliton_profile(y, speed);
    err += d * d;
  }
  return std::sqrt(err * grid->dx());
}

}  // namespace skdv
