// Command-line front end: runs, identity refinement, decay scans, smallness reports.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "skdv/config.hpp"
#include "skdv/conservation.hpp"
#include "skdv/csv.hpp"
#include "skdv/pipeline.hpp"

namespace {

using namespace skdv;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

void print_run_summary(const RunOutcome& o) {
  const auto& r = o.result;
  std::printf("config_hash %s\n", o.config_hash.c_str());
  std::printf("steps %zu  final_t %.6g\n", r.steps_taken, r.final_state.time);
  std::printf("max_boundary_mass %.3e%s\n", r.max_boundary_mass, r.boundary_flag ? "  (flagged)" : "");
  if (r.blowup) std::printf("blowup: %s\n", r.blowup_reason.c_str());
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
  if (!o.invariants.empty()) {
    const auto& a = o.invariants.front().sample;
    const auto& b = o.invariants.back().sample;
    std::printf("mass %.16e -> %.16e\n", a.mass, b.mass);
    std::printf("q    %.16e -> %.16e\n", a.q_momentum, b.q_momentum);
    std::printf("E    %.16e -> %.16e\n", a.energy, b.energy);
  }
  if (o.drift)
    std::printf("F slope fitted %.6e  predicted %.6e  rel.err %.3e%s\n", o.drift->fitted_slope, o.drift->predicted_slope,
                o.drift->relative_error, o.drift->informative ? "" : "  (predicted slope near zero)");
  std::printf("gate: %s (min %.6e, bound %.6e)\n",
              o.gate.applicable ? (o.gate.holds ? "holds" : "violated") : o.gate.note.c_str(), o.gate.min_value,
              o.gate.bound);
}

void print_smallness(const SmallnessReport& s) {
  std::printf("C_GN            %.12e\n", s.c_gn);
  std::printf("mu              %.12e\n", s.mu);
  std::printf("C (derived)     %.12e\n", s.c_abg);
  std::printf("C (stated)      %.12e\n", s.c_abg_intro);
  std::printf("stated/derived  %.12e\n", s.intro_ratio);
  std::printf("Phi (derived)   %.12e\n", s.phi);
  std::printf("Phi (stated)    %.12e\n", s.phi_intro);
  std::printf("-beta*Phi       %.12e\n", s.criterion_lhs);
  std::printf("alpha*gamma     %.12e\n", s.criterion_rhs);
  std::printf("applicable      %s\n", s.applicable ? "yes" : "no (needs alpha*gamma > 0 and beta < 0)");
  std::printf("satisfied       %s\n", s.satisfied ? "yes" : "no");
}

int cmd_run(const std::string& path, bool strict_flag, const std::string& out_dir) {
  const auto cfg = load_config(path);
  const auto o = run_with_diagnostics(cfg);
  const std::filesystem::path dir = out_dir.empty() ? cfg.output.directory : std::filesystem::path(out_dir);
  write_outputs(o, dir);
  print_run_summary(o);
  std::printf("wrote %s\n", dir.string().c_str());
  return o.exit_code(strict_flag || cfg.output.strict);
}

int cmd_verify(const std::string& path, double probe, std::vector<double> dts, std::size_t stride) {
  const auto cfg = load_config(path);
  if (dts.empty()) dts = {2e-3, 1e-3, 5e-4};
  const auto study = identity_refinement(cfg, dts, probe, stride);
  std::printf("%-10s %-14s %-14s %-14s %-14s %-14s\n", "dt", "res_prop2", "res_prop3", "res_combined", "eq_res2",
              "eq_res3");
  for (const auto& r : study.rows)
    std::printf("%-10.3e %-14.6e %-14.6e %-14.6e %-14.6e %-14.6e\n", r.dt, r.res_prop2, r.res_prop3, r.res_combined,
                r.equation_res_prop2, r.equation_res_prop3);
  auto orders = [](const char* name, const std::vector<double>& v) {
    std::printf("order %-9s", name);
    for (double x : v) std::printf(" %.3f", x);
    std::printf("\n");
  };
  orders("prop2", study.order_prop2);
  orders("prop3", study.order_prop3);
  orders("combined", study.order_combined);
  std::printf("mixed-term coefficient %.3e\n", study.rows.front().mixed_coefficient);
  return kOk;
}

int cmd_scan(const std::string& path, const std::string& out_dir) {
  const auto cfg = load_config(path);
  const auto o = run_with_diagnostics(cfg);
  const std::filesystem::path dir = out_dir.empty() ? cfg.output.directory : std::filesystem::path(out_dir);
  write_outputs(o, dir);
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& spec = cfg.windows[w];
    std::printf("window p=%g m=%g constant=%g\n", spec.p, spec.m, spec.constant);
    for (auto [kind, name] : {std::pair{EnergyKind::mixed, "mixed"}, std::pair{EnergyKind::grad_v, "grad_v"}}) {
      const auto [t, v] = o.decay_series(w, kind);
      const auto rep = liminf_tracker(t, v);
      std::printf("  %-7s blocks:", name);
      for (const auto& b : rep.blocks) std::printf(" [2^%d: %.3e]", b.exponent, b.value);
      std::printf("\n  %-7s first/last %.3f  slope %.3f  decay %s\n", name, rep.first_to_last, rep.slope,
                  rep.decay_declared ? "yes" : "no");
    }
  }
  std::vector<double> t;
  std::vector<std::vector<double>> acc(kNumAccumulators);
  for (const auto& r : o.decay) {
    if (r.window != 0) continue;
    t.push_back(r.energies.time);
    for (std::size_t i = 0; i < kNumAccumulators; ++i) acc[i].push_back(r.accumulators[i]);
  }
  for (std::size_t i = 0; i < kNumAccumulators; ++i) {
    std::printf("accumulator %-20s final %.6e  block increments:", to_string(static_cast<AccumulatorTag>(i)).c_str(),
                o.accumulators.entries[i].value);
    for (const auto& b : block_increments(t, acc[i])) std::printf(" %.3e", b.increment);
    std::printf("\n");
  }
  return o.exit_code(cfg.output.strict);
}

int cmd_smallness(const std::string& path) {
  const auto cfg = load_config(path);
  const auto s0 = cfg.make_initial_state();
  const double c_gn = cfg.diagnostics.gn_constant ? *cfg.diagnostics.gn_constant : default_gn_constant(s0.grid_ptr());
  const double a = h1_norm(s0.u), b = h1_norm(s0.v);
  std::printf("||u0||_H1       %.12e\n||v0||_H1       %.12e\n", a, b);
  const auto rep = phi_smallness(a, b, cfg.model, c_gn);
  print_smallness(rep);
  if (rep.applicable && (a > 0.0 || b > 0.0))
    std::printf("admissible data scale %.12e\n", admissible_scale(a, b, cfg.model, c_gn));
  return kOk;
}

int cmd_convergence(const std::string& path) {
  const auto cfg = load_config(path);
  const double dt = cfg.stepper.dt;
  const std::vector<double> dts{dt, dt / 2, dt / 4};
  const auto sc = self_convergence(cfg, dts, dt / 16);
  std::printf("self-convergence against dt/16 at t=%g\n", cfg.stepper.t_end);
  for (std::size_t i = 0; i < sc.dts.size(); ++i) std::printf("  dt %.3e  error %.6e\n", sc.dts[i], sc.errors[i]);
  for (double o : sc.orders) std::printf("  observed order %.3f\n", o);
  const auto drift = invariant_drift_study(cfg, dts);
  for (const auto& r : drift.rows)
    std::printf("  dt %.3e  mass %.3e  int v %.3e  Q %.3e  E %.3e\n", r.dt, r.mass_drift, r.v_mean_drift, r.q_drift,
                r.energy_drift);
  std::printf("free Schrodinger Gaussian, t=1: L2 error %.3e\n", free_schrodinger_error(1024, 64.0, 1e-3, 1.0));
  std::printf("KdV soliton c=1, t=5: L2 error %.3e\n", kdv_soliton_error(1024, 64.0, 5e-4, 5.0, 1.0));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schrodinger-KdV simulator with conservation, virial and decay diagnostics"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  bool strict = false;
  double probe = 3.0;
  std::vector<double> dts;
  std::size_t stride = 4;

  auto* run = app.add_subcommand("run", "full simulation with all diagnostics");
  run->add_option("config", config, "INI configuration")->required();
  run->add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
  run->add_flag("--strict", strict, "exit 4 when boundary contamination is flagged");

  auto* verify = app.add_subcommand("verify-identities", "dt-refinement study of the virial identities");
  verify->add_option("config", config, "INI configuration")->required();
  verify->add_option("--probe-time", probe, "time at which residuals are evaluated (>= 2)");
  verify->add_option("--dt", dts, "time steps, largest first")->delimiter(',');
  verify->add_option("--stride", stride, "snapshot spacing in steps for the difference quotient");

  auto* scan = app.add_subcommand("scan-decay", "windowed energies, accumulators and block minima");
  scan->add_option("config", config, "INI configuration")->required();
  scan->add_option("-o,--out", out_dir, "output directory (overrides output.directory)");

  auto* small = app.add_subcommand("check-smallness", "report the smallness constant and criterion");
  small->add_option("config", config, "INI configuration")->required();

  auto* conv = app.add_subcommand("convergence", "integrator self-convergence and closed-form tests");
  conv->add_option("config", config, "INI configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, strict, out_dir);
    if (*verify) return cmd_verify(config, probe, dts, stride);
    if (*scan) return cmd_scan(config, out_dir);
    if (*small) return cmd_smallness(config);
    if (*conv) return cmd_convergence(config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
