#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skdv/config.hpp"
#include "skdv/conservation.hpp"
#include "skdv/decay.hpp"
#include "skdv/integrator.hpp"
#include "skdv/momentum.hpp"
#include "skdv/virial.hpp"

namespace skdv {

struct InvariantRow {
  InvariantSample sample;
  double margin = 0.0;  // Phi - (||u||_H1 + ||v||_H1)
};

struct VirialRow {
  double time = 0.0;
  double j2 = 0.0, j3 = 0.0;
  double res_prop2 = 0.0, res_prop3 = 0.0, res_combined = 0.0;
  double equation_res_prop2 = 0.0, equation_res_prop3 = 0.0;
  double mixed_coefficient = 0.0;
};

struct DecayRow {
  std::size_t window = 0;
  WindowSpec spec;
  WindowedSample energies;
  std::array<double, kNumAccumulators> accumulators{};
};

struct FlagRow {
  double time = 0.0;
  double boundary_mass = 0.0;
  bool blowup = false;
  bool window_clipped = false;
};

struct RunOutcome {
  explicit RunOutcome(RunResult r) : result(std::move(r)) {}

  RunResult result;
  std::string config_hash;
  SmallnessReport smallness;
  AprioriReport apriori;
  GateReport gate;
  std::vector<InvariantRow> invariants;
  std::vector<VirialRow> virial;
  std::vector<DecayRow> decay;
  std::vector<MomentSample> moments;
  std::vector<FlagRow> flags;
  AccumulatorSet accumulators;
  std::optional<DriftReport> drift;

  // Time series of one windowed energy for one window.
  std::pair<std::vector<double>, std::vector<double>> decay_series(std::size_t window, EnergyKind kind) const;
  // Exit status: 0 ok, 3 blow-up, 4 boundary contamination when strict.
  int exit_code(bool strict) const;
};

// Runs the configured simulation with every diagnostic attached.
RunOutcome run_with_diagnostics(const RunConfig& cfg);
RunOutcome run_with_diagnostics(const RunConfig& cfg, const SystemState& initial);

// Writes invariants.csv, virial.csv, decay.csv, moments.csv and flags.csv.
void write_outputs(const RunOutcome& outcome, const std::filesystem::path& directory);

// log2 of successive error ratios for a sequence with halving step sizes.
std::vector<double> observed_orders(std::span<const double> errors, std::span<const double> steps);

struct IdentityRefinementRow {
  double dt = 0.0;
  double probe_time = 0.0;
  double res_prop2 = 0.0, res_prop3 = 0.0, res_combined = 0.0;
  double equation_res_prop2 = 0.0, equation_res_prop3 = 0.0;
  double mixed_coefficient = 0.0;
  double sum_mismatch = 0.0;
};

struct IdentityRefinement {
  std::vector<IdentityRefinementRow> rows;
  std::vector<double> order_prop2, order_prop3, order_combined;
  double min_order() const;
};

// Residuals of both identities and their combination at probe_time for each dt.
// Snapshots are spaced by stride * dt so the difference quotient error scales with dt^4.
IdentityRefinement identity_refinement(const RunConfig& base, std::span<const double> dts, double probe_time,
                                       std::size_t stride = 4);

struct DriftRow {
  double dt = 0.0;
  double mass_drift = 0.0;      // relative
  double v_mean_drift = 0.0;    // |int v(t) - int v(0)|
  double q_drift = 0.0;
  double energy_drift = 0.0;
};

struct DriftStudy {
  std::vector<DriftRow> rows;
  std::vector<double> q_ratios, energy_ratios;  // drift(dt) / drift(dt/2)
};

DriftStudy invariant_drift_study(const RunConfig& base, std::span<const double> dts);

// L2 distance between the final states of runs at each dt and a run at reference_dt.
struct SelfConvergence {
  std::vector<double> dts;
  std::vector<double> errors;
  std::vector<double> orders;
};

SelfConvergence self_convergence(const RunConfig& base, std::span<const double> dts, double reference_dt);

// Free Schrodinger evolution of exp(-x^2); L2 error against the closed form at t_end.
double free_schrodinger_error(std::size_t n, double half_length, double dt, double t_end);
// KdV solitary wave of the given speed; L2 distance to the translated profile at t_end.
double kdv_soliton_error(std::size_t n, double half_length, double dt, double t_end, double speed);

}  // namespace skdv
