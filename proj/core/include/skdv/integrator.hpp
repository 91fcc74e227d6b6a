#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skdv/model.hpp"

namespace skdv {

enum class Scheme { strang, lie };

std::string to_string(Scheme s);

struct StepperConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::strang;
  double t_end = 1.0;
  std::size_t snapshot_stride = 1;
  bool dealias = true;
  double boundary_threshold = kDefaultBoundaryThreshold;
  // Largest tolerated dt * k_max^3; beyond it the splitting error of the
  // highest modes is no longer small (dispersion itself is exact).
  double splitting_phase_bound = 1e3;
  // Abort when ||v||_{H1} exceeds this value (normally 1e3 * Phi).
  std::optional<double> blowup_h1_limit;
  bool allow_test_regime = false;

  std::size_t num_steps() const;
  std::vector<std::string> validate(const SpectralGrid& grid) const;
};

// Exact linear flow: u_hat *= exp(-i k^2 dt), v_hat *= exp(i k^3 dt).
SystemState dispersion_step(const SystemState& s, double dt);

// Nonlinear flow with exact phase rotation of u and RK4 for
// v_t = -d/dx(v^2/2 - gamma |u|^2); |u|^2 is invariant under this flow.
// The symmetric variant rotates u over dt/2 with the old v, advances v, then
// rotates over dt/2 with the new v; the plain variant rotates once with v frozen.
SystemState nonlinear_step(const SystemState& s, double dt, const ModelParams& p,
                           bool dealias = true, bool symmetric = true);

SystemState step(const SystemState& s, double dt, const ModelParams& p, Scheme scheme,
                 bool dealias = true);

class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_start(const SystemState&) {}
  // Called after every completed step.
  virtual void on_step(const SystemState&, std::size_t /*step*/) {}
  // Called at t0 and every snapshot_stride steps; boundary_mass already evaluated.
  virtual void on_snapshot(const SystemState&, std::size_t /*step*/, double /*boundary_mass*/) {}
};

struct RunResult {
  SystemState final_state;
  std::size_t steps_taken = 0;
  bool blowup = false;
  std::string blowup_reason;
  bool boundary_flag = false;
  double max_boundary_mass = 0.0;
  std::optional<double> first_flag_time;
  std::vector<std::string> warnings;
};

RunResult run(const SystemState& initial, const StepperConfig& cfg, const ModelParams& p,
              StepObserver* observer = nullptr);

}  // namespace skdv
