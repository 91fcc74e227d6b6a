#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skdv/decay.hpp"
#include "skdv/integrator.hpp"
#include "skdv/model.hpp"
#include "skdv/virial.hpp"

namespace skdv {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  std::size_t n = 1024;
  double half_length = 64.0;
};

struct DiagnosticsConfig {
  // Identity residuals are probed every residual_every snapshots (0 disables).
  std::size_t residual_every = 10;
  // Accumulators and windowed energies start here (the functionals live on t >= 2).
  double decay_start = 2.0;
  double accumulator_power_excess = 0.5;
  double power_k = 3.0;  // exponent of the windowed power energies
  std::optional<double> gn_constant;  // empty: estimate on the grid
  // Blow-up when ||v||_H1 exceeds blowup_factor * max(Phi, initial norms).
  double blowup_factor = 1e3;
};

struct OutputConfig {
  std::filesystem::path directory = "out";
  bool strict = false;
};

struct RunConfig {
  GridConfig grid;
  StepperConfig stepper;
  ModelParams model;
  InitialData initial{Profile::gaussian(0.25, 3.0), Profile::gaussian(0.25, 3.0), std::nullopt, 1.0};
  VirialConfig virial;
  std::vector<WindowSpec> windows{WindowSpec{}};
  DiagnosticsConfig diagnostics;
  OutputConfig output;
  std::uint64_t seed = 1;

  GridPtr make_grid() const;
  // Initial state on a fresh grid; rejected data raises ConfigError.
  SystemState make_initial_state() const;
  // Checks every module-level constraint; throws ConfigError.
  void validate() const;
  // Sorted section.key=value lines of the effective configuration.
  std::string canonical() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

// INI text with sections grid, stepper, model, initial, virial, windows, diagnostics, output, sweep.
// Unknown sections or keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace skdv
