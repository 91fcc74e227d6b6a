#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "skdv/conservation.hpp"
#include "skdv/model.hpp"
#include "skdv/virial.hpp"

namespace skdv {

// Window |x - t^m [m > 0]| <= constant * t^p.
struct WindowSpec {
  double p = 0.5;
  double m = 0.0;
  double constant = 1.0;

  void validate() const;
  double center(double t) const { return m > 0.0 ? std::pow(t, m) : 0.0; }
  double half_width(double t) const { return constant * std::pow(t, p); }
};

enum class EnergyKind { mixed, coupling, grad_v, grad_u, power_v, power_u };

struct WindowedEnergy {
  double value = 0.0;
  bool clipped = false;  // the window reaches past the box
};

WindowedEnergy windowed_energy(const SystemState& s, const WindowSpec& window, EnergyKind kind,
                               const ModelParams& p, double power = 3.0);

// All kinds in one pass.
struct WindowedSample {
  double time = 0.0;
  double mixed = 0.0, coupling = 0.0, grad_u = 0.0, grad_v = 0.0, power_u = 0.0, power_v = 0.0;
  bool clipped = false;
};

WindowedSample windowed_energies(const SystemState& s, const WindowSpec& window, const ModelParams& p,
                                 double power = 3.0);

struct BlockMinimum {
  int exponent = 0;  // block [2^j, 2^{j+1})
  double time = 0.0; // where the minimum is attained
  double value = 0.0;
  std::size_t samples = 0;
};

struct LiminfReport {
  std::vector<double> running_min;
  std::vector<BlockMinimum> blocks;
  double slope = 0.0;  // least-squares slope of log(min) against log(time)
  double first_to_last = 0.0;  // first block minimum / last block minimum
  bool decay_declared = false;
};

LiminfReport liminf_tracker(std::span<const double> times, std::span<const double> values, double decay_factor = 10.0);

enum class AccumulatorTag {
  mixed_kdv,
  schrodinger_coupling,
  gradient_v,
  gradient_u,
  quartic_u,
  cubic_u,
  uv_product,
  power_k,
};

inline constexpr std::size_t kNumAccumulators = 8;
std::string to_string(AccumulatorTag tag);

struct AccumulatorState {
  AccumulatorTag tag = AccumulatorTag::mixed_kdv;
  double value = 0.0;
  double last_time = 0.0;
};

// Time integrals from t = 2 of (1/t) int F w'(x/l1) g(x/l2) dx, trapezoidal in t.
struct AccumulatorSet {
  std::array<AccumulatorState, kNumAccumulators> entries;
  std::array<double, kNumAccumulators> last_integrand{};
  double power_excess = 0.5;  // rho in |v|^{2+rho}
  bool started = false;

  AccumulatorSet();
  const AccumulatorState& operator[](AccumulatorTag tag) const { return entries[static_cast<std::size_t>(tag)]; }
};

std::array<double, kNumAccumulators> accumulator_integrands(const SystemState& s, const VirialConfig& cfg,
                                                            const ModelParams& p, double power_excess);

// Advances every accumulator to s.time. The first call (at t >= 2) only records the integrand.
void weighted_accumulator_step(const SystemState& s, const VirialConfig& cfg, const ModelParams& p,
                               AccumulatorSet& acc);

// Increments of a non-decreasing series over dyadic blocks [2^j, 2^{j+1}).
struct BlockIncrement {
  int exponent = 0;
  double t_start = 0.0, t_end = 0.0;
  double increment = 0.0;
};

std::vector<BlockIncrement> block_increments(std::span<const double> times, std::span<const double> values);

struct SignPartition {
  double plus = 0.0, minus = 0.0, zero = 0.0;
};

SignPartition sign_partition_measure(const SystemState& s, const ModelParams& p, double rel_tol = 1e-12);

// Streaming minimum of alpha gamma + beta v / 2 over space and time.
class GateTracker {
 public:
  explicit GateTracker(ModelParams p);
  void update(const SystemState& s);
  double min_value() const { return min_; }

 private:
  ModelParams p_;
  double min_;
};

struct GateReport {
  bool applicable = false;
  double min_value = 0.0;
  double bound = 0.0;  // alpha gamma / 2
  bool holds = false;
  std::string note;
};

GateReport smallness_gate_check(double tracked_min, const ModelParams& p, const SmallnessReport& smallness,
                                double tolerance = 1e-12);
GateReport smallness_gate_check(std::span<const SystemState> trajectory, const ModelParams& p,
                                const SmallnessReport& smallness, double tolerance = 1e-12);

double boundary_mass(const SystemState& s);

// Integrated forms of
//   |v|^{2+m} <= 2 sup|v|^m |v^2/2 - gamma|u|^2| + 2 gamma (eps^{(2+m)/m} |v|^{2+m} + eps^{-(2+m)/2} |u|^{2+m})
//   |u|^{2+m} <= sup|u|^m/|gamma| |v^2/2 - gamma|u|^2| + (eps^{(2+m)/m} |u|^{2+m} + eps^{-(2+m)/2} |v|^{2+m}) / (2 gamma)
struct ElementaryInequalities {
  double lhs_v = 0.0, rhs_v = 0.0, lhs_u = 0.0, rhs_u = 0.0;
  bool holds() const { return lhs_v <= rhs_v && lhs_u <= rhs_u; }
};

ElementaryInequalities check_elementary_inequalities(const SystemState& s, const ModelParams& p, double m,
                                                     double eps = 0.5);

}  // namespace skdv
