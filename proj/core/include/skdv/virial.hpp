#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skdv/model.hpp"

namespace skdv {

// Scalings lambda1 = t^p1, lambda2 = t^(p1 p2), eta = t^r1 with r1 = 1 - p1,
// so that eta * lambda1 = t.
struct VirialConfig {
  double p1 = 0.4;
  double p2 = 2.5;
  double theta2 = 1.0;
  std::optional<double> theta3;  // empty means 2 theta2 gamma / alpha

  double r1() const { return 1.0 - p1; }
  double lambda1(double t) const;
  double lambda2(double t) const;
  double eta(double t) const;
  bool theta3_auto() const { return !theta3.has_value(); }
  double theta3_value(const ModelParams& p) const;

  // Violations of 0 < p1 < 2/(p2+2), p2 > 1, theta2 > 0, theta3 > 0.
  std::vector<std::string> violations() const;
  void validate() const;
};

// The paper-facing functionals live on t >= 2; exploration allows any t > 0.
enum class TimeMode { accumulator, exploration };

void check_time(double t, TimeMode mode);

// Weight products sampled on the grid at time t.
struct WeightFields {
  double t = 0.0;
  std::vector<double> w_g;    // w(x/l1) g(x/l2)
  std::vector<double> wp_g;   // w'(x/l1) g(x/l2)
  std::vector<double> w_gp;   // w(x/l1) g'(x/l2)
  std::vector<double> d_xx;   // d^2/dx^2 of w(x/l1) g(x/l2)
  std::vector<double> d_t;    // d/dt of w(x/l1(t)) g(x/l2(t))
};

WeightFields weight_fields(const SpectralGrid& grid, const VirialConfig& cfg, double t);
// Only w'(x/l1) g(x/l2), the weight of the time-integrated accumulators.
std::vector<double> accumulator_weight(const SpectralGrid& grid, const VirialConfig& cfg, double t);

double functional_J2(const SystemState& s, const VirialConfig& cfg, const ModelParams& p,
                     TimeMode mode = TimeMode::accumulator);
double functional_J3(const SystemState& s, const VirialConfig& cfg, const ModelParams& p,
                     TimeMode mode = TimeMode::accumulator);

// All spatial pieces of both identities at one state.
struct VirialTerms {
  double t = 0.0;
  double j2 = 0.0, j3 = 0.0;
  // (3 theta2 / t) int v_x^2 w'g
  double lhs2 = 0.0;
  double j21 = 0.0, j22 = 0.0, j23 = 0.0, j24 = 0.0;
  double flux2 = 0.0;   // (2 theta2 / t) int (v^3/3 - gamma |u|^2 v) w'g
  double mixed2 = 0.0;  // -(2 theta2 gamma / eta) int |u|^2 v_x w g
  // (2 theta3 / t) int |u_x|^2 w'g + (beta theta3 / 2t) int |u|^4 w'g
  double lhs3 = 0.0;
  double j31 = 0.0, j321 = 0.0, j322 = 0.0, j323 = 0.0;
  double mixed3 = 0.0;  // (theta3 alpha / eta) int |u|^2 v_x w g
  double mixed_integral = 0.0;  // int |u|^2 v_x w g
  // dJ/dt evaluated from the equations of motion instead of from samples.
  double dj2_dt_equation = 0.0, dj3_dt_equation = 0.0;

  double j2_int() const { return j21 + j22 + j23 + j24; }
  double j3_int() const { return j31 + j321 + j322 + j323; }
};

VirialTerms virial_terms(const SystemState& s, const VirialConfig& cfg, const ModelParams& p,
                         TimeMode mode = TimeMode::accumulator);

struct IdentityResidualSample {
  double time = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
  double dt_used = 0.0;
  double dj_dt = 0.0;            // 4th-order central difference of stored samples
  double j_int_terms = 0.0;      // assembled from the listed pieces
  double j_int_remainder = 0.0;  // what the identity requires, using dJ/dt from the equations
  double equation_residual = 0.0;  // residual with dJ/dt from the equations
};

// Fourth-order central difference at the middle of five equally spaced samples.
double central_difference5(std::span<const double> values, double h);

// The window holds five consecutive, equally spaced snapshots; the identity is
// evaluated at the middle one.
IdentityResidualSample identity_residual_prop2(std::span<const SystemState> window, const VirialConfig& cfg,
                                               const ModelParams& p, double dt_used,
                                               TimeMode mode = TimeMode::accumulator);
IdentityResidualSample identity_residual_prop3(std::span<const SystemState> window, const VirialConfig& cfg,
                                               const ModelParams& p, double dt_used,
                                               TimeMode mode = TimeMode::accumulator);

struct CombinedResidualSample {
  IdentityResidualSample combined;
  IdentityResidualSample prop2;
  IdentityResidualSample prop3;
  // -2 theta2 gamma + theta3 alpha: zero when theta3 is chosen automatically.
  double mixed_coefficient = 0.0;
  double sum_mismatch = 0.0;  // combined.residual - (prop2.residual + prop3.residual)
};

CombinedResidualSample identity_residual_combined(std::span<const SystemState> window, const VirialConfig& cfg,
                                                  const ModelParams& p, double dt_used,
                                                  TimeMode mode = TimeMode::accumulator);

// Pointwise law for P = Im(u conj(u_x)):
//   P_t = -d^2/dx^2 Re(u conj(u_x)) + 2 d/dx |u_x|^2 + alpha |u|^2 v_x + (beta/2) d/dx |u|^4.
std::vector<double> momentum_density_rate(const SystemState& s, const ModelParams& p);
// Max discrepancy with P_t computed from the equations of motion.
double pointwise_law_discrepancy(const SystemState& s, const ModelParams& p);
// Max discrepancy with P_t from a 4th-order difference over the window.
double pointwise_law_discrepancy(std::span<const SystemState> window, const ModelParams& p);

struct IdentityCheck {
  double max_abs = 0.0;
  double scale = 0.0;  // largest magnitude of any term involved
  double relative() const { return scale > 0.0 ? max_abs / scale : 0.0; }
};

struct KeyIdentityReport {
  IdentityCheck cc1;      // v^3/3 - gamma|u|^2 v decomposition
  IdentityCheck quartic;  // v^4 decomposition
  IdentityCheck cubic;    // |u|^3 decomposition
};

KeyIdentityReport check_key_identities(const SystemState& s, const ModelParams& p);

}  // namespace skdv
