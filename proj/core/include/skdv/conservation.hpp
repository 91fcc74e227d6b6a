#pragma once

#include <span>
#include <string>
#include <vector>

#include "skdv/model.hpp"

namespace skdv {

double mass(const SystemState& s);
double q_momentum(const SystemState& s, const ModelParams& p);
double energy(const SystemState& s, const ModelParams& p);

// ||f||_{H1} with ||f||^2_{H1} = ||f||^2 + ||f_x||^2.
double h1_norm(const RealField& f);
double h1_norm(const ComplexField& f);

struct InvariantSample {
  double time = 0.0;
  double mass = 0.0;
  double q_momentum = 0.0;
  double energy = 0.0;
  double u_h1 = 0.0;
  double v_h1 = 0.0;
  double v_l2_sq = 0.0;
  double ux_l2 = 0.0;
};

InvariantSample sample_invariants(const SystemState& s, const ModelParams& p);

// Gagliardo-Nirenberg ratios:
//   quartic: ||f||_{L4} / (||f_x||^{1/4} ||f||^{3/4})
//   cubic:   ||f||_{L3} / (||f_x||^{1/6} ||f||^{5/6})
enum class GnForm { quartic, cubic };

struct GnProfile {
  enum class Shape { gaussian, sech_power } shape = Shape::gaussian;
  double exponent = 1.0;  // power of sech; unused for gaussians
  double evaluate(double y) const;
};

struct GnSweep {
  std::vector<GnProfile> profiles;
  std::vector<double> widths;
  double amplitude = 1.0;

  // Gaussians and sech^q for several q, widths log-uniform between
  // 8 dx and L/8 (profiles with a non-negligible tail are skipped).
  static GnSweep standard(const SpectralGrid& grid, std::size_t num_widths = 16);
};

struct GnEstimate {
  double value = 0.0;
  GnProfile best_profile;
  double best_width = 0.0;
  std::size_t evaluated = 0;
};

double gn_ratio(const RealField& f, GnForm form);
GnEstimate estimate_gn_constant(const GridPtr& grid, GnForm form, const GnSweep& sweep);
// Larger of the quartic and cubic estimates on the standard sweep.
double default_gn_constant(const GridPtr& grid);

// mu = min{|gamma|, |alpha|/2}.
double smallness_mu(const ModelParams& p);
// C_{alpha,beta,gamma} as derived at the end of the a priori estimate.
double smallness_constant(const ModelParams& p, double c_gn);
// Variant stated with the theorem, with a generic constant c in place of C_GN.
double smallness_constant_intro(const ModelParams& p, double c_gn);
// Phi = C^{1/2} (a + b + a^5 + b^5).
double phi_function(double c_abg, double u0_h1, double v0_h1);

struct SmallnessReport {
  double c_gn = 0.0;
  double mu = 0.0;
  double c_abg = 0.0;
  double c_abg_intro = 0.0;
  double phi = 0.0;
  double phi_intro = 0.0;
  double intro_ratio = 0.0;  // c_abg_intro / c_abg
  double criterion_lhs = 0.0;  // -beta * Phi
  double criterion_rhs = 0.0;  // alpha * gamma
  bool applicable = false;     // alpha * gamma > 0 and beta < 0
  bool satisfied = false;
};

SmallnessReport phi_smallness(double u0_h1, double v0_h1, const ModelParams& p, double c_gn);

// Largest s >= 0 with -beta Phi(s a, s b) <= alpha gamma (bisection on a monotone function).
double admissible_scale(double u0_h1, double v0_h1, const ModelParams& p, double c_gn);

struct AprioriReport {
  double phi = 0.0;
  double max_norm_sum = 0.0;
  double min_margin = 0.0;
  bool bound_holds = true;
  // ||v||^2 <= (|Q(0)| + 2|gamma| ||u0|| ||u_x||) / |alpha|
  bool l2_bound_holds = true;
  double max_l2_bound_excess = 0.0;
};

AprioriReport apriori_monitor(std::span<const InvariantSample> trajectory, double phi, const ModelParams& p);

}  // namespace skdv
