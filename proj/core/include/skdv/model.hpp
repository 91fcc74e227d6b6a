#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skdv/grid.hpp"

namespace skdv {

enum class Regime {
  coupled,         // alpha * gamma > 0: global H1 theory applies
  decoupled_test,  // alpha == 0 or gamma == 0: integrator validation only
  invalid,         // alpha * gamma < 0
};

struct ModelParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;

  Regime regime() const;
};

std::string to_string(Regime r);

struct SystemState {
  ComplexField u;
  RealField v;
  double time = 0.0;

  SystemState(ComplexField u_in, RealField v_in, double t = 0.0);
  static SystemState zero(const GridPtr& grid);

  const SpectralGrid& grid() const { return u.grid(); }
  const GridPtr& grid_ptr() const { return u.grid_ptr(); }
  bool all_finite() const { return u.all_finite() && v.all_finite(); }
};

// Non-dispersive part of u_t: -i(alpha u v + beta u |u|^2).
ComplexField rhs_nonlinear_u(const SystemState& s, const ModelParams& p);
// Non-dispersive part of v_t in conservative form: -d/dx(v^2/2 - gamma |u|^2).
RealField rhs_nonlinear_v(const SystemState& s, const ModelParams& p);
// Same quantity in advective form: -v v_x + gamma d/dx |u|^2.
RealField rhs_nonlinear_v_advective(const SystemState& s, const ModelParams& p);

// Full right-hand sides including dispersion.
ComplexField time_derivative_u(const SystemState& s, const ModelParams& p);
RealField time_derivative_v(const SystemState& s, const ModelParams& p);

enum class ProfileFamily { zero, gaussian, modulated_gaussian, kdv_soliton, sum, samples };

// One component of the initial data. Gaussians are amplitude * exp(-((x - center) / width)^2),
// modulated by exp(i carrier x); the soliton is 3c sech^2(sqrt(c) (x - center) / 2).
struct Profile {
  ProfileFamily family = ProfileFamily::zero;
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
  double carrier = 0.0;
  double speed = 0.0;
  std::vector<Profile> terms;
  std::vector<cplx> values;

  static Profile zero() { return {}; }
  static Profile gaussian(double amplitude, double width, double center = 0.0);
  static Profile modulated_gaussian(double amplitude, double width, double carrier, double center = 0.0);
  static Profile kdv_soliton(double speed, double center = 0.0);
  static Profile sum(std::vector<Profile> terms);
  static Profile samples(std::vector<cplx> values);

  bool is_real() const;
  void validate() const;
  cplx evaluate(double x) const;
};

struct InitialData {
  Profile u;
  Profile v;
  std::optional<int> mollify_level;
  double scale = 1.0;  // multiplies both components
};

inline constexpr double kDefaultBoundaryThreshold = 1e-8;
inline constexpr double kOuterFraction = 0.1;

// Fraction of the integral of |u|^2 + v^2 lying in the outer part of the box.
double outer_mass_fraction(const SystemState& s, double outer_fraction = kOuterFraction);

SystemState make_initial_data(const InitialData& spec, const GridPtr& grid,
                              double boundary_threshold = kDefaultBoundaryThreshold);

// Closed-form KdV solitary wave and its exact travelling profile.
double kdv_soliton_profile(double x, double speed);

}  // namespace skdv
