#include "skdv/model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "skdv/mollify.hpp"

namespace skdv {

Regime ModelParams::regime() const {
  const double ag = alpha * gamma;
  if (alpha == 0.0 || gamma == 0.0) return Regime::decoupled_test;
  return ag > 0.0 ? Regime::coupled : Regime::invalid;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::coupled: return "coupled";
    case Regime::decoupled_test: return "decoupled_test";
    case Regime::invalid: return "invalid";
  }
  return "unknown";
}

SystemState::SystemState(ComplexField u_in, RealField v_in, double t)
    : u(std::move(u_in)), v(std::move(v_in)), time(t) {
  if (u.grid_ptr() != v.grid_ptr()) throw std::invalid_argument("u and v must share a grid");
}

SystemState SystemState::zero(const GridPtr& grid) {
  return SystemState(ComplexField(grid), RealField(grid), 0.0);
}

ComplexField rhs_nonlinear_u(const SystemState& s, const ModelParams& p) {
  const auto v = to_complex(s.v);
  const std::array<ComplexField, 2> uv{s.u, v};
  const std::array<ComplexField, 3> cubic{s.u, conj(s.u), s.u};
  auto quad = dealiased_product(std::span<const ComplexField>(uv));
  auto cub = dealiased_product(std::span<const ComplexField>(cubic));
  const cplx mi{0.0, -1.0};
  for (std::size_t j = 0; j < quad.size(); ++j) quad[j] = mi * (p.alpha * quad[j] + p.beta * cub[j]);
  return quad;
}

namespace {

RealField dealiased_abs_sq(const ComplexField& u) {
  const std::array<ComplexField, 2> f{u, conj(u)};
  return real_part(dealiased_product(std::span<const ComplexField>(f)));
}

RealField dealiased_square(const RealField& v) {
  const std::array<RealField, 2> f{v, v};
  return dealiased_product(std::span<const RealField>(f));
}

}  // namespace

RealField rhs_nonlinear_v(const SystemState& s, const ModelParams& p) {
  auto flux = dealiased_square(s.v);
  const auto rho = dealiased_abs_sq(s.u);
  for (std::size_t j = 0; j < flux.size(); ++j) flux[j] = -(0.5 * flux[j] - p.gamma * rho[j]);
  return derivative(flux, 1);
}

RealField rhs_nonlinear_v_advective(const SystemState& s, const ModelParams& p) {
  const auto vx = derivative(s.v, 1);
  const std::array<RealField, 2> f{s.v, vx};
  auto out = dealiased_product(std::span<const RealField>(f));
  const auto drho = derivative(dealiased_abs_sq(s.u), 1);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -out[j] + p.gamma * drho[j];
  return out;
}

ComplexField time_derivative_u(const SystemState& s, const ModelParams& p) {
  auto out = rhs_nonlinear_u(s, p);
  const auto uxx = derivative(s.u, 2);
  const cplx i{0.0, 1.0};
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += i * uxx[j];
  return out;
}

RealField time_derivative_v(const SystemState& s, const ModelParams& p) {
  auto out = rhs_nonlinear_v(s, p);
  const auto vxxx = derivative(s.v, 3);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= vxxx[j];
  return out;
}

Profile Profile::gaussian(double amplitude, double width, double center) {
  Profile p;
  p.family = ProfileFamily::gaussian;
  p.amplitude = amplitude;
  p.width = width;
  p.center = center;
  return p;
}

Profile Profile::modulated_gaussian(double amplitude, double width, double carrier, double center) {
  Profile p = gaussian(amplitude, width, center);
  p.family = ProfileFamily::modulated_gaussian;
  p.carrier = carrier;
  return p;
}

Profile Profile::kdv_soliton(double speed, double center) {
  Profile p;
  p.family = ProfileFamily::kdv_soliton;
  p.speed = speed;
  p.center = center;
  return p;
}

Profile Profile::sum(std::vector<Profile> terms) {
  Profile p;
  p.family = ProfileFamily::sum;
  p.terms = std::move(terms);
  return p;
}

Profile Profile::samples(std::vector<cplx> values) {
  Profile p;
  p.family = ProfileFamily::samples;
  p.values = std::move(values);
  return p;
}

bool Profile::is_real() const {
  switch (family) {
    case ProfileFamily::modulated_gaussian: return carrier == 0.0;
    case ProfileFamily::sum:
      for (const auto& t : terms)
        if (!t.is_real()) return false;
      return true;
    case ProfileFamily::samples:
      for (cplx z : values)
        if (z.imag() != 0.0) return false;
      return true;
    default: return true;
  }
}

void Profile::validate() const {
  switch (family) {
    case ProfileFamily::gaussian:
    case ProfileFamily::modulated_gaussian:
      if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("gaussian width must be positive");
      if (!std::isfinite(amplitude) || !std::isfinite(center) || !std::isfinite(carrier))
        throw std::invalid_argument("gaussian parameters must be finite");
      break;
    case ProfileFamily::kdv_soliton:
      if (!(speed > 0.0) || !std::isfinite(speed)) throw std::invalid_argument("soliton speed must be positive");
      break;
    case ProfileFamily::sum:
      for (const auto& t : terms) t.validate();
      break;
    default: break;
  }
}

double kdv_soliton_profile(double x, double speed) {
  const double s = 1.0 / std::cosh(0.5 * std::sqrt(speed) * x);
  return 3.0 * speed * s * s;
}

cplx Profile::evaluate(double x) const {
  switch (family) {
    case ProfileFamily::zero: return 0.0;
    case ProfileFamily::gaussian: {
      const double y = (x - center) / width;
      return amplitude * std::exp(-y * y);
    }
    case ProfileFamily::modulated_gaussian: {
      const double y = (x - center) / width;
      return amplitude * std::exp(-y * y) * std::polar(1.0, carrier * x);
    }
    case ProfileFamily::kdv_soliton: return kdv_soliton_profile(x - center, speed);
    case ProfileFamily::sum: {
      cplx s{};
      for (const auto& t : terms) s += t.evaluate(x);
      return s;
    }
    case ProfileFamily::samples: throw std::logic_error("sample profiles are evaluated per grid index");
  }
  return 0.0;
}

namespace {

std::vector<cplx> sample_profile(const Profile& p, const SpectralGrid& grid) {
  p.validate();
  if (p.family == ProfileFamily::samples) {
    if (p.values.size() != grid.size()) throw std::invalid_argument("custom samples do not match grid size");
    return p.values;
  }
  std::vector<cplx> out(grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = p.evaluate(grid.x(j));
  return out;
}

}  // namespace

double outer_mass_fraction(const SystemState& s, double outer_fraction) {
  const auto& g = s.grid();
  const double inner = g.half_length() * (1.0 - outer_fraction);
  double total = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = std::norm(s.u[j]) + s.v[j] * s.v[j];
    total += d;
    if (std::abs(g.x(j)) >= inner) outer += d;
  }
  return total > 0.0 ? outer / total : 0.0;
}

SystemState make_initial_data(const InitialData& spec, const GridPtr& grid, double boundary_threshold) {
  if (!spec.v.is_real()) throw std::invalid_argument("v profile must be real-valued");
  if (spec.u.family == ProfileFamily::kdv_soliton)
    throw std::invalid_argument("the soliton family applies to v only");
  if (!std::isfinite(spec.scale)) throw std::invalid_argument("data scale must be finite");
  auto uc = sample_profile(spec.u, *grid);
  auto vc = sample_profile(spec.v, *grid);
  std::vector<double> vr(vc.size());
  for (std::size_t j = 0; j < vc.size(); ++j) vr[j] = spec.scale * vc[j].real();
  for (auto& z : uc) z *= spec.scale;
  SystemState s(ComplexField(grid, std::move(uc)), RealField(grid, std::move(vr)), 0.0);
  if (spec.mollify_level) s = mollify_data(s, MollifierSpec{*spec.mollify_level});
  if (!s.all_finite()) throw std::invalid_argument("initial data has non-finite samples");
  const double tail = outer_mass_fraction(s);
  if (tail > boundary_threshold)
    throw std::invalid_argument("initial data tail mass " + std::to_string(tail) +
                                " exceeds boundary threshold");
  return s;
}

}  // namespace skdv
