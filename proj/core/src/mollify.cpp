#include "skdv/mollify.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skdv {

namespace {

// exp(-1/y) for y > 0, zero otherwise.
double edge(double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; }

// C-infinity step from 0 at y <= 0 to 1 at y >= 1.
double smooth_step(double y) {
  const double a = edge(y), b = edge(1.0 - y);
  return a / (a + b);
}

// Unnormalized plateau bump; its integral is exactly 3 because
// smooth_step(y) + smooth_step(1 - y) = 1.
double plateau(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  return smooth_step(2.0 - ax);
}

constexpr double kPlateauMass = 3.0;

void check_level(int level) {
  if (level < 1) throw std::invalid_argument("mollifier level must be a positive integer");
}

std::vector<double> multipliers(const SpectralGrid& grid, int level) {
  check_level(level);
  const auto k = grid.wavenumbers();
  std::vector<double> m(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) m[j] = mollifier_transform(k[j] / level);
  m[0] = 1.0;
  return m;
}

template <class F>
std::vector<cplx> mollified_coeffs(const F& f, int level) {
  auto c = spectrum(f);
  const auto m = multipliers(f.grid(), level);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= m[j];
  return c;
}

}  // namespace

double mollifier_bump(double x) { return plateau(x) / kPlateauMass; }

double mollifier_kernel(double x, int level) {
  check_level(level);
  return level * mollifier_bump(level * x);
}

double mollifier_transform(double xi) {
  if (xi == 0.0) return 1.0;
  const double flat = 2.0 * std::sin(xi) / xi;
  // Composite Gauss-Legendre on the shoulder [1, 2]; panels scale with the oscillation count.
  const int panels = std::max(16, static_cast<int>(std::ceil(std::abs(xi) / 2.0)));
  const double h = 1.0 / panels;
  double shoulder = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = 1.0 + i * h;
    auto f = [xi](double x) { return smooth_step(2.0 - x) * std::cos(xi * x); };
    shoulder += boost::math::quadrature::gauss<double, 20>::integrate(f, a, a + h);
  }
  return (flat + 2.0 * shoulder) / kPlateauMass;
}

RealField mollify(const RealField& f, int level) {
  return real_from_spectrum(f.grid_ptr(), mollified_coeffs(f, level));
}

ComplexField mollify(const ComplexField& f, int level) {
  return complex_from_spectrum(f.grid_ptr(), mollified_coeffs(f, level));
}

SystemState mollify_data(const SystemState& data, const MollifierSpec& spec) {
  if (!data.all_finite()) throw std::domain_error("mollify_data: non-finite input");
  return SystemState(mollify(data.u, spec.level), mollify(data.v, spec.level), data.time);
}

}  // namespace skdv
