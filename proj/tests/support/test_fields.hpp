#pragma once

#include <cmath>
#include <random>

#include "skdv/grid.hpp"
#include "skdv/model.hpp"

namespace skdv::testing {

// Smooth random field: a few Fourier modes with |k| <= k_cut under a Gaussian envelope.
inline std::vector<cplx> random_smooth_samples(const SpectralGrid& g, std::mt19937_64& rng, double k_cut,
                                               bool real, double amplitude = 1.0) {
  std::normal_distribution<double> nd;
  const double L = g.half_length();
  std::vector<cplx> out(g.size());
  const int modes = static_cast<int>(k_cut * L / M_PI);
  std::vector<cplx> c(2 * modes + 1);
  for (auto& x : c) x = real ? cplx(nd(rng), 0.0) : cplx(nd(rng), nd(rng));
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    cplx s = 0.0;
    for (int m = -modes; m <= modes; ++m) {
      const double k = M_PI * m / L;
      const cplx e = std::exp(cplx(0.0, k * x));
      s += real ? cplx(c[m + modes].real() * std::cos(k * x) + c[modes - m].real() * std::sin(k * x), 0.0)
                : c[m + modes] * e;
    }
    out[j] = amplitude * s / std::sqrt(2.0 * modes + 1.0);
  }
  return out;
}

inline RealField random_real(const GridPtr& g, std::mt19937_64& rng, double k_cut, double amplitude = 1.0) {
  const auto s = random_smooth_samples(*g, rng, k_cut, true, amplitude);
  RealField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = s[j].real();
  return f;
}

inline ComplexField random_complex(const GridPtr& g, std::mt19937_64& rng, double k_cut, double amplitude = 1.0) {
  return ComplexField(g, random_smooth_samples(*g, rng, k_cut, false, amplitude));
}

inline SystemState random_state(const GridPtr& g, std::mt19937_64& rng, double k_cut, double amplitude = 1.0) {
  return SystemState(random_complex(g, rng, k_cut, amplitude), random_real(g, rng, k_cut, amplitude));
}

// Localized state: Gaussian envelopes with a few random modes, for functionals that need decay.
inline SystemState random_localized_state(const GridPtr& g, std::mt19937_64& rng, double width, double amplitude = 1.0) {
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  const double a1 = ud(rng), a2 = ud(rng), k1 = 2.0 * ud(rng), k2 = 2.0 * ud(rng), c1 = ud(rng), c2 = ud(rng);
  SystemState s = SystemState::zero(g);
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double x = g->x(j);
    const double env1 = std::exp(-std::pow((x - c1) / width, 2)), env2 = std::exp(-std::pow((x - c2) / width, 2));
    s.u[j] = amplitude * env1 * (cplx(1.0, a1) * std::exp(cplx(0.0, k1 * x)) + 0.5 * a2);
    s.v[j] = amplitude * env2 * (1.0 + a2 * std::cos(k2 * x)) + 0.3 * amplitude * a1 * env1;
  }
  return s;
}

}  // namespace skdv::testing
