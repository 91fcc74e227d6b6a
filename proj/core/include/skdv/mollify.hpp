#pragma once

#include "skdv/grid.hpp"
#include "skdv/model.hpp"

namespace skdv {

// Smooth bump with plateau on [-1, 1], support [-2, 2], rescaled to unit mass.
double mollifier_bump(double x);
// zeta_n(x) = n zeta(n x).
double mollifier_kernel(double x, int level);
// Fourier transform of the unit bump, integral of zeta(x) exp(-i xi x).
double mollifier_transform(double xi);

struct MollifierSpec {
  int level = 1;
};

RealField mollify(const RealField& f, int level);
ComplexField mollify(const ComplexField& f, int level);
SystemState mollify_data(const SystemState& data, const MollifierSpec& spec);

}  // namespace skdv
