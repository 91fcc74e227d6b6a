#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "skdv/grid.hpp"
#include "test_fields.hpp"

namespace skdv {
namespace {

using Coeffs = std::map<int, cplx>;  // mode index m -> coefficient of exp(i pi m x / L)

Coeffs random_coeffs(std::mt19937_64& rng, int max_mode, bool real) {
  std::normal_distribution<double> nd;
  Coeffs c;
  for (int m = -max_mode; m <= max_mode; ++m) c[m] = cplx(nd(rng), nd(rng));
  if (real) {
    for (int m = 1; m <= max_mode; ++m) c[-m] = std::conj(c[m]);
    c[0] = c[0].real();
  }
  return c;
}

Coeffs convolve(const Coeffs& a, const Coeffs& b) {
  Coeffs out;
  for (const auto& [m, x] : a)
    for (const auto& [n, y] : b) out[m + n] += x * y;
  return out;
}

std::vector<cplx> evaluate(const SpectralGrid& g, const Coeffs& c, int keep) {
  std::vector<cplx> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (const auto& [m, x] : c)
      if (std::abs(m) <= keep) out[j] += x * std::exp(cplx(0.0, M_PI * m * g.x(j) / g.half_length()));
  return out;
}

// Eighth-order central difference of a closed-form function.
template <class F>
double fd8(F f, double x, double h) {
  static constexpr double w[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += w[i] * (f(x + (i + 1) * h) - f(x - (i + 1) * h));
  return s / h;
}

TEST(SpectralGrid, RejectsBadSizes) {
  EXPECT_THROW(SpectralGrid::make(100, 1.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid::make(2, 1.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid::make(64, 0.0), std::invalid_argument);
  EXPECT_THROW(SpectralGrid::make(64, -1.0), std::invalid_argument);
}

TEST(SpectralGrid, CoordinatesAndWavenumbers) {
  const auto g = SpectralGrid::make(16, 4.0);
  EXPECT_DOUBLE_EQ(g->dx(), 0.5);
  EXPECT_DOUBLE_EQ(g->x(0), -4.0);
  EXPECT_DOUBLE_EQ(g->x(15), 3.5);
  const auto k = g->wavenumbers();
  EXPECT_DOUBLE_EQ(k[1], M_PI / 4.0);
  EXPECT_DOUBLE_EQ(k[15], -M_PI / 4.0);
  EXPECT_DOUBLE_EQ(k[g->nyquist_index()], -M_PI * 8.0 / 4.0);
}

TEST(SpectralGrid, TransformRoundTrip) {
  const auto g = SpectralGrid::make(64, 3.0);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<cplx> a(64), c(64), b(64);
  for (auto& x : a) x = cplx(nd(rng), nd(rng));
  g->forward(a, c);
  g->inverse(c, b);
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(std::abs(a[j] - b[j]), 0.0, 1e-14);
}

TEST(Derivative, MatchesClosedFormOnGaussian) {
  const auto g = SpectralGrid::make(256, 16.0);
  RealField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-g->x(j) * g->x(j) / 4.0);
  const auto d1 = derivative(f, 1), d2 = derivative(f, 2), d3 = derivative(f, 3);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = g->x(j), e = std::exp(-x * x / 4.0);
    EXPECT_NEAR(d1[j], -x / 2.0 * e, 1e-12);
    EXPECT_NEAR(d2[j], (x * x / 4.0 - 0.5) * e, 1e-12);
    EXPECT_NEAR(d3[j], (1.5 * x / 2.0 - x * x * x / 8.0) * e, 1e-12);
  }
}

TEST(Derivative, AgreesWithEighthOrderDifferences) {
  const auto g = SpectralGrid::make(512, 16.0);
  auto f = [](double x) { return std::exp(-x * x / 2.0) * std::cos(1.5 * x); };
  ComplexField u(g);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = cplx(f(g->x(j)), 0.5 * f(g->x(j) - 1.0));
  const auto du = derivative(u, 1);
  const double h = 1e-2;
  for (std::size_t j = 0; j < u.size(); j += 7) {
    const double x = g->x(j);
    const cplx oracle(fd8(f, x, h), 0.5 * fd8([&](double y) { return f(y - 1.0); }, x, h));
    EXPECT_NEAR(std::abs(du[j] - oracle), 0.0, 1e-9) << "x = " << x;
  }
}

TEST(Derivative, OddOrdersZeroTheNyquistMode) {
  const auto g = SpectralGrid::make(32, 2.0);
  RealField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = (j % 2 == 0) ? 1.0 : -1.0;
  EXPECT_NEAR(max_abs(derivative(f, 1)), 0.0, 1e-13);
  EXPECT_NEAR(max_abs(derivative(f, 3)), 0.0, 1e-13);
  const double kn = M_PI * 16.0 / 2.0;
  const auto d2 = derivative(f, 2);
  for (std::size_t j = 0; j < f.size(); ++j) EXPECT_NEAR(d2[j], -kn * kn * f[j], 1e-9);
}

TEST(Derivative, RejectsBadInput) {
  const auto g = SpectralGrid::make(16, 1.0);
  RealField f(g);
  EXPECT_THROW(derivative(f, 0), std::invalid_argument);
  EXPECT_THROW(derivative(f, 4), std::invalid_argument);
  f[3] = std::nan("");
  EXPECT_THROW(derivative(f, 1), std::domain_error);
}

TEST(DealiasedProduct, TripleProductMatchesCoefficientConvolution) {
  const std::size_t n = 64;
  const auto g = SpectralGrid::make(n, 5.0);
  std::mt19937_64 rng(11);
  const int max_mode = static_cast<int>(n) / 4;  // triple product reaches 3n/4, beyond the retained band
  const Coeffs a = random_coeffs(rng, max_mode, false), b = random_coeffs(rng, max_mode, false),
               c = random_coeffs(rng, max_mode, false);
  const ComplexField fa(g, evaluate(*g, a, max_mode)), fb(g, evaluate(*g, b, max_mode)),
      fc(g, evaluate(*g, c, max_mode));
  const std::vector<ComplexField> factors{fa, fb, fc};
  const auto prod = dealiased_product(std::span<const ComplexField>(factors));
  const auto oracle = evaluate(*g, convolve(convolve(a, b), c), static_cast<int>(n) / 2);
  double scale = 0.0;
  for (const auto& z : oracle) scale = std::max(scale, std::abs(z));
  for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(std::abs(prod[j] - oracle[j]) / scale, 0.0, 1e-12);
}

TEST(DealiasedProduct, RealPairMatchesCoefficientConvolution) {
  const std::size_t n = 64;
  const auto g = SpectralGrid::make(n, 2.0);
  std::mt19937_64 rng(12);
  const int max_mode = 24;
  const Coeffs a = random_coeffs(rng, max_mode, true), b = random_coeffs(rng, max_mode, true);
  RealField fa(g), fb(g);
  const auto sa = evaluate(*g, a, max_mode), sb = evaluate(*g, b, max_mode);
  for (std::size_t j = 0; j < n; ++j) {
    fa[j] = sa[j].real();
    fb[j] = sb[j].real();
  }
  const std::vector<RealField> factors{fa, fb};
  const auto prod = dealiased_product(std::span<const RealField>(factors));
  const auto oracle = evaluate(*g, convolve(a, b), static_cast<int>(n) / 2);
  for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(prod[j], oracle[j].real(), 1e-11);
}

TEST(DealiasedProduct, LowModesArePlainProducts) {
  const auto g = SpectralGrid::make(128, 8.0);
  std::mt19937_64 rng(3);
  const auto a = testing::random_real(g, rng, 1.0), b = testing::random_real(g, rng, 1.0);
  const std::vector<RealField> factors{a, b};
  const auto p = dealiased_product(std::span<const RealField>(factors));
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(p[j], a[j] * b[j], 1e-12);
}

TEST(DealiasedProduct, RejectsMismatchedGridsAndArity) {
  const auto g1 = SpectralGrid::make(16, 1.0), g2 = SpectralGrid::make(16, 1.0);
  const std::vector<RealField> mixed{RealField(g1), RealField(g2)};
  EXPECT_THROW(dealiased_product(std::span<const RealField>(mixed)), std::invalid_argument);
  const std::vector<RealField> one{RealField(g1)};
  EXPECT_THROW(dealiased_product(std::span<const RealField>(one)), std::invalid_argument);
}

TEST(Quadrature, ParsevalAgreesWithSampleSum) {
  const auto g = SpectralGrid::make(128, 6.0);
  std::mt19937_64 rng(5);
  const auto u = testing::random_complex(g, rng, 3.0);
  EXPECT_NEAR(parseval_norm_sq(*g, spectrum(u)), l2_norm_sq(u), 1e-11 * l2_norm_sq(u));
}

TEST(Quadrature, IntegratesGaussianExactly) {
  const auto g = SpectralGrid::make(256, 20.0);
  RealField f(g);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::exp(-g->x(j) * g->x(j));
  EXPECT_NEAR(integrate(f), std::sqrt(M_PI), 1e-14);
}

}  // namespace
}  // namespace skdv
