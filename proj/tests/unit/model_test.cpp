#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "skdv/model.hpp"
#include "test_fields.hpp"

namespace skdv {
namespace {

TEST(ModelParams, ClassifiesRegimes) {
  EXPECT_EQ((ModelParams{1.0, 0.0, 1.0}).regime(), Regime::coupled);
  EXPECT_EQ((ModelParams{-2.0, 1.0, -0.5}).regime(), Regime::coupled);
  EXPECT_EQ((ModelParams{0.0, 1.0, 1.0}).regime(), Regime::decoupled_test);
  EXPECT_EQ((ModelParams{1.0, 1.0, 0.0}).regime(), Regime::decoupled_test);
  EXPECT_EQ((ModelParams{1.0, 0.0, -1.0}).regime(), Regime::invalid);
}

TEST(NonlinearTerms, ZeroStateGivesZero) {
  const auto g = SpectralGrid::make(64, 4.0);
  const auto s = SystemState::zero(g);
  const ModelParams p{1.0, -0.3, 2.0};
  EXPECT_EQ(max_abs(rhs_nonlinear_u(s, p)), 0.0);
  EXPECT_EQ(max_abs(rhs_nonlinear_v(s, p)), 0.0);
  EXPECT_EQ(max_abs(time_derivative_u(s, p)), 0.0);
  EXPECT_EQ(max_abs(time_derivative_v(s, p)), 0.0);
}

// For fields far below the grid cutoff, dealiasing changes nothing and the
// products equal their pointwise values.
TEST(NonlinearTerms, MatchPointwiseEvaluationForWellResolvedFields) {
  const auto g = SpectralGrid::make(256, 10.0);
  std::mt19937_64 rng(21);
  const auto s = testing::random_state(g, rng, 2.0, 0.5);
  const ModelParams p{2.0, -1.0, 3.0};
  const auto nu = rhs_nonlinear_u(s, p);
  for (std::size_t j = 0; j < g->size(); ++j) {
    const cplx u = s.u[j];
    const cplx oracle = cplx(0.0, -1.0) * (p.alpha * u * s.v[j] + p.beta * u * std::norm(u));
    EXPECT_NEAR(std::abs(nu[j] - oracle), 0.0, 1e-12);
  }
}

TEST(NonlinearTerms, ConservativeAndAdvectiveFormsAgree) {
  const auto g = SpectralGrid::make(256, 10.0);
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 3; ++trial) {
    const auto s = testing::random_state(g, rng, 2.5, 0.7);
    const ModelParams p{1.0, 0.5, 1.5};
    const auto a = rhs_nonlinear_v(s, p), b = rhs_nonlinear_v_advective(s, p);
    for (std::size_t j = 0; j < g->size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-11);
  }
}

TEST(NonlinearTerms, ConservativeFormHasZeroMean) {
  const auto g = SpectralGrid::make(128, 6.0);
  std::mt19937_64 rng(23);
  const auto s = testing::random_state(g, rng, 4.0);
  EXPECT_NEAR(integrate(rhs_nonlinear_v(s, ModelParams{1.0, 0.0, 1.0})), 0.0, 1e-12);
}

TEST(TimeDerivative, KdvSolitonTravelsAtItsSpeed) {
  // For the travelling wave, v_t = -c v_x; the right-hand side must agree.
  const auto g = SpectralGrid::make(512, 40.0);
  const double c = 1.3;
  SystemState s = SystemState::zero(g);
  for (std::size_t j = 0; j < g->size(); ++j) s.v[j] = kdv_soliton_profile(g->x(j), c);
  const auto vt = time_derivative_v(s, ModelParams{1.0, 0.0, 1.0});
  const auto vx = derivative(s.v, 1);
  for (std::size_t j = 0; j < g->size(); ++j) EXPECT_NEAR(vt[j], -c * vx[j], 1e-11);
}

TEST(Profile, GaussianAndModulatedValues) {
  const auto p = Profile::gaussian(2.0, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(p.evaluate(1.0).real(), 2.0);
  EXPECT_NEAR(p.evaluate(4.0).real(), 2.0 * std::exp(-1.0), 1e-15);
  const auto m = Profile::modulated_gaussian(1.0, 2.0, 3.0);
  EXPECT_NEAR(std::abs(m.evaluate(0.7) - std::exp(-0.49 / 4.0) * std::exp(cplx(0.0, 2.1))), 0.0, 1e-15);
  EXPECT_TRUE(p.is_real());
  EXPECT_FALSE(m.is_real());
}

TEST(Profile, SolitonClosedForm) {
  EXPECT_DOUBLE_EQ(kdv_soliton_profile(0.0, 2.0), 6.0);
  const double x = 1.7, c = 0.8;
  EXPECT_NEAR(kdv_soliton_profile(x, c), 3.0 * c / std::pow(std::cosh(std::sqrt(c) * x / 2.0), 2), 1e-15);
}

TEST(Profile, ValidationRejectsBadParameters) {
  EXPECT_THROW(Profile::gaussian(1.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(Profile::gaussian(1.0, -1.0).validate(), std::invalid_argument);
  EXPECT_THROW(Profile::kdv_soliton(0.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(Profile::zero().validate());
}

TEST(InitialData, RejectsInvalidComponents) {
  const auto g = SpectralGrid::make(256, 20.0);
  InitialData d;
  d.v = Profile::modulated_gaussian(1.0, 1.0, 1.0);
  EXPECT_THROW(make_initial_data(d, g), std::invalid_argument);
  d = {};
  d.u = Profile::kdv_soliton(1.0);
  EXPECT_THROW(make_initial_data(d, g), std::invalid_argument);
}

TEST(InitialData, RejectsTailMassNearTheBoundary) {
  const auto g = SpectralGrid::make(256, 20.0);
  InitialData d;
  d.u = Profile::gaussian(1.0, 2.0, 17.0);
  EXPECT_THROW(make_initial_data(d, g), std::invalid_argument);
  d.u = Profile::gaussian(1.0, 2.0, 0.0);
  EXPECT_NO_THROW(make_initial_data(d, g));
}

TEST(InitialData, AppliesScaleToBothComponents) {
  const auto g = SpectralGrid::make(128, 16.0);
  InitialData d{Profile::gaussian(1.0, 2.0), Profile::gaussian(0.5, 2.0), std::nullopt, 0.25};
  const auto s = make_initial_data(d, g);
  const std::size_t mid = g->size() / 2;
  EXPECT_DOUBLE_EQ(s.u[mid].real(), 0.25);
  EXPECT_DOUBLE_EQ(s.v[mid], 0.125);
}

TEST(InitialData, ZeroDataIsExactlyZero) {
  const auto g = SpectralGrid::make(64, 8.0);
  const auto s = make_initial_data(InitialData{}, g);
  EXPECT_EQ(max_abs(s.u), 0.0);
  EXPECT_EQ(max_abs(s.v), 0.0);
  EXPECT_EQ(outer_mass_fraction(s), 0.0);
}

TEST(SystemState, RequiresSharedGrid) {
  const auto g1 = SpectralGrid::make(16, 1.0), g2 = SpectralGrid::make(16, 1.0);
  EXPECT_THROW(SystemState(ComplexField(g1), RealField(g2)), std::invalid_argument);
}

}  // namespace
}  // namespace skdv
