#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "skdv/conservation.hpp"
#include "skdv/integrator.hpp"
#include "skdv/pipeline.hpp"
#include "test_fields.hpp"

namespace skdv {
namespace {

double distance(const SystemState& a, const SystemState& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.u.size(); ++j) s += std::norm(a.u[j] - b.u[j]) + std::pow(a.v[j] - b.v[j], 2);
  return std::sqrt(s * a.grid().dx());
}

SystemState gaussian_state(const GridPtr& g, double amp, double width, double carrier = 0.0) {
  InitialData d{Profile::modulated_gaussian(amp, width, carrier), Profile::gaussian(amp, width), std::nullopt, 1.0};
  return make_initial_data(d, g);
}

TEST(DispersionStep, SingleModesRotateExactly) {
  const auto g = SpectralGrid::make(64, M_PI);
  const double k = 3.0, dt = 0.37;
  SystemState s = SystemState::zero(g);
  for (std::size_t j = 0; j < g->size(); ++j) {
    s.u[j] = std::exp(cplx(0.0, k * g->x(j)));
    s.v[j] = std::cos(k * g->x(j));
  }
  const auto r = dispersion_step(s, dt);
  for (std::size_t j = 0; j < g->size(); ++j) {
    const double x = g->x(j);
    EXPECT_NEAR(std::abs(r.u[j] - std::exp(cplx(0.0, k * x - k * k * dt))), 0.0, 1e-13);
    EXPECT_NEAR(r.v[j], std::cos(k * x + k * k * k * dt), 1e-13);
  }
}

TEST(DispersionStep, IsASemigroupAndPreservesNorms) {
  const auto g = SpectralGrid::make(128, 8.0);
  std::mt19937_64 rng(1);
  const auto s = testing::random_state(g, rng, 4.0);
  const auto a = dispersion_step(dispersion_step(s, 0.1), 0.25);
  const auto b = dispersion_step(s, 0.35);
  EXPECT_LT(distance(a, b), 1e-12);
  EXPECT_NEAR(l2_norm_sq(b.u), l2_norm_sq(s.u), 1e-12);
  EXPECT_NEAR(l2_norm_sq(b.v), l2_norm_sq(s.v), 1e-12);
}

TEST(NonlinearStep, KeepsModulusOfUAndMeanOfV) {
  const auto g = SpectralGrid::make(256, 16.0);
  const auto s = gaussian_state(g, 0.8, 2.0, 1.0);
  const ModelParams p{1.0, -0.5, 2.0};
  for (bool symmetric : {true, false}) {
    const auto r = nonlinear_step(s, 0.01, p, true, symmetric);
    for (std::size_t j = 0; j < g->size(); ++j) EXPECT_NEAR(std::abs(r.u[j]), std::abs(s.u[j]), 1e-14);
    EXPECT_NEAR(integrate(r.v), integrate(s.v), 1e-13);
  }
}

TEST(Step, StrangIsSecondOrderAndLieFirstOrder) {
  const auto g = SpectralGrid::make(256, 20.0);
  const auto s0 = gaussian_state(g, 0.6, 2.0, 0.5);
  const ModelParams p{1.0, 0.5, 1.0};
  const double T = 0.4;
  auto evolve = [&](double dt, Scheme sc) {
    SystemState s = s0;
    const auto n = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < n; ++i) s = step(s, dt, p, sc);
    return s;
  };
  const auto ref = evolve(T / 1280, Scheme::strang);
  for (auto [sc, expected] : {std::pair{Scheme::strang, 2.0}, std::pair{Scheme::lie, 1.0}}) {
    const double e1 = distance(evolve(T / 20, sc), ref), e2 = distance(evolve(T / 40, sc), ref),
                 e3 = distance(evolve(T / 80, sc), ref);
    EXPECT_NEAR(std::log2(e1 / e2), expected, 0.15) << to_string(sc);
    EXPECT_NEAR(std::log2(e2 / e3), expected, 0.15) << to_string(sc);
  }
}

TEST(Run, FreeSchrodingerGaussianMatchesClosedForm) {
  EXPECT_LT(free_schrodinger_error(1024, 64.0, 1e-3, 1.0), 1e-9);
}

TEST(Run, KdvSolitonKeepsItsShape) { EXPECT_LT(kdv_soliton_error(512, 32.0, 1e-3, 2.0, 1.0), 1e-3); }

TEST(Run, ZeroDataStaysZero) {
  const auto g = SpectralGrid::make(64, 8.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.5;
  const auto r = run(SystemState::zero(g), cfg, ModelParams{1.0, 1.0, 1.0});
  EXPECT_EQ(max_abs(r.final_state.u), 0.0);
  EXPECT_EQ(max_abs(r.final_state.v), 0.0);
  EXPECT_FALSE(r.blowup);
  EXPECT_FALSE(r.boundary_flag);
  EXPECT_EQ(r.steps_taken, 50u);
  EXPECT_NEAR(r.final_state.time, 0.5, 1e-15);
}

TEST(Run, RejectsInvalidAndUnflaggedTestRegimes) {
  const auto g = SpectralGrid::make(64, 8.0);
  StepperConfig cfg;
  EXPECT_THROW(run(SystemState::zero(g), cfg, ModelParams{1.0, 0.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(run(SystemState::zero(g), cfg, ModelParams{0.0, 0.0, 1.0}), std::invalid_argument);
  cfg.allow_test_regime = true;
  EXPECT_NO_THROW(run(SystemState::zero(g), cfg, ModelParams{0.0, 0.0, 1.0}));
}

TEST(Run, RejectsNonFiniteInitialDataAndBadTimes) {
  const auto g = SpectralGrid::make(64, 8.0);
  auto s = SystemState::zero(g);
  StepperConfig cfg;
  cfg.dt = 0.3;
  cfg.t_end = 1.0;
  EXPECT_THROW(run(s, cfg, ModelParams{}), std::invalid_argument);
  cfg.dt = 0.25;
  s.v[4] = std::nan("");
  EXPECT_THROW(run(s, cfg, ModelParams{}), std::domain_error);
}

TEST(Run, ReportsBlowupWhenTheNormLimitIsExceeded) {
  const auto g = SpectralGrid::make(128, 16.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  cfg.blowup_h1_limit = 1e-3;
  const auto r = run(gaussian_state(g, 1.0, 2.0), cfg, ModelParams{});
  EXPECT_TRUE(r.blowup);
  EXPECT_FALSE(r.blowup_reason.empty());
  EXPECT_EQ(r.steps_taken, 0u);
}

TEST(Run, FlagsPacketsThatReachTheBoundary) {
  const auto g = SpectralGrid::make(256, 16.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  cfg.snapshot_stride = 10;
  InitialData d{Profile::modulated_gaussian(0.5, 1.5, 4.0), Profile::zero(), std::nullopt, 1.0};
  const auto r = run(make_initial_data(d, g), cfg, ModelParams{});
  EXPECT_TRUE(r.boundary_flag);
  ASSERT_TRUE(r.first_flag_time.has_value());
  EXPECT_GT(*r.first_flag_time, 0.0);
  EXPECT_GT(r.max_boundary_mass, cfg.boundary_threshold);
}

TEST(Run, WarnsWhenTheSplittingPhaseIsLarge) {
  const auto g = SpectralGrid::make(1024, 8.0);
  StepperConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 0.1;
  EXPECT_FALSE(cfg.validate(*g).empty());
  cfg.dt = 1e-6;
  cfg.t_end = 1e-6;
  EXPECT_TRUE(cfg.validate(*g).empty());
}

TEST(Run, ObserverSeesEveryStepAndSnapshot) {
  struct Counter : StepObserver {
    int starts = 0, steps = 0, snapshots = 0;
    void on_start(const SystemState&) override { ++starts; }
    void on_step(const SystemState&, std::size_t) override { ++steps; }
    void on_snapshot(const SystemState&, std::size_t, double) override { ++snapshots; }
  } counter;
  const auto g = SpectralGrid::make(64, 8.0);
  StepperConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.25;
  cfg.snapshot_stride = 10;
  run(SystemState::zero(g), cfg, ModelParams{}, &counter);
  EXPECT_EQ(counter.starts, 1);
  EXPECT_EQ(counter.steps, 25);
  EXPECT_EQ(counter.snapshots, 4);  // t = 0, 0.1, 0.2 and the final 0.25
}

}  // namespace
}  // namespace skdv
