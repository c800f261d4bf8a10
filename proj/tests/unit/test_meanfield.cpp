#include <cmath>

#include <gtest/gtest.h>

#include "cavkin/meanfield.hpp"
#include "cavkin/model.hpp"
#include "cavkin/steady.hpp"
#include "cavkin/vlasov.hpp"

using namespace cavkin;

namespace {
DerivedCoefficients coeffs(double r, int n = 1000000) {
  ModelParams p;
  p.n_particles = n;
  p.pump = PumpRatio{r};
  return derive_coefficients(p);
}
}  // namespace

TEST(MeanField, StationaryFieldDriftsLittle) {
  for (double r : {0.5, 2.0}) {
    const auto c = coeffs(r);
    const auto grid = resolve_grid({64, 128, 0.0}, c.mass, c.beta);
    auto f = stationary_field(r, c.beta, c.mass, grid);
    MeanFieldSolver s(c, grid, {false, true, c.n_particles});
    const double th0 = functionals(f).theta;
    for (int k = 0; k < 1000; ++k) s.step(f, 0.03);
    EXPECT_LT(std::abs(functionals(f).theta - th0), 1e-4) << "r = " << r;
    EXPECT_NEAR(f.norm(), 1.0, 1e-10);
  }
}

TEST(MeanField, PerturbedInitial) {
  const auto c = coeffs(2.0, 50);
  const auto grid = resolve_grid({64, 128, 0.0}, c.mass, 2.0);
  const auto f = perturbed_initial(grid, c.mass, 2.0, 0.1);
  EXPECT_NEAR(functionals(f).theta, 0.05, 1e-14);
  EXPECT_GT(default_delta_n(20), default_delta_n(200));
  EXPECT_THROW(perturbed_initial(grid, c.mass, 2.0, 1.5), std::invalid_argument);
}

TEST(MeanField, RelaxationHeadsToFixedPoint) {
  RelaxationConfig rc;
  rc.coeffs = coeffs(2.0, 20);
  rc.options.n_particles = 20;
  rc.t_end = 1500.0;
  rc.sample_dt = 5.0;
  const auto res = run_relaxation(rc);
  const auto th = res.series.column("theta");
  EXPECT_GT(th.back(), 0.7);
  EXPECT_GT(res.plateau_time, 0.0);
  EXPECT_NEAR(res.series.column("norm").back(), 1.0, 1e-9);
}

TEST(MeanField, ThermalUniformStateStaysUniform) {
  // below threshold with beta0 = beta the uniform thermal state is stationary
  const auto c = coeffs(0.5);
  RelaxationConfig rc;
  rc.coeffs = c;
  rc.options.n_particles = c.n_particles;
  rc.beta0 = c.beta;
  rc.delta_n = 0.0;
  rc.t_end = 30.0;
  const auto res = run_relaxation(rc);
  EXPECT_NEAR(res.series.column("theta").back(), 0.0, 1e-12);
  EXPECT_NEAR(res.series.column("kinetic_temp").back(), 1.0 / c.beta, 1e-6);
}
