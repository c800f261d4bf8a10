#include <cmath>

#include <gtest/gtest.h>

#include "cavkin/errors.hpp"
#include "cavkin/model.hpp"
#include "cavkin/steady.hpp"
#include "cavkin/vlasov.hpp"

using namespace cavkin;

namespace {
VlasovParams params(double r) {
  ModelParams p;
  p.n_particles = 50;
  p.pump = PumpRatio{r};
  return VlasovParams::from(derive_coefficients(p));
}
}  // namespace

TEST(Vlasov, Coefficients) {
  const auto vp = params(2.0);
  EXPECT_DOUBLE_EQ(vp.mass, 10.0);
  EXPECT_DOUBLE_EQ(vp.n_bar, 1.0);
  // A = 2 delta_c n_bar Theta - n_bar beta Xi / m
  EXPECT_NEAR(potential_amplitude(vp, 0.5, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(potential_amplitude(vp, 0.0, 1.0), -0.2, 1e-15);
}

TEST(Vlasov, StationaryFieldIsStationary) {
  const auto vp = params(2.0);
  const auto grid = resolve_grid({64, 128, 0.0}, vp.mass, vp.beta);
  auto f = stationary_field(2.0, vp.beta, vp.mass, grid);
  VlasovSolver s(vp, grid);
  const double th0 = functionals(f).theta;
  const double e0 = energy(f, vp);
  auto g = f;
  for (int k = 0; k < 500; ++k) s.step(f, 0.02);
  for (int k = 0; k < 1000; ++k) s.step(g, 0.01);
  // Strang splitting moves the discrete equilibrium by O(dt^2)
  const double d1 = std::abs(functionals(f).theta - th0), d2 = std::abs(functionals(g).theta - th0);
  EXPECT_LT(d1, 1e-6);
  EXPECT_GT(d1 / d2, 3.0);
  EXPECT_NEAR(energy(f, vp), e0, 1e-9 * std::abs(e0));
}

TEST(Vlasov, QuenchConservesEnergyAndTracksXi) {
  QuenchConfig q;
  q.params = params(2.0);
  q.beta0 = 2.0;
  q.t_end = 100.0;
  q.sample_dt = 0.02;
  {
    // without the Xi coupling the flow is Hamiltonian
    auto h = q;
    h.params.beta = 0.0;
    h.sample_dt = 1.0;
    const auto hr = run_quench(h);
    const auto e = hr.series.column("energy");
    EXPECT_LT(std::abs(e.back() - e.front()) / std::abs(e.front()) / h.t_end, 1e-6);
  }
  const auto res = run_quench(q);
  const auto t = res.series.column("t");
  const auto th = res.series.column("theta");
  const auto xi = res.series.column("xi");
  // d Theta / dt = -(k/m) Xi, centered differences
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double d = (th[i + 1] - th[i - 1]) / (t[i + 1] - t[i - 1]);
    worst = std::max(worst, std::abs(d + xi[i] / q.params.mass));
    scale = std::max(scale, std::abs(d));
  }
  EXPECT_LT(worst, 1e-4 * scale);
  // the instability grows the order parameter
  EXPECT_GT(std::abs(th.back()), 0.1);
}

TEST(Vlasov, CflViolationThrows) {
  const auto vp = params(2.0);
  const auto grid = resolve_grid({64, 128, 0.0}, vp.mass, vp.beta);
  auto f = modulated_thermal_field(grid, vp.mass, 2.0, 1e-4);
  VlasovSolver s(vp, grid);
  EXPECT_GT(s.max_stable_dt(f), 0.03);
  EXPECT_THROW(s.step(f, 0.05), NumericalError);
}
