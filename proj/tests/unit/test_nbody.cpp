#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "cavkin/model.hpp"
#include "cavkin/nbody.hpp"
#include "cavkin/observables.hpp"
#include "cavkin/philox.hpp"
#include "cavkin/steady.hpp"

using namespace cavkin;

namespace {
DerivedCoefficients coeffs(int n, double r = 2.0) {
  ModelParams p;
  p.n_particles = n;
  p.pump = PumpRatio{r};
  return derive_coefficients(p);
}

NBodyConfig small_config(int threads) {
  NBodyConfig nc;
  nc.coeffs = coeffs(20);
  nc.trajectories = 8;
  nc.t_end = 10.0;
  nc.sample_dt = 5.0;
  nc.seed = 7;
  nc.threads = threads;
  return nc;
}
}  // namespace

// Random123 known-answer vectors
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamFrozenDraws) {
  PhiloxStream s(1, 0, 0);
  EXPECT_DOUBLE_EQ(s.uniform(), 0.89025917297571078);
  EXPECT_DOUBLE_EQ(s.uniform(), 0.58572594838013603);
  EXPECT_DOUBLE_EQ(s.normal(), -0.88116354679001752);
}

TEST(Philox, NormalMoments) {
  PhiloxStream s(42, 3, 1);
  double m1 = 0, m2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
  }
  EXPECT_NEAR(m1 / n, 0.0, 0.01);
  EXPECT_NEAR(m2 / n, 1.0, 0.01);
}

TEST(NBody, DriftDiffusionMap) {
  const auto c = coeffs(2);
  const std::vector<double> x = {0.3, 2.0}, p = {1.0, -2.0};
  const auto d = drift_diffusion_map(x, p, c);
  const double csum = std::cos(0.3) + std::cos(2.0);
  const double proj = std::sin(0.3) * 1.0 + std::sin(2.0) * -2.0;
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(d.dx[i], p[i] / c.mass);
    EXPECT_NEAR(d.dp[i], c.S2 * std::sin(x[i]) * (c.F0 * csum + c.Gamma0 * proj), 1e-15);
    EXPECT_NEAR(d.sigma[i], std::sqrt(2 * c.D0 * c.S2) * std::sin(x[i]), 1e-15);
  }
}

TEST(NBody, FrozenShortRun) {
  const auto res = simulate(small_config(1));
  EXPECT_DOUBLE_EQ(res.series.column("theta_sq_mean").back(), 0.099280786738552285);
  EXPECT_DOUBLE_EQ(res.series.column("kinetic_temp").back(), 0.57172077951719269);
}

TEST(NBody, DeterministicAcrossThreadCounts) {
  const auto a = simulate(small_config(1));
  for (int threads : {2, 5}) {
    const auto b = simulate(small_config(threads));
    EXPECT_EQ(a.series.to_csv(), b.series.to_csv());
    EXPECT_EQ(a.final_state.x, b.final_state.x);
    EXPECT_EQ(a.final_state.p, b.final_state.p);
  }
}

TEST(NBody, RestartContinuesTheSameTrajectory) {
  auto cfg = small_config(1);
  const auto whole = simulate(cfg);
  cfg.t_end = 5.0;
  const auto half = simulate(cfg);
  const auto path = std::filesystem::temp_directory_path() / "cavkin_ensemble_test.bin";
  write_ensemble(half.final_state, path);
  const auto loaded = read_ensemble(path);
  std::filesystem::remove(path);
  const auto rest = simulate(cfg, &loaded);
  EXPECT_EQ(rest.final_state.x, whole.final_state.x);
  EXPECT_EQ(rest.final_state.p, whole.final_state.p);
  EXPECT_DOUBLE_EQ(rest.series.column("t").back(), 10.0);
}

TEST(NBody, InitialEnsembleIsThermalAndUniform) {
  const auto e = initial_ensemble(50, 400, 10.0, 2.0, 3);
  double p2 = 0.0, th = 0.0;
  for (double v : e.p) p2 += v * v;
  for (int t = 0; t < e.trajectories; ++t) th += theta_of(e.x_of(t));
  const double n = static_cast<double>(e.p.size());
  EXPECT_NEAR(p2 / n / 10.0, 0.5, 0.02);
  EXPECT_NEAR(th / e.trajectories, 0.0, 4.0 * std::sqrt(0.5 / n));
  const auto pc = pair_correlation(e);
  EXPECT_NEAR(pc.c2, 0.0, 3e-3);
}

TEST(NBody, StationaryEnsembleHoldsTemperature) {
  const auto c = coeffs(20);
  NBodyConfig nc;
  nc.coeffs = c;
  nc.trajectories = 200;
  nc.t_end = 200.0;
  nc.sample_dt = 10.0;
  nc.seed = 5;
  const auto start = stationary_ensemble(20, 200, c.ratio, c.mass, c.beta, 5);
  double th = 0.0;
  for (int t = 0; t < start.trajectories; ++t) th += theta_of(start.x_of(t));
  EXPECT_NEAR(th / start.trajectories, solve_fixed_point(2.0).theta_bar, 0.02);
  const auto res = simulate(nc, &start);
  const auto T = res.series.column("kinetic_temp");
  double mean = 0.0;
  for (double v : T) mean += v;
  mean /= static_cast<double>(T.size());
  EXPECT_NEAR(mean, 1.0 / c.beta, 0.05 / c.beta);
}

TEST(NBody, IntegratorNames) {
  EXPECT_EQ(integrator_from_string("heun"), Integrator::Heun);
  EXPECT_EQ(to_string(Integrator::Splitting), "splitting");
  EXPECT_THROW(integrator_from_string("rk4"), std::invalid_argument);
}
