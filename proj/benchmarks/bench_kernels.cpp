#include <benchmark/benchmark.h>

#include "cavkin/meanfield.hpp"
#include "cavkin/model.hpp"
#include "cavkin/nbody.hpp"
#include "cavkin/observables.hpp"
#include "cavkin/stability.hpp"
#include "cavkin/steady.hpp"
#include "cavkin/vlasov.hpp"

using namespace cavkin;

namespace {

DerivedCoefficients coeffs(int n) {
  ModelParams p;
  p.n_particles = n;
  p.pump = PumpRatio{2.0};
  return derive_coefficients(p);
}

void BM_VlasovStep(benchmark::State& st) {
  const auto vp = VlasovParams::from(coeffs(50));
  const auto grid = resolve_grid({64, static_cast<std::size_t>(st.range(0)), 0.0}, vp.mass, vp.beta);
  auto f = stationary_field(2.0, vp.beta, vp.mass, grid);
  VlasovSolver s(vp, grid);
  for (auto _ : st) s.step(f, 0.01);
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(grid.nx * grid.np));
}
BENCHMARK(BM_VlasovStep)->Arg(128)->Arg(256);

void BM_MeanFieldStep(benchmark::State& st) {
  const auto c = coeffs(50);
  const auto grid = resolve_grid({64, 128, 0.0}, c.mass, c.beta);
  auto f = stationary_field(2.0, c.beta, c.mass, grid);
  MeanFieldSolver s(c, grid, {false, true, 50});
  for (auto _ : st) s.step(f, 0.025);
}
BENCHMARK(BM_MeanFieldStep);

void BM_NBody(benchmark::State& st) {
  NBodyConfig nc;
  nc.coeffs = coeffs(static_cast<int>(st.range(0)));
  nc.trajectories = 8;
  nc.t_end = 10.0;
  nc.sample_dt = 10.0;
  nc.integrator = static_cast<Integrator>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(simulate(nc));
  st.SetItemsProcessed(st.iterations() * nc.trajectories * st.range(0) * 200);
}
BENCHMARK(BM_NBody)->Args({50, 0})->Args({50, 1})->Args({200, 0});

void BM_Oracle(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(g_alpha_oracle(1.0, n));
}
BENCHMARK(BM_Oracle)->Arg(50)->Arg(10000);

void BM_GrowthRate(benchmark::State& st) {
  const auto p = DispersionParams::from(coeffs(50), 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(growth_rate(p));
}
BENCHMARK(BM_GrowthRate);

}  // namespace

BENCHMARK_MAIN();
