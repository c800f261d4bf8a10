#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "cavkin/phase_space.hpp"
#include "cavkin/spectral_shift.hpp"
#include "cavkin/time_series.hpp"

using namespace cavkin;

TEST(PhaseSpace, ModulatedFieldFunctionals) {
  const auto g = PhaseSpaceGrid::thermal(10.0, 2.0, 64, 128);
  const auto f = modulated_thermal_field(g, 10.0, 2.0, 0.02);
  const auto m = moments(f);
  EXPECT_NEAR(m.norm, 1.0, 1e-14);
  EXPECT_NEAR(m.theta, 0.01, 1e-14);
  EXPECT_NEAR(m.xi, 0.0, 1e-16);
  EXPECT_NEAR(m.p2, 10.0 / 2.0, 5e-7);
  EXPECT_LT(truncation_mass(f), 1e-8);
}

TEST(PhaseSpace, SpectralShiftIsExactForIntegerCells) {
  PhaseSpaceGrid g{32, 16, 4.0};
  PhaseSpaceField f(g);
  for (std::size_t j = 0; j < g.np; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) f.at(i, j) = 1.0 + std::sin(g.x(i)) * std::exp(-g.p(j) * g.p(j));
  const PhaseSpaceField orig = f;
  SpectralShifter s(g);
  std::vector<double> shifts(g.np, 3.0 * g.dx());
  s.shift_rows(f, shifts);
  for (std::size_t j = 0; j < g.np; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) EXPECT_NEAR(f.at((i + 3) % g.nx, j), orig.at(i, j), 1e-13);
}

TEST(PhaseSpace, SnapshotRoundTrip) {
  const auto g = PhaseSpaceGrid::thermal(10.0, 2.0, 16, 32);
  auto f = modulated_thermal_field(g, 10.0, 2.0, 0.1);
  f.set_time(12.5);
  const auto path = std::filesystem::temp_directory_path() / "cavkin_snapshot_test.bin";
  write_snapshot(f, path);
  const auto h = read_snapshot(path);
  std::filesystem::remove(path);
  EXPECT_EQ(h.grid().nx, 16u);
  EXPECT_EQ(h.grid().np, 32u);
  EXPECT_DOUBLE_EQ(h.grid().p_max, g.p_max);
  EXPECT_DOUBLE_EQ(h.time(), 12.5);
  for (std::size_t k = 0; k < f.values().size(); ++k) EXPECT_EQ(h.values()[k], f.values()[k]);
}

TEST(TimeSeries, CsvRoundTripsDoubles) {
  TimeSeries s({"t", "v"});
  s.add_row({0.1, 1.0 / 3.0});
  s.add_row({1e-300, -2.5e17});
  EXPECT_EQ(s.to_csv(), "t,v\n0.10000000000000001,0.33333333333333331\n1e-300,-2.5e+17\n");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_THROW(s.add_row({1.0}), std::invalid_argument);
}
