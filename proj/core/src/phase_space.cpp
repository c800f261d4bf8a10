#include "cavkin/phase_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace cavkin {

double PhaseSpaceGrid::wavelength() const { return 2.0 * std::numbers::pi; }
double PhaseSpaceGrid::dx() const { return wavelength() / static_cast<double>(nx); }
double PhaseSpaceGrid::dp() const { return 2.0 * p_max / static_cast<double>(np); }
double PhaseSpaceGrid::x(std::size_t i) const { return static_cast<double>(i) * dx(); }
double PhaseSpaceGrid::p(std::size_t j) const {
  return -p_max + (static_cast<double>(j) + 0.5) * dp();
}

PhaseSpaceGrid PhaseSpaceGrid::thermal(double mass, double beta, std::size_t nx, std::size_t np,
                                       double widths) {
  if (!(mass > 0.0 && beta > 0.0)) throw std::invalid_argument("thermal grid needs mass, beta > 0");
  return PhaseSpaceGrid{nx, np, widths * std::sqrt(mass / beta)};
}

PhaseSpaceField::PhaseSpaceField(PhaseSpaceGrid grid, double time)
    : grid_(grid), time_(time), values_(grid.size(), 0.0) {
  if (grid.nx < 4 || grid.np < 4 || !(grid.p_max > 0.0)) {
    throw std::invalid_argument("phase-space grid needs nx, np >= 4 and p_max > 0");
  }
}

double PhaseSpaceField::norm() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.dp() / static_cast<double>(grid_.nx);
}

void PhaseSpaceField::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw std::runtime_error("cannot normalize a field with non-positive mass");
  for (double& v : values_) v /= n;
}

double PhaseSpaceField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

Moments moments(const PhaseSpaceField& f) {
  const auto& g = f.grid();
  std::vector<double> c(g.nx), s(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i) {
    c[i] = std::cos(g.x(i));
    s[i] = std::sin(g.x(i));
  }
  Moments m;
  for (std::size_t j = 0; j < g.np; ++j) {
    const double p = g.p(j);
    const double* row = f.values().data() + j * g.nx;
    double r0 = 0.0, rc = 0.0, rs = 0.0, rc2 = 0.0, rs2 = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
      r0 += row[i];
      rc += c[i] * row[i];
      rs += s[i] * row[i];
      rc2 += c[i] * c[i] * row[i];
      rs2 += s[i] * s[i] * row[i];
    }
    m.norm += r0;
    m.theta += rc;
    m.xi += p * rs;
    m.p2 += p * p * r0;
    m.bunching += rc2;
    m.sin2 += rs2;
  }
  const double w = g.dp() / static_cast<double>(g.nx);
  m.norm *= w;
  m.theta *= w;
  m.xi *= w;
  m.p2 *= w;
  m.bunching *= w;
  m.sin2 *= w;
  return m;
}

Functionals functionals(const PhaseSpaceField& f) {
  const auto m = moments(f);
  return {m.theta, m.xi};
}

double truncation_mass(const PhaseSpaceField& f) {
  const auto& g = f.grid();
  const double edge = g.p_max - 3.0 * g.dp();
  double s = 0.0;
  for (std::size_t j = 0; j < g.np; ++j) {
    if (std::abs(g.p(j)) <= edge) continue;
    for (std::size_t i = 0; i < g.nx; ++i) s += std::abs(f.at(i, j));
  }
  return s * g.dp() / static_cast<double>(g.nx);
}

std::vector<double> x_marginal(const PhaseSpaceField& f) {
  const auto& g = f.grid();
  std::vector<double> rho(g.nx, 0.0);
  for (std::size_t j = 0; j < g.np; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) rho[i] += f.at(i, j);
  }
  for (double& r : rho) r *= g.dp() / g.wavelength();
  return rho;
}

PhaseSpaceField modulated_thermal_field(const PhaseSpaceGrid& grid, double mass, double beta0,
                                        double delta) {
  if (!(beta0 > 0.0)) throw std::invalid_argument("beta0 must be positive");
  PhaseSpaceField f(grid);
  const double norm_p = std::sqrt(beta0 / (2.0 * std::numbers::pi * mass));
  for (std::size_t j = 0; j < grid.np; ++j) {
    const double p = grid.p(j);
    const double gauss = norm_p * std::exp(-beta0 * p * p / (2.0 * mass));
    for (std::size_t i = 0; i < grid.nx; ++i) {
      f.at(i, j) = (1.0 + delta * std::cos(grid.x(i))) * gauss;
    }
  }
  // Renormalize against the truncated momentum range; the cosine integrates
  // to zero exactly on the periodic grid.
  f.normalize();
  return f;
}

void write_snapshot(const PhaseSpaceField& f, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "snapshot format is little-endian");
  const auto& g = f.grid();
  const nlohmann::json header = {{"nx", g.nx}, {"np", g.np}, {"p_max", g.p_max}, {"time", f.time()}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  const std::string h = header.dump() + "\n";
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
}

PhaseSpaceField read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path.string());
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  PhaseSpaceGrid g{header.at("nx").get<std::size_t>(), header.at("np").get<std::size_t>(),
                   header.at("p_max").get<double>()};
  PhaseSpaceField f(g, header.at("time").get<double>());
  in.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated snapshot: " + path.string());
  return f;
}

}  // namespace cavkin
