#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

// Single-particle distribution f1(x, p) on a grid that is periodic in x over
// one wavelength and truncated to [-p_max, p_max] in p. Both axes are
// cell-centred in p and node-based in x (x_i = i dx), which makes grid sums
// spectrally accurate quadratures for smooth periodic integrands.
//
// Storage is row-major with one row per momentum cell: values[j * nx + i]
// holds f(x_i, p_j).

namespace cavkin {

struct PhaseSpaceGrid {
  std::size_t nx = 256;
  std::size_t np = 512;
  double p_max = 1.0;

  double wavelength() const;
  double dx() const;
  double dp() const;
  double x(std::size_t i) const;
  double p(std::size_t j) const;
  std::size_t size() const { return nx * np; }

  /// Default resolution with p_max = 6 thermal widths sqrt(m / beta).
  static PhaseSpaceGrid thermal(double mass, double beta, std::size_t nx = 256, std::size_t np = 512,
                                double widths = 6.0);
};

class PhaseSpaceField {
 public:
  PhaseSpaceField() = default;
  explicit PhaseSpaceField(PhaseSpaceGrid grid, double time = 0.0);

  const PhaseSpaceGrid& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& at(std::size_t ix, std::size_t jp) { return values_[jp * grid_.nx + ix]; }
  double at(std::size_t ix, std::size_t jp) const { return values_[jp * grid_.nx + ix]; }

  /// Integral of f over x in [0, lambda) and p, weighted by 1/lambda so that a
  /// normalized density integrates to one.
  double norm() const;
  void normalize();

  double min_value() const;

 private:
  PhaseSpaceGrid grid_{};
  double time_ = 0.0;
  std::vector<double> values_;
};

/// Theta_MF = <cos kx>, Xi_MF = <p sin kx>.
struct Functionals {
  double theta = 0.0;
  double xi = 0.0;
};

Functionals functionals(const PhaseSpaceField& f);

struct Moments {
  double norm = 0.0;
  double theta = 0.0;
  double xi = 0.0;
  double p2 = 0.0;       ///< <p^2>
  double bunching = 0.0; ///< <cos^2 kx>
  double sin2 = 0.0;     ///< <sin^2 kx>
};

Moments moments(const PhaseSpaceField& f);

/// Mass in the outermost momentum cells, |p| > p_max - 3 dp.
double truncation_mass(const PhaseSpaceField& f);

/// Spatial density (1/lambda) * integral f dp at each x node; integrates to
/// one over a wavelength and equals 1/lambda for a uniform distribution.
std::vector<double> x_marginal(const PhaseSpaceField& f);

/// Spatially uniform Gaussian (1 + delta cos kx) exp(-beta0 p^2 / 2m).
PhaseSpaceField modulated_thermal_field(const PhaseSpaceGrid& grid, double mass, double beta0,
                                        double delta);

/// Binary dump: a JSON header line {"nx","np","p_max","time"} terminated by
/// '\n', followed by nx*np little-endian doubles in storage order.
void write_snapshot(const PhaseSpaceField& f, const std::filesystem::path& path);
PhaseSpaceField read_snapshot(const std::filesystem::path& path);

}  // namespace cavkin
