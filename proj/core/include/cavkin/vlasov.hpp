#pragma once

#include <functional>
#include <optional>

#include "cavkin/model.hpp"
#include "cavkin/phase_space.hpp"
#include "cavkin/spectral_shift.hpp"
#include "cavkin/time_series.hpp"

// Collisionless transport of f1 in the self-consistent potential
//   V0 = A cos kx,  A = 2 delta_c n_bar Theta - (k/m) n_bar beta kappa Xi,
// so the force on a particle is A k sin kx.

namespace cavkin {

struct VlasovParams {
  double mass = 10.0;
  double delta_c = -1.0;
  double n_bar = 0.0;
  double beta = 2.0;  ///< stationary inverse temperature, enters the Xi term

  static VlasovParams from(const DerivedCoefficients& c);

  /// Coefficients of A = theta_coeff * Theta + xi_coeff * Xi.
  double theta_coeff() const;
  double xi_coeff() const;
};

/// Amplitude A of V0 = A cos kx.
double potential_amplitude(const VlasovParams& p, double theta, double xi);

/// Single-particle energy <p^2>/2m + delta_c n_bar Theta^2.
double energy(const PhaseSpaceField& f, const VlasovParams& p);

/// Largest dt allowed by 0.5 min(dx m / p_max, dp / max|force|) for a
/// force amplitude `force_max`.
double cfl_limit(const PhaseSpaceGrid& g, double mass, double force_max);

class VlasovSolver {
 public:
  VlasovSolver(const VlasovParams& params, const PhaseSpaceGrid& grid);

  /// One Strang step: half x-advection, momentum kick with the functionals
  /// taken at the half step, half x-advection. Throws NumericalError if dt
  /// breaks the CFL bound or the field turns non-finite.
  void step(PhaseSpaceField& f, double dt);

  double max_stable_dt(const PhaseSpaceField& f) const;
  const VlasovParams& params() const { return params_; }

 private:
  VlasovParams params_;
  SpectralShifter shifter_;
  std::vector<double> row_shift_;
  std::vector<double> col_shift_;
  std::vector<double> sin_x_;
  double cached_dt_ = -1.0;
};

struct QuenchConfig {
  VlasovParams params;
  double beta0 = 2.0;
  PhaseSpaceGrid grid{64, 256, 0.0};  ///< p_max = 0 means 6 thermal widths at beta0
  double dt = 0.02;
  double t_end = 100.0;
  double sample_dt = 0.5;
  double delta = 1e-4;  ///< initial modulation (1 + delta cos kx)
};

struct QuenchResult {
  TimeSeries series;  ///< t, theta, xi, xi2, energy, p2, norm
  PhaseSpaceField final_field;
};

/// Callback invoked at every sample with the current field.
using FieldObserver = std::function<void(const PhaseSpaceField&)>;

QuenchResult run_quench(const QuenchConfig& cfg, const FieldObserver& observer = {});

/// Resolves p_max = 0 to six thermal widths at inverse temperature beta.
PhaseSpaceGrid resolve_grid(PhaseSpaceGrid grid, double mass, double beta);

}  // namespace cavkin
