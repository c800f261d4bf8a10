#pragma once

#include <vector>

#include "cavkin/model.hpp"
#include "cavkin/phase_space.hpp"
#include "cavkin/spectral_shift.hpp"
#include "cavkin/time_series.hpp"
#include "cavkin/vlasov.hpp"

// Mean-field Fokker-Planck equation for f1:
//   df/dt = -(p/m) df/dx + S^2 { -d/dp [F0 (cos + (N-1) Theta) sin f]
//                               -d/dp [Gamma0 (sin p + (N-1) Xi) sin f]
//                               + D0 d2/dp2 [sin^2 f] + eta0 d2/dpdx [sin^2 f] }.
// The conservative and Xi-coupled parts go into a spectral kick; diagonal
// friction and diffusion are a flux-form central scheme with zero flux at
// +-p_max; the eta0 term is a mixed central difference.

namespace cavkin {

struct MfOptions {
  bool include_eta = false;
  /// The atom's interaction with itself: the F0 cos sin force and the
  /// Gamma0 sin^2 p friction. Off leaves only the (N-1) terms and diffusion.
  bool include_self_terms = true;
  int n_particles = 1;
};

class MeanFieldSolver {
 public:
  MeanFieldSolver(const DerivedCoefficients& c, const PhaseSpaceGrid& grid, MfOptions opts);

  /// Transport(dt/2), kick(dt), friction+diffusion(+eta)(dt), transport(dt/2).
  /// Throws NumericalError if dt exceeds max_stable_dt.
  void step(PhaseSpaceField& f, double dt);

  /// min of the Vlasov CFL bound and 0.25 dp^2 / (S^2 D0).
  double max_stable_dt(const PhaseSpaceField& f) const;

  const MfOptions& options() const { return opts_; }

 private:
  void collide(PhaseSpaceField& f, double dt);
  void eta_term(PhaseSpaceField& f, double dt);

  DerivedCoefficients c_;
  MfOptions opts_;
  SpectralShifter shifter_;
  std::vector<double> sin_x_, cos_x_, row_shift_, col_shift_, flux_, scratch_;
  double cached_dt_ = -1.0;
};

/// (1 + delta_N cos kx) Gaussian(beta0), normalized.
PhaseSpaceField perturbed_initial(const PhaseSpaceGrid& grid, double mass, double beta0, double delta_n);

/// sqrt(1 / (2N)).
double default_delta_n(int n_particles);

struct RelaxationConfig {
  DerivedCoefficients coeffs;
  MfOptions options;
  double beta0 = 2.0;
  PhaseSpaceGrid grid{64, 128, 0.0};  ///< p_max = 0: six thermal widths at min(beta0, beta)
  double dt = 0.03;
  double t_end = 1000.0;
  double sample_dt = 1.0;
  double delta_n = -1.0;              ///< negative selects default_delta_n(N)
  double convergence_tol = 1e-6;      ///< |dTheta/dt| threshold
};

struct RelaxationResult {
  TimeSeries series;  ///< t, theta, theta_sq, kinetic_temp, xi, norm
  PhaseSpaceField final_field;
  bool converged = false;
  double convergence_time = -1.0;  ///< start of the final run of samples below tol
  double plateau_time = -1.0;      ///< first sample where Theta^2 reaches half its maximum over the run
};

RelaxationResult run_relaxation(const RelaxationConfig& cfg, const FieldObserver& observer = {});

}  // namespace cavkin
