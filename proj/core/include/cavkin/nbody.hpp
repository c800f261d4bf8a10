#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cavkin/model.hpp"
#include "cavkin/time_series.hpp"

// Stochastic trajectories equivalent in distribution to the N-particle
// Fokker-Planck equation without the eta0 cross term:
//   dx_i = p_i / m dt
//   dp_i = [S^2 F0 N Theta sin_i + S^2 Gamma0 sin_i sum_j sin_j p_j] dt
//          + sqrt(2 D0) S sin_i dW,
// with a single Wiener increment dW shared by all particles of a trajectory.

namespace cavkin {

/// Positions and momenta of N particles in T independent trajectories,
/// stored trajectory-major: x[t * N + i].
struct ParticleEnsemble {
  int n_particles = 0;
  int trajectories = 0;
  double time = 0.0;
  std::uint64_t step = 0;  ///< integration steps taken, used as RNG counter on restart
  std::vector<double> x;
  std::vector<double> p;

  std::span<const double> x_of(int traj) const;
  std::span<const double> p_of(int traj) const;
};

struct DriftDiffusion {
  std::vector<double> dx;     ///< p_i / m
  std::vector<double> dp;     ///< deterministic momentum drift
  std::vector<double> sigma;  ///< noise amplitude multiplying the shared dW
};

/// Drift and noise amplitudes of one trajectory.
DriftDiffusion drift_diffusion_map(std::span<const double> x, std::span<const double> p,
                                   const DerivedCoefficients& c);

enum class Integrator {
  /// x half drift, momentum half kick, exact Ornstein-Uhlenbeck update of
  /// the friction/noise direction, half kick, x half drift.
  Splitting,
  EulerMaruyama,
  Heun,
};

Integrator integrator_from_string(const std::string& name);
std::string to_string(Integrator integrator);

struct NBodyConfig {
  DerivedCoefficients coeffs;
  double beta0 = 2.0;
  int trajectories = 100;
  double dt = 0.05;
  double t_end = 100.0;
  double sample_dt = 1.0;
  Integrator integrator = Integrator::Splitting;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Keep Theta(t) of every trajectory (needed for spectra).
  bool keep_theta_traces = false;
};

struct NBodyResult {
  /// t, theta_sq_mean, theta_sq_stderr, theta4_mean, g2, abs_theta_mean,
  /// kinetic_temp, kinetic_temp_stderr, xi_mean, c2, c2_aligned
  TimeSeries series;
  /// traces[traj][sample] when keep_theta_traces is set
  std::vector<std::vector<double>> theta_traces;
  ParticleEnsemble final_state;
};

/// x uniform on [0, lambda), p Gaussian with variance m / beta0.
ParticleEnsemble initial_ensemble(int n_particles, int trajectories, double mass, double beta0,
                                  std::uint64_t seed);

/// Independent particles drawn from the mean-field stationary state at pump
/// ratio r: x from the von Mises weight exp(2 r Theta_bar cos kx) (rejection
/// sampling), p Gaussian with variance m / beta. Each trajectory has its own
/// Philox streams, so the draw does not depend on T.
ParticleEnsemble stationary_ensemble(int n_particles, int trajectories, double r, double mass, double beta,
                                     std::uint64_t seed);

/// Integrates from `start` (or a fresh initial ensemble when empty). Output is
/// identical for any thread count. Throws NumericalError naming the
/// trajectory and step on non-finite values.
NBodyResult simulate(const NBodyConfig& cfg, const ParticleEnsemble* start = nullptr);

struct PairCorrelation {
  double c2 = 0.0;          ///< mean pair term minus (mean single-particle <cos>)^2
  double c2_aligned = 0.0;  ///< same with cos multiplied by sign(Theta) per trajectory
};

/// Requires N >= 2.
PairCorrelation pair_correlation(const ParticleEnsemble& ensemble);

/// Binary dump: JSON header {"n_particles","trajectories","time","step"} and
/// '\n', then x then p as little-endian doubles.
void write_ensemble(const ParticleEnsemble& e, const std::filesystem::path& path);
ParticleEnsemble read_ensemble(const std::filesystem::path& path);

}  // namespace cavkin
