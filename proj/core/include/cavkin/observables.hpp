#pragma once

#include <span>
#include <string>
#include <vector>

// Order parameter, photon statistics and spectral observables.
//
// The N-particle stationary weight exp(alpha N Theta^2), alpha = n_bar/n_crit,
// is reduced to one dimension by a Gaussian transform:
//   G(alpha) = ln integral dy exp[-N (alpha y^2 - ln I0(2 alpha y))],
//   N <Theta^2> = 1/(2 alpha) + dG/dalpha,
//   N^2 (<Theta^4> - <Theta^2>^2) = N d<Theta^2>/dalpha.

namespace cavkin {

/// (1/N) sum cos(k x_j).
double theta_of(std::span<const double> positions);

struct OracleResult {
  double G = 0.0;          ///< ln of the y-integral
  double dG = 0.0;         ///< dG/dalpha
  double d2G = 0.0;        ///< d2G/dalpha2
  double ncav_over_nbar = 0.0;  ///< 1/(2 alpha) + dG/dalpha = N <Theta^2>
  double theta2 = 0.0;     ///< <Theta^2>_N
  double theta4 = 0.0;     ///< <Theta^4>_N
  double g2 = 0.0;         ///< <Theta^4> / <Theta^2>^2
  double error_estimate = 0.0;  ///< largest relative quadrature error of the three integrals
};

/// Requires alpha >= 0 and N >= 2. alpha = 0 returns the uniform-gas values.
/// Throws NumericalError if the quadrature misses its tolerance badly.
OracleResult g_alpha_oracle(double alpha, int n_particles);

enum class PhotonRegime { Below, At, Above };
enum class PhotonMethod { Quadrature, ClosedForm, Ensemble, Factorized };
std::string to_string(PhotonRegime r);
std::string to_string(PhotonMethod m);

struct PhotonStats {
  double n_cav = 0.0;
  double g2_zero = 0.0;
  PhotonRegime regime = PhotonRegime::Below;
  PhotonMethod method = PhotonMethod::ClosedForm;
  std::string note;
};

/// Closed forms selected by alpha = n_bar/n_crit:
///   below:  n_cav = (n_crit^2 / 2) / (n_crit - n_bar), g2 = 3
///   at:     n_cav = 2 sqrt(N) n_crit Gamma(3/4)/Gamma(1/4), g2 = (1/4)(Gamma(1/4)/Gamma(3/4))^2
///   above:  n_cav = 2 N (n_bar - n_crit), g2 = 1
/// |alpha - 1| <= 1e-3 is routed to the threshold branch with a note.
PhotonStats ncav_closed_forms(double alpha, int n_particles, double n_crit);

/// n_cav = N n_bar <Theta^2> from the quadrature oracle.
PhotonStats ncav_oracle(double alpha, int n_particles, double n_crit);

/// Leading-order below-threshold value before the final approximation:
/// n_bar n_crit / (2 (n_crit - n_bar)).
double ncav_below_leading(double alpha, double n_crit);

/// g2 from the factorized (mean-field) moments of N independent particles in
/// the stationary state at pump ratio r. Requires N >= 4.
double g2_factorized(double r, int n_particles);

/// (1/4) (Gamma(1/4) / Gamma(3/4))^2.
double g2_threshold_constant();

struct SpectrumOptions {
  double dt = 1.0;            ///< sample spacing
  std::size_t max_lag = 64;   ///< autocorrelation lags 0..max_lag (samples)
  std::size_t segment = 0;    ///< Welch segment length; 0 selects 2 * max_lag
  double omega_min = 0.0;     ///< peak search ignores lower frequencies
  bool subtract_mean = true;  ///< remove each segment's mean before windowing
};

struct SpectrumResult {
  std::vector<double> tau;
  std::vector<double> c_tau;
  std::vector<double> omega;
  std::vector<double> s_omega;
  double peak_omega = 0.0;
};

/// Unbiased autocorrelation <Theta(t) Theta(t + tau)> per trajectory,
/// averaged over trajectories, and a Welch spectrum (Hann window, 50%
/// overlap) with the peak located by parabolic interpolation. Each trace
/// must hold at least 4 * max_lag samples.
SpectrumResult autocorrelation(const std::vector<std::vector<double>>& traces, const SpectrumOptions& opts);

struct PendulumPeak {
  double omega0 = 0.0;      ///< small-amplitude frequency sqrt(-4 omega_r delta_c n_bar Theta_bar)
  double mean_omega = 0.0;  ///< libration/rotation frequency averaged over f_st
  double rotating_fraction = 0.0;
};

/// Requires r > 1. beta is the inverse temperature of the averaging weight.
PendulumPeak pendulum_peak(double r, double beta, double omega_r, double delta_c);

}  // namespace cavkin
