#pragma once

#include <array>
#include <vector>

#include "cavkin/model.hpp"
#include "cavkin/phase_space.hpp"

// Stationary layer of the mean-field equation in the thermodynamic limit.
// With r = n_bar / n_crit the stationary x-marginal is proportional to
// exp(2 r Theta cos kx) and the order parameter solves Theta = q(2 r Theta),
// q = I1 / I0.

namespace cavkin {

struct FixedPointResult {
  double theta_bar = 0.0;        ///< stable non-negative root
  int branch_count = 1;          ///< 1 below threshold, 3 above
  std::vector<double> roots;     ///< ascending
  std::vector<bool> stable;      ///< 2 r q'(2 r Theta) < 1 at each root
  double residual = 0.0;         ///< |theta_bar - q(2 r theta_bar)|
};

/// q(z) = I1(z) / I0(z).
double q_function(double z);

/// Requires r >= 0 (throws std::invalid_argument otherwise).
FixedPointResult solve_fixed_point(double r);

/// sqrt(2 (r - 1)); r < 1 throws.
double asymptotic_theta(double r);

/// Normalized f_st on `grid` with x-weight exp(2 r Theta_bar cos kx) and
/// momentum weight exp(-beta p^2 / 2m). Throws if the momentum window holds
/// less than 1 - 1e-8 of the Gaussian mass.
PhaseSpaceField stationary_field(double r, double beta, double mass, const PhaseSpaceGrid& grid);

struct BunchingResult {
  double closed_form = 0.5;  ///< 1/2 below threshold, 1 - 1/(2r) above
  double quadrature = 0.5;   ///< <cos^2 kx> under the stationary x-marginal
};

BunchingResult bunching(double r);

struct CosMoments {
  std::array<double, 4> bessel{};      ///< <cos^n>, n = 1..4, from Bessel ratios
  std::array<double, 4> quadrature{};  ///< same by adaptive quadrature
};

CosMoments cos_moments(double r);

/// Moments of cos under the von Mises weight exp(z cos x), n = 1..4, from
/// Bessel-function ratios.
std::array<double, 4> von_mises_cos_moments(double z);

/// Finite-N exponent a(x) of the mean-field stationary state,
///   (Y/2 - 1) ln(1 + Z sin^2) - (N-1) Y Theta sqrt(w) artanh(sqrt(w) cos),
/// w = Z / (1 + Z). For w < 0 the analytic continuation
/// -sqrt(-w) arctan(sqrt(-w) cos) replaces sqrt(w) artanh(sqrt(w) cos).
/// Requires Z > -1.
double finite_n_exponent(double x, double Y, double Z, double theta, int n_particles);

/// Same with Y = F0/eta0 and Z = beta eta0 S^2 taken from the coefficients.
/// When eta0 vanishes (|delta_c| = kappa) the eta0 -> 0 limit
///   (beta F0 S^2 / 2) sin^2 - (N-1) beta F0 S^2 Theta cos
/// is returned instead.
double finite_n_exponent(double x, const DerivedCoefficients& c, double theta);

/// Theta of the finite-N mean-field stationary state, the self-consistent
/// solution of Theta = <cos kx> under exp(a(x)). Tends to Theta_bar(r) as N grows.
double finite_n_fixed_point(const DerivedCoefficients& c);

}  // namespace cavkin
