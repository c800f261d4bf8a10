#pragma once

#include <functional>
#include <string>

#include "cavkin/model.hpp"

// Linear stability of a spatially uniform state with momentum profile f0(p)
// under the Vlasov dynamics. Perturbations grow as exp(gamma t) where gamma
// is a real root of the dispersion relation.

namespace cavkin {

struct DispersionParams {
  double n_bar = 1.0;
  double beta0 = 2.0;    ///< inverse temperature of the initial Gaussian
  double beta = 2.0;     ///< stationary inverse temperature (Xi coupling)
  double delta_c = -1.0;
  double mass = 10.0;

  static DispersionParams from(const DerivedCoefficients& c, double beta0);
};

/// 1 + (delta_c + kappa beta gamma / 2) n_bar beta0 (1 - sqrt(pi) b erfcx(b)),
/// b = sqrt(beta0 / 2m) m gamma / k. Valid for either sign of gamma.
double dispersion_residual(double gamma, const DispersionParams& p);

enum class Regime { Stable, Critical, Unstable };
std::string to_string(Regime r);

struct StabilityResult {
  double gamma = 0.0;
  double lo = 0.0, hi = 0.0;  ///< final bracket
  double residual_at_root = 0.0;
  Regime regime = Regime::Stable;
  bool bracketed = true;  ///< false: no sign change up to the search bound
};

/// Real root of dispersion_residual. The sign of the residual at gamma = 0
/// selects the half-line; the bracket starts at 5 kappa and grows
/// geometrically up to 1e3 kappa.
StabilityResult growth_rate(const DispersionParams& p);

/// chi = |delta_c| n_bar beta0.
double chi_parameter(const DispersionParams& p);

/// gamma = w0 (1 - p chi) [ln(chi / 1.135) - ln(1 - p chi)]
///         / [1.4 (1 - p chi) + kappa beta w0 / (2 |delta_c|)],
/// p = 27/227, w0 = sqrt(2 omega_r / beta0). Throws for chi >= 1/p or chi <= 0.
double growth_rate_approx(double chi, double beta0, double beta, double delta_c, double omega_r);

/// Dispersion residual for an arbitrary momentum profile given through its
/// derivative f0'(p) (f0 normalized to one), evaluated on the positive real
/// gamma axis where the integrand is regular:
///   1 - (delta_c + kappa gamma beta / 2) n_bar
///       * integral (k^2 p / m) / ((p k / m)^2 + gamma^2) f0'(p) dp.
/// Throws for gamma <= 0.
double general_dispersion_residual(double gamma, const DispersionParams& p,
                                   const std::function<double(double)>& df0dp);

/// Positive root of general_dispersion_residual; regime Stable with
/// bracketed = false when the residual does not change sign on (0, 1e3].
StabilityResult growth_rate_general(const DispersionParams& p, const std::function<double(double)>& df0dp);

}  // namespace cavkin
