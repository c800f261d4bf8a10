#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Physical parameters and the derived Fokker-Planck coefficients.
//
// Natural units throughout: hbar = k = kappa = 1. Momenta are in units of
// hbar*k, times in 1/kappa, energies and temperatures in hbar*kappa. The
// particle mass follows from the recoil frequency, m = 1/(2 omega_r).

namespace cavkin {

inline constexpr double kKappa = 1.0;
inline constexpr double kHbar = 1.0;
inline constexpr double kWaveNumber = 1.0;

/// Pump given as n_bar / n_bar_c.
struct PumpRatio {
  double value = 0.0;
};

/// Pump given as the raw scattering amplitude S (units of kappa).
struct PumpAmplitude {
  double value = 0.0;
};

using Pump = std::variant<PumpRatio, PumpAmplitude>;

struct ModelParams {
  double delta_c = -1.0;  ///< cavity detuning, typically negative
  double omega_r = 0.05;  ///< recoil frequency
  int n_particles = 1;
  Pump pump = PumpRatio{0.0};
  double beta0 = 2.0;     ///< initial inverse temperature
  std::uint64_t seed = 0;
};

struct DerivedCoefficients {
  double mass = 0.0;
  double F0 = 0.0;      ///< force scale
  double Gamma0 = 0.0;  ///< friction scale
  double D0 = 0.0;      ///< diffusion scale
  double eta0 = 0.0;    ///< cross-derivative scale
  double beta = 0.0;    ///< stationary inverse temperature, -Gamma0 m / D0
  double n_bar = 0.0;   ///< scaled pump N S^2 / (kappa^2 + delta_c^2)
  double n_crit = 0.0;  ///< critical pump (kappa^2 + delta_c^2) / (4 delta_c^2)
  double S2 = 0.0;      ///< S^2 consistent with n_bar and N
  double ratio = 0.0;   ///< n_bar / n_crit
  int n_particles = 1;
  double delta_c = 0.0;
  double omega_r = 0.0;
  std::vector<std::string> warnings;
};

struct PumpConversion {
  double ratio = 0.0;   ///< n_bar / n_crit
  double n_bar = 0.0;
  double S2 = 0.0;
  double S2_crit = 0.0; ///< threshold amplitude squared for the supplied beta
  bool above_threshold = false;
};

/// Throws std::invalid_argument for omega_r <= 0, N < 1 or a negative pump.
/// Regime violations (|delta_c| not well above omega_r) only add a warning.
DerivedCoefficients derive_coefficients(const ModelParams& params);

/// Converts between the ratio and amplitude pump representations. The
/// threshold amplitude uses `beta`; pass the stationary beta to recover n_crit.
PumpConversion pump_conversions(const ModelParams& params, double beta);
PumpConversion pump_conversions(const ModelParams& params);

/// Critical pump depends only on delta_c (and kappa).
double critical_pump(double delta_c);

/// Same physical n_bar at a different particle number (Kac scaling of S^2).
ModelParams with_particle_number(const ModelParams& params, int n_particles);

ModelParams with_pump_ratio(const ModelParams& params, double ratio);

/// Parses {delta_c, omega_r, n_particles, pump: {ratio|amplitude}, beta0, seed}.
/// Unknown or missing keys throw cavkin::ConfigError whose key() is the dotted
/// path inside the block (e.g. "pump.ratio"); empty for block-level errors.
ModelParams model_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelParams& params);

}  // namespace cavkin
