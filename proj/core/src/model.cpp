#include "cavkin/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cavkin/errors.hpp"

namespace cavkin {
namespace {

double lorentz_denominator(double delta_c) { return kKappa * kKappa + delta_c * delta_c; }

void validate(const ModelParams& params) {
  if (!(params.omega_r > 0.0) || !std::isfinite(params.omega_r)) {
    throw std::invalid_argument("omega_r must be positive");
  }
  if (params.n_particles < 1) throw std::invalid_argument("n_particles must be >= 1");
  if (!std::isfinite(params.delta_c)) throw std::invalid_argument("delta_c must be finite");
  const double pump = std::visit([](auto p) { return p.value; }, params.pump);
  if (pump < 0.0 || !std::isfinite(pump)) throw std::invalid_argument("pump must be non-negative");
}

}  // namespace

double critical_pump(double delta_c) {
  if (delta_c == 0.0) return std::numeric_limits<double>::infinity();
  return lorentz_denominator(delta_c) / (4.0 * delta_c * delta_c);
}

DerivedCoefficients derive_coefficients(const ModelParams& params) {
  validate(params);

  DerivedCoefficients c;
  const double dc = params.delta_c;
  const double wr = params.omega_r;
  const double L = lorentz_denominator(dc);
  const double hk = kHbar * kWaveNumber;

  c.delta_c = dc;
  c.omega_r = wr;
  c.n_particles = params.n_particles;
  c.mass = kHbar * kWaveNumber * kWaveNumber / (2.0 * wr);
  c.F0 = hk * 2.0 * dc / L;
  c.Gamma0 = wr * 8.0 * dc * kKappa / (L * L);
  c.D0 = hk * hk * kKappa / L;
  c.eta0 = 2.0 * kHbar * wr * (kKappa * kKappa - dc * dc) / (L * L);
  c.beta = -c.Gamma0 * c.mass / c.D0;
  c.n_crit = critical_pump(dc);

  const auto conv = pump_conversions(params, c.beta);
  c.n_bar = conv.n_bar;
  c.S2 = conv.S2;
  c.ratio = conv.ratio;

  if (std::abs(dc) < 10.0 * wr) {
    std::ostringstream os;
    os << "|delta_c| = " << std::abs(dc) << " is not large compared with omega_r = " << wr;
    c.warnings.push_back(os.str());
  }
  if (wr > 0.1 * kKappa) {
    std::ostringstream os;
    os << "omega_r = " << wr << " is not small compared with kappa";
    c.warnings.push_back(os.str());
  }
  if (dc > 0.0) c.warnings.push_back("delta_c > 0: no thermal stationary state (beta < 0)");
  return c;
}

PumpConversion pump_conversions(const ModelParams& params, double beta) {
  validate(params);
  const double L = lorentz_denominator(params.delta_c);
  const double n_crit = critical_pump(params.delta_c);
  const double N = params.n_particles;

  PumpConversion out;
  if (const auto* r = std::get_if<PumpRatio>(&params.pump)) {
    if (!std::isfinite(n_crit)) throw std::invalid_argument("pump ratio undefined for delta_c = 0");
    out.ratio = r->value;
    out.n_bar = r->value * n_crit;
    out.S2 = out.n_bar * L / N;
  } else {
    const double S = std::get<PumpAmplitude>(params.pump).value;
    out.S2 = S * S;
    out.n_bar = N * out.S2 / L;
    out.ratio = std::isfinite(n_crit) ? out.n_bar / n_crit : 0.0;
  }
  // N S_c^2 = (1/beta) (kappa^2 + delta_c^2) / (-delta_c)
  out.S2_crit = (beta != 0.0 && params.delta_c != 0.0)
                    ? L / (-params.delta_c * beta * kHbar * N)
                    : std::numeric_limits<double>::infinity();
  out.above_threshold = out.S2 > out.S2_crit;
  return out;
}

PumpConversion pump_conversions(const ModelParams& params) {
  const double dc = params.delta_c;
  const double beta = 4.0 * -dc / (kHbar * lorentz_denominator(dc));
  return pump_conversions(params, beta);
}

ModelParams with_particle_number(const ModelParams& params, int n_particles) {
  ModelParams out = params;
  out.n_particles = n_particles;
  if (const auto* a = std::get_if<PumpAmplitude>(&params.pump)) {
    // keep n_bar = N S^2 / L fixed
    const double s2 = a->value * a->value * params.n_particles / n_particles;
    out.pump = PumpAmplitude{std::sqrt(s2)};
  }
  return out;
}

ModelParams with_pump_ratio(const ModelParams& params, double ratio) {
  ModelParams out = params;
  out.pump = PumpRatio{ratio};
  return out;
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(key, "missing required key '" + where + key + "'");
  }
  return *it;
}

double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

ModelParams model_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "model block must be an object");
  static const char* known[] = {"delta_c", "omega_r", "n_particles", "pump", "beta0", "seed"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(key, "unknown key 'model." + key + "'");
  }

  ModelParams p;
  p.delta_c = number(require(j, "delta_c", "model."), "delta_c");
  p.omega_r = number(require(j, "omega_r", "model."), "omega_r");
  const auto& n = require(j, "n_particles", "model.");
  if (!n.is_number_integer()) throw ConfigError("n_particles", "key 'n_particles' must be an integer");
  p.n_particles = n.get<int>();

  const auto& pump = require(j, "pump", "model.");
  if (!pump.is_object() || pump.size() != 1) {
    throw ConfigError("pump", "key 'pump' must hold exactly one of 'ratio' or 'amplitude'");
  }
  if (pump.contains("ratio")) {
    p.pump = PumpRatio{number(pump["ratio"], "pump.ratio")};
  } else if (pump.contains("amplitude")) {
    p.pump = PumpAmplitude{number(pump["amplitude"], "pump.amplitude")};
  } else {
    throw ConfigError("pump." + pump.begin().key(), "unknown key 'pump." + pump.begin().key() + "'");
  }

  if (j.contains("beta0")) {
    p.beta0 = number(j["beta0"], "beta0");
  } else {
    p.beta0 = 4.0 * -p.delta_c / (kHbar * lorentz_denominator(p.delta_c));
  }
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError("seed", "key 'seed' must be a non-negative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }

  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", e.what());
  }
  return p;
}

nlohmann::json to_json(const ModelParams& params) {
  nlohmann::json pump;
  if (const auto* r = std::get_if<PumpRatio>(&params.pump)) {
    pump["ratio"] = r->value;
  } else {
    pump["amplitude"] = std::get<PumpAmplitude>(params.pump).value;
  }
  return {{"delta_c", params.delta_c},         {"omega_r", params.omega_r},
          {"n_particles", params.n_particles}, {"pump", pump},
          {"beta0", params.beta0},             {"seed", params.seed}};
}

}  // namespace cavkin
