#include "run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cavkin/errors.hpp"
#include "json_lines.hpp"

namespace cavkin::cli {
namespace {

using nlohmann::json;

json vlasov_grid() { return {{"nx", 64}, {"np", 256}, {"p_max", 0.0}}; }

const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> d = {
      {"steady", {{"r_min", 0.0}, {"r_max", 3.0}, {"r_step", 0.05}}},
      {"vlasov",
       {{"grid", vlasov_grid()}, {"dt", 0.02}, {"t_end", 100.0}, {"sample_dt", 0.5}, {"delta", 1e-4},
        {"snapshot_dt", 0.0}}},
      {"meanfield",
       {{"grid", {{"nx", 64}, {"np", 128}, {"p_max", 0.0}}},
        {"dt", 0.03},
        {"t_end", 1000.0},
        {"sample_dt", 1.0},
        {"delta_n", -1.0},
        {"include_eta", false},
        {"include_self_terms", true},
        {"convergence_tol", 1e-6},
        {"snapshot_dt", 0.0}}},
      {"nbody",
       {{"trajectories", 100},
        {"dt", 0.05},
        {"t_end", 100.0},
        {"sample_dt", 1.0},
        {"integrator", "splitting"},
        {"initial", "thermal"},
        {"restart", ""},
        {"keep_theta_traces", false},
        {"snapshot", true}}},
      {"stability", {{"r_min", 0.5}, {"r_max", 3.0}, {"r_step", 0.05}}},
      {"oracle",
       {{"alphas", {0.25, 0.5, 0.8, 1.0, 1.25, 1.5, 2.0, 3.0}}, {"n_values", {20, 50, 200, 1000}}}},
      {"observables",
       {{"alphas", {0.25, 0.5, 0.8, 1.0, 1.25, 1.5, 2.0, 3.0}}, {"n_values", {20, 50, 200, 1000}}}},
      {"fig2",
       {{"r_values", {0.5, 1.0, 1.5, 2.0}},
        {"zeta_max", 1.5},
        {"zeta_points", 151},
        {"inset_r_max", 3.0},
        {"inset_r_step", 0.01}}},
      {"fig3",
       {{"r_values", {1.5, 2.0, 2.5, 3.0}},
        {"grid", vlasov_grid()},
        {"dt", 0.02},
        {"t_end", 150.0},
        {"sample_dt", 0.5},
        {"delta", 1e-4}}},
      {"fig4",
       {{"r_min", 0.5},
        {"r_max", 3.0},
        {"r_step", 0.05},
        {"fit_r_values", {1.5, 2.0, 2.5, 3.0}},
        {"grid", vlasov_grid()},
        {"dt", 0.02},
        {"t_end", 250.0},
        {"sample_dt", 0.5},
        {"delta", 1e-6},
        {"fit_lo_factor", 20.0},
        {"fit_hi", 1e-2}}},
      {"fig5",
       {{"r_values", {1.25, 1.5, 2.0, 2.5, 3.0}},
        {"trajectories", 100},
        {"dt", 0.05},
        {"burn_in", 2000.0},
        {"t_record", 10000.0},
        {"sample_dt", 0.5},
        {"max_lag", 1024},
        {"omega_min", 0.05}}},
      {"fig7",
       {{"n_values", {20, 50, 200}},
        {"trajectories", {1000, 500, 100}},
        {"t_end_over_n", 400.0},
        {"sample_dt_over_n", 0.05},
        {"grid", {{"nx", 64}, {"np", 128}, {"p_max", 0.0}}},
        {"mf_dt", 0.025},
        {"nbody_dt", 0.05},
        {"integrator", "splitting"},
        {"prethermal_time", 100.0}}},
      {"fig8", {{"n_values", {50, 200}}, {"r_min", 0.1}, {"r_max", 2.0}, {"r_step", 0.02}}},
  };
  return d;
}

class Validator {
 public:
  Validator(const JsonLineIndex& lines, std::string source) : lines_(lines), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    const int line = lines_.line_of(path);
    throw ConfigFileError(path, line, source_ + ":" + std::to_string(line) + ": " + message);
  }

  // Checks `value` against the type of `schema` and returns schema with the
  // supplied entries merged in.
  json merge(const json& schema, const json& value, const std::string& path) const {
    if (schema.is_object()) {
      if (!value.is_object()) fail(path, "key '" + path + "' must be an object");
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!schema.contains(it.key())) fail(path + "." + it.key(), "unknown key '" + path + "." + it.key() + "'");
      }
      json out = schema;
      for (auto it = value.begin(); it != value.end(); ++it) {
        out[it.key()] = merge(schema[it.key()], it.value(), path + "." + it.key());
      }
      return out;
    }
    if (schema.is_array()) {
      if (!value.is_array() || value.empty()) fail(path, "key '" + path + "' must be a non-empty array");
      json out = json::array();
      for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(merge(schema.front(), value[i], path + "[" + std::to_string(i) + "]"));
      }
      return out;
    }
    if (schema.is_boolean()) {
      if (!value.is_boolean()) fail(path, "key '" + path + "' must be true or false");
    } else if (schema.is_string()) {
      if (!value.is_string()) fail(path, "key '" + path + "' must be a string");
    } else if (schema.is_number_integer()) {
      if (!value.is_number_integer()) fail(path, "key '" + path + "' must be an integer");
    } else if (schema.is_number()) {
      if (!value.is_number()) fail(path, "key '" + path + "' must be a number");
      return value.get<double>();
    }
    return value;
  }

 private:
  const JsonLineIndex& lines_;
  std::string source_;
};

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"steady", "vlasov", "meanfield", "nbody", "stability", "oracle",
                                                 "observables", "fig2", "fig3", "fig4", "fig5", "fig7", "fig8"};
  return names;
}

json default_block(const std::string& scenario) {
  const auto it = defaults().find(scenario);
  if (it == defaults().end()) throw std::invalid_argument("unknown scenario '" + scenario + "'");
  return it->second;
}

json RunConfig::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["model"] = cavkin::to_json(model);
  j[scenario] = block;
  return j;
}

RunConfig parse_run_config(const std::string& text, const std::string& scenario, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    int line = 1;
    for (std::size_t i = 0; i + 1 < upto; ++i) line += text[i] == '\n';
    throw ConfigFileError("", line, source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  const JsonLineIndex lines(text);
  const Validator v(lines, source);
  if (!j.is_object()) v.fail("", "top level must be an object");

  const json schema = default_block(scenario);
  const std::set<std::string> allowed = {"scenario", "model", "output_dir", scenario};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) v.fail(it.key(), "unknown key '" + it.key() + "'");
  }

  RunConfig cfg;
  cfg.scenario = scenario;
  if (j.contains("scenario")) {
    if (!j["scenario"].is_string()) v.fail("scenario", "key 'scenario' must be a string");
    if (j["scenario"].get<std::string>() != scenario) {
      v.fail("scenario", "key 'scenario' is '" + j["scenario"].get<std::string>() + "' but the subcommand is '" +
                             scenario + "'");
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) v.fail("output_dir", "key 'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (!j.contains("model")) v.fail("", "missing required key 'model'");
  try {
    cfg.model = model_params_from_json(j["model"]);
  } catch (const ConfigError& e) {
    v.fail(e.key().empty() ? "model" : "model." + e.key(), e.what());
  }
  cfg.block = j.contains(scenario) ? v.merge(schema, j[scenario], scenario) : schema;
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::string& scenario) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError("", 0, path.string() + ": cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), scenario, path.string());
}

}  // namespace cavkin::cli
