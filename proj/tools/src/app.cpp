#include "app.hpp"

#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "artifacts.hpp"
#include "cavkin/errors.hpp"
#include "cavkin/parallel.hpp"
#include "run_config.hpp"
#include "scenarios.hpp"

namespace cavkin::cli {

int run_cli(int argc, char** argv) {
  CLI::App app{"cavkin: cavity self-organization kinetics"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  for (const auto& name : scenario_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "RNG seed (overrides model.seed)");
    sub->add_option("--threads", threads, std::string("worker threads; ") + kThreadsEnv + " overrides")
        ->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string scenario = app.get_subcommands().front()->get_name();

  try {
    RunConfig cfg = load_run_config(config_path, scenario);
    if (seed) cfg.model.seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (cfg.output_dir.empty()) {
      std::cerr << "error: no output directory (use --out or output_dir)\n";
      return 2;
    }
    RunDirectory dir(cfg.output_dir);
    run_scenario(cfg, dir, resolve_thread_count(threads));
    dir.finalize(cfg.to_json(), scenario);
    std::cout << dir.root().string() << "\n";
    return 0;
  } catch (const ConfigFileError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cavkin::cli
