#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "excitability/experiment.hpp"

namespace ex = excitability;

int main(int argc, char** argv) {
  CLI::App app{"Required-supply landscapes and energy thresholds of excitable circuits"};
  app.set_version_flag("--version", std::string(ex::kToolVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config and/or a built-in preset");
  std::string config_path, preset_name, out_dir;
  std::optional<std::size_t> workers;
  bool dump = false, print_config = false;
  run->add_option("--config", config_path, "experiment config (JSON); overrides preset fields");
  run->add_option("--preset", preset_name, "start from a built-in preset");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--workers", workers, "worker threads (0 = all cores)");
  run->add_flag("--dump-trajectories", dump, "write per-node clamp trajectories");
  run->add_flag("--print-config", print_config, "print the effective config and exit");

  auto* presets = app.add_subcommand("presets", "list built-in presets");
  bool show = false;
  presets->add_flag("--show", show, "print each preset as JSON");

  CLI11_PARSE(app, argc, argv);

  if (*presets) {
    for (const auto& name : ex::list_presets()) {
      if (show) std::cout << name << ":\n" << ex::to_json(ex::preset(name)).dump(2) << '\n';
      else std::cout << name << '\n';
    }
    return ex::kExitOk;
  }

  ex::ExperimentConfig config;
  try {
    if (config_path.empty() && preset_name.empty()) throw ex::config_error("run needs --config and/or --preset");
    nlohmann::json j = preset_name.empty() ? nlohmann::json::object() : ex::to_json(ex::preset(preset_name));
    if (!config_path.empty()) {
      if (j.empty()) j = ex::read_json_file(config_path);
      else j.merge_patch(ex::read_json_file(config_path));
    }
    if (!out_dir.empty()) j["output_dir"] = out_dir;
    if (workers) j["workers"] = *workers;
    if (dump) j["dump_trajectories"] = true;
    config = ex::parse_config(j);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return ex::kExitValidation;
  }
  if (print_config) {
    std::cout << ex::to_json(config).dump(2) << '\n';
    return ex::kExitOk;
  }
  return ex::run_experiment(config, std::cout, std::cerr);
}
