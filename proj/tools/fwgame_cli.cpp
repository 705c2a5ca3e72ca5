#include "fwgame/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

int run_one(const fwgame::ExperimentConfig& cfg) {
  const fwgame::PresetResult res = fwgame::run_preset(cfg);
  std::cout << res.report();
  if (!cfg.output_path.empty()) fwgame::write_preset_csv(cfg.output_path, res);
  return res.passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted no-regret game dynamics and Frank-Wolfe rate experiments"};
  app.require_subcommand(1);

  std::string preset;
  std::string T_text;
  std::uint64_t seed = 0;
  double eta_mult = 1.0;
  std::string out;
  int dims = 0;
  std::string config_path;

  auto* run = app.add_subcommand("run", "Run one experiment preset");
  run->add_option("--preset", preset, "Preset name (see list-presets)");
  run->add_option("--T", T_text, "Comma-separated horizons, e.g. 64,128,256");
  run->add_option("--seed", seed, "Instance seed");
  run->add_option("--eta-mult", eta_mult, "Multiplier on the default step parameter");
  run->add_option("--out", out, "Directory for CSV output");
  run->add_option("--dims", dims, "Problem dimension where the preset allows it");
  run->add_option("--config", config_path, "key = value config file; flags take precedence");

  auto* list = app.add_subcommand("list-presets", "Print the available presets");

  bool all = false;
  auto* verify = app.add_subcommand("verify", "Run the pass/fail suite of presets");
  verify->add_flag("--all", all, "Run every preset");
  verify->add_option("--seed", seed, "Instance seed");
  verify->add_option("--out", out, "Directory for CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*list) {
      for (const auto& name : fwgame::preset_names()) std::cout << name << '\n';
      return kExitPass;
    }

    if (*run) {
      fwgame::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = fwgame::load_config_file(config_path);
      if (run->count("--preset")) cfg.preset = preset;
      if (run->count("--T")) cfg.T_list = fwgame::parse_T_list(T_text);
      if (run->count("--seed")) cfg.seed = seed;
      if (run->count("--eta-mult")) cfg.eta_multiplier = eta_mult;
      if (run->count("--out")) cfg.output_path = out;
      if (run->count("--dims")) cfg.dims = dims;
      return run_one(cfg);
    }

    if (!all) {
      std::cerr << "verify: pass --all\n";
      return kExitError;
    }
    int status = kExitPass;
    for (const auto& name : fwgame::preset_names()) {
      fwgame::ExperimentConfig cfg;
      cfg.preset = name;
      cfg.seed = seed;
      cfg.output_path = out;
      if (run_one(cfg) != kExitPass) status = kExitFail;
    }
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
