#include "stap/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Sparse beam-Doppler selection STAP: scenarios, sweeps and weight maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(stap::tool_version()));

  stap::CommandOptions options;
  std::uint64_t seed = 0;
  int trials = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "Configuration file")->required();
    cmd->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed, overrides [run] seed");
    cmd->add_option("--trials", trials, "Monte Carlo trials, overrides [run] trials");
  };

  auto* report = app.add_subcommand("scenario-report", "Scenario summary and covariance eigenvalues");
  add_common(report);

  auto* sweep = app.add_subcommand("sweep", "SCNR loss against training size or target Doppler");
  add_common(sweep);
  std::string kind;
  sweep->add_option("--kind", kind, "Sweep variable")->required()->check(CLI::IsMember({"snapshots", "doppler"}));

  auto* weights = app.add_subcommand("weight-map", "Beam-Doppler map of one sparse filter design");
  add_common(weights);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? stap::kExitOk : stap::kExitConfig;
  }

  for (auto* cmd : {report, sweep, weights}) {
    if (cmd->parsed()) {
      if (cmd->count("--seed")) options.seed = seed;
      if (cmd->count("--trials")) options.trials = trials;
    }
  }

  if (report->parsed()) return stap::cmd_scenario_report(options, std::cout, std::cerr);
  if (sweep->parsed()) {
    const auto sweep_kind = kind == "snapshots" ? stap::SweepKind::Snapshots : stap::SweepKind::Doppler;
    return stap::cmd_sweep(options, sweep_kind, std::cout, std::cerr);
  }
  return stap::cmd_weight_map(options, std::cout, std::cerr);
}
