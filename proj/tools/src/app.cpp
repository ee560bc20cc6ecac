#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "rdo/errors.hpp"
#include "rdo_cli/commands.hpp"

namespace rdo::cli {

namespace {

using Command = nlohmann::json (*)(const RunConfig&);

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust design optimization: NSGA-II with a GP surrogate, reduced-order models, TEAM field "
               "evaluation and robustness ranking."};
  app.name("rdo");
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 0;
  std::string surrogate;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_seed = app.add_option("--seed", seed, "master seed (overrides the config)");
  auto* o_out = app.add_option("--out", out_dir, "output directory (overrides the config)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads, >= 1 (overrides the config)")
                        ->check(CLI::PositiveNumber);
  auto* o_surrogate = app.add_option("--surrogate", surrogate, "surrogate gate on|off (overrides the config)")
                          ->check(CLI::IsMember({"on", "off"}));

  Command command = nullptr;
  auto* optimize = app.add_subcommand("optimize", "run an optimizer and write the Pareto front");
  optimize->callback([&] { command = &cmd_optimize; });
  auto* rom = app.add_subcommand("rom", "reduced-order modelling");
  rom->require_subcommand(1);
  rom->add_subcommand("identify", "fit a Schwartz lattice model to a reference response")
      ->callback([&] { command = &cmd_rom_identify; });
  rom->add_subcommand("pod", "POD/Galerkin reduction of the heat rod")->callback([&] { command = &cmd_rom_pod; });
  auto* team = app.add_subcommand("team", "TEAM 35 field evaluation");
  team->require_subcommand(1);
  team->add_subcommand("eval", "evaluate (Br, Bz) on a grid")->callback([&] { command = &cmd_team_eval; });
  app.add_subcommand("rank", "rank the last Pareto front of a results log by robustness")
      ->callback([&] { command = &cmd_rank; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigFailure;
  }

  if (*o_config) ov.config = config_path;
  if (*o_seed) ov.seed = seed;
  if (*o_out) ov.out = out_dir;
  if (*o_threads) ov.threads = threads;
  if (*o_surrogate) ov.surrogate = surrogate == "on";

  try {
    const auto cfg = load_config(ov);
    const auto summary = command(cfg);
    out << summary.dump(2) << '\n';
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "rdo: configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const std::exception& e) {
    err << "rdo: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

} // namespace rdo::cli
