#pragma once

#include <iosfwd>

#include <json.hpp>

#include "rdo_cli/config.hpp"

namespace rdo::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kConfigFailure = 2 };

// Each command writes its files plus config.echo.json and summary.json into
// cfg.output_dir and returns the summary.
nlohmann::json cmd_optimize(const RunConfig& cfg);
nlohmann::json cmd_rom_identify(const RunConfig& cfg);
nlohmann::json cmd_rom_pod(const RunConfig& cfg);
nlohmann::json cmd_team_eval(const RunConfig& cfg);
nlohmann::json cmd_rank(const RunConfig& cfg);

/// Full command-line front end: parses arguments, runs the selected command
/// and maps failures onto exit codes (2 for configuration and validation
/// errors, 1 for anything that goes wrong while running).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace rdo::cli
