#pragma once

#include "wfs/config.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace wfs::cli {

inline constexpr const char* kToolName = "wfs";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kOk = 0, kConfigError = 2, kSeparationError = 3, kDomainError = 4, kNumericError = 5 };

/// Extra files produced by a command: (file name relative to the output directory, contents).
using Artifacts = std::vector<std::pair<std::string, std::string>>;

nlohmann::json cmd_weights_check(const config::RunConfig& cfg);
nlohmann::json cmd_lattice_info(const config::RunConfig& cfg);
nlohmann::json cmd_fourier_series(const config::RunConfig& cfg, Artifacts& files);
nlohmann::json cmd_analyze(const config::RunConfig& cfg, Artifacts& files);
nlohmann::json cmd_wavefront(const config::RunConfig& cfg, Artifacts& files);
nlohmann::json cmd_equivalence(const config::RunConfig& cfg);

const std::vector<std::string>& command_names();

/// Runs one subcommand and wraps the result into a report:
/// {tool, version, command, config_hash, config, result, timings}.
nlohmann::json run_command(const std::string& name, const config::RunConfig& cfg, Artifacts& files);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// Removes the "timings" subtree, leaving the fields that must be reproducible.
nlohmann::json deterministic_part(nlohmann::json report);

}  // namespace wfs::cli
