#pragma once

#include <string>

#include "run_config.hpp"

namespace vinsp::cli {

/// Runs one subcommand; throws vinsp::Error on failure. Returns the exit status.
int run_command(const std::string& command, const RunConfig& config);

}  // namespace vinsp::cli
