#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/config.hpp"

namespace biphoton {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_domain = 3, exit_io = 4 };

struct CommandOptions {
  std::optional<std::filesystem::path> data;  // scan CSV for fit-knife / fit-slit
  bool quiet = false;
};

const std::vector<std::string>& command_names();

// Configuration and usage problems map to exit_usage, model and numeric failures to
// exit_domain, file-system failures to exit_io.
int exit_code_for(const std::exception& error);

// Machine-readable single-line JSON describing the failure.
std::string error_report(const std::exception& error);

// Runs one command, writing artifacts into config.output_dir. Never throws: failures are
// reported on `err` as JSON and reflected in the returned exit code.
int run_command(std::string_view command, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

}  // namespace biphoton
