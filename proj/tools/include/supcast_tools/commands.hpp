#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "supcast_tools/config.hpp"

namespace supcast::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the sweep described by `config`, writes the CSV and prints a
/// per-cell PSNR summary to `log`.
void cmd_run(const Config& config, std::ostream& log);

/// Runs one verification suite ("matching", "power", "distortion" or "all");
/// returns true when every property passes.
bool cmd_verify(const std::string& suite, std::ostream& log);

/// Full command-line entry point; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supcast::tools
