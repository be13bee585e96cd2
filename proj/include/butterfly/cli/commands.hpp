#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "butterfly/cli/config.hpp"

namespace butterfly::cli {

/// Process exit statuses.
enum ExitCode : int { exit_ok = 0, exit_oracle_fail = 1, exit_config_error = 2 };

std::vector<double> beta_grid(const RunConfig& config);

int cmd_critical(const RunConfig& config, std::ostream& out);
int cmd_curves(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_equilibria(const RunConfig& config, std::optional<double> beta_star, std::ostream& out);
/// extra_edges: edges added to the enumeration graph (negative controls).
int cmd_oracle(const RunConfig& config, const std::vector<std::pair<Symbol, Symbol>>& extra_edges,
               std::ostream& out);
int cmd_sweep(const RunConfig& config, const std::string& param, const std::vector<double>& values,
              std::ostream& out);

/// Full command line: subcommand dispatch, config loading, flag overrides.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace butterfly::cli
