#pragma once

#include "polystab/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace polystab::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 1,
    exit_base_state = 2,
    exit_uncertified = 3,
    exit_verification = 4,
};

int cmd_base_state(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_asymptotics(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, const std::string& key, const std::vector<double>& values, std::ostream& out,
              std::ostream& err);

/// Parses the command line and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polystab::cli
