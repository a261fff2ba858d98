#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "deterrence_cli/config.hpp"

namespace deterrence::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNoEquilibrium = 2,
  kExitVerification = 3,
  kExitNonConvergence = 4,
};

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare_n(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_demo_intro(std::ostream& out);

// Full command line: `<command> [--config FILE] [--key value ...]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deterrence::cli
