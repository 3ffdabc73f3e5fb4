#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unshuffle {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitConfirmed = 0,
  kExitNotConfirmed = 1,
  kExitUsage = 2,
  kExitCap = 3,
};

/// `unshuffle gen|solve|verify|bench [flags]`; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kBenchCsvHeader =
    "seed,m,n,sigma,phase_compile_ms,phase_solve_ms,rel_err,perm_acc,certificate";

}  // namespace unshuffle
