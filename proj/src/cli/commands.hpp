#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "abcage/floquet.hpp"

namespace abcage::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,    // a property or criterion failed
  kExitConfig = 2,     // configuration did not validate
  kExitNumerical = 3,  // UnitarityLoss, NormDrift, quadrature failure
};

struct CommandOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;  // "." when a command writes files and none is given
  int threads = 1;
  bool quick = false;
  bool json = false;
  FaultInjection fault = FaultInjection::none;
};

/// Resolves --threads / ABCAGE_THREADS / 1.
int resolve_threads(std::optional<int> flag);

int cmd_bands(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_quasienergy(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_propagate(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_design(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Dispatches by name and maps exceptions onto exit codes.
int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out,
                std::ostream& err);

}  // namespace abcage::cli
