#pragma once

#include <ostream>
#include <stdexcept>
#include <string>

#include "config.hpp"

namespace movosc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitOracleMismatch = 4,
};

/// Carries the process exit code of a failed command.
class CommandError : public std::runtime_error {
 public:
  CommandError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

// Each command writes CSV to `out` and diagnostics to `diag`, and returns the
// exit code. Failures are reported by throwing CommandError.
int cmd_excite(const ScenarioConfig& config, std::ostream& out, std::ostream& diag);
int cmd_probs(const ScenarioConfig& config, std::ostream& out, std::ostream& diag);
int cmd_oracle(const ScenarioConfig& config, std::ostream& out, std::ostream& diag);
int cmd_sweep(const ScenarioConfig& config, std::ostream& out, std::ostream& diag);
int cmd_transport(const ScenarioConfig& config, std::ostream& out, std::ostream& diag);

}  // namespace movosc::cli
