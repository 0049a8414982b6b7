#ifndef NRMSYM_RUNNER_HPP
#define NRMSYM_RUNNER_HPP

#include <string>

#include <json.hpp>

#include "nrmsym/jobspec.hpp"

namespace nrmsym {

struct CommandResult {
  std::string text;             // column-aligned report for stdout
  nlohmann::ordered_json json;  // structured mirror of the report
};

// Commands: group, split, spectrum, weights, verify.
// Validation problems throw ValidationError, numerical assertion failures
// throw NumericalError; the CLI maps those to exit codes 2 and 3.
CommandResult run_command(const std::string& command, const JobSpec& spec);

}  // namespace nrmsym

#endif
