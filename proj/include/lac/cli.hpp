#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lac/io.hpp"

namespace lac::cli {

enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kStepCap = 2,
  kViolation = 3,
};

/// Output directory: explicit config value, then $LAC_OUTPUT_DIR, then "lac_out".
std::string resolve_output_dir(const ExperimentConfig& config);

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const ExperimentConfig& config, const std::vector<std::string>& policies,
                const std::vector<std::uint64_t>& seeds, int jobs, std::ostream& out,
                std::ostream& err);
int cmd_verify(const std::string& trace_path, std::ostream& out, std::ostream& err);
int cmd_plot(const std::string& trace_path, const std::string& out_path, std::ostream& out,
             std::ostream& err);

/// Entry point for the lacsim tool.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lac::cli
