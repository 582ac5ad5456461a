#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "lac/engine.hpp"
#include "lac/metrics.hpp"
#include "lac/scenario.hpp"

namespace lac {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kResultsSchemaVersion = 1;
inline constexpr int kTraceSchemaVersion = 1;

/// Bad config content. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated trace file.
class TraceParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmitFlags {
  bool trace = true;
  bool results = true;
  bool plot = false;
  friend bool operator==(const EmitFlags&, const EmitFlags&) = default;
};

struct ExperimentConfig {
  ScenarioSpec scenario;
  SimConfig sim;
  std::string output_dir;  ///< empty: use LAC_OUTPUT_DIR or "lac_out"
  EmitFlags emit;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string results_to_json(const SimTrace& trace, const RunResult& result);

/// Pinned 9-significant-digit rendering; negative zero prints as 0.
std::string format_real(double v);

void write_trace(std::ostream& out, const SimTrace& trace);
SimTrace read_trace(std::istream& in);
void save_trace(const std::string& path, const SimTrace& trace);
SimTrace load_trace(const std::string& path);

struct VerifyReport {
  bool ok = true;
  int step = -1;
  std::string message;
};

/// Offline re-check of separation, displacement = delta * velocity, and
/// absorbing arrivals. Tolerances account for the 9-digit rendering.
VerifyReport verify_trace(const SimTrace& trace);

}  // namespace lac
