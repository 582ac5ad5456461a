#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lac/geom.hpp"

namespace lac {

enum class ScenarioKind { reflection, circle, crowd, custom };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentTask {
  Vec2 start = Vec2::Zero();
  Vec2 target = Vec2::Zero();
  int group = 0;  ///< plot coloring: side for reflection, ring for circle

  friend bool operator==(const AgentTask&, const AgentTask&) = default;
};

/// Layout description as it appears in a config file. Geometry fields set to
/// zero fall back to defaults derived from the agent count and radius.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::circle;
  int agents = 12;
  std::uint64_t seed = 1;
  double clearance = 0.0;  ///< extra separation beyond 2r; 0 means 0.1 r

  // reflection
  int rows = 0;
  double spacing = 0.0;
  double gap = 0.0;
  // circle
  int rings = 0;
  double base_radius = 0.0;
  double ring_gap = 0.0;
  // crowd
  double area_side = 0.0;
  /// Minimum target-to-target distance; 0 means 4r + clearance, which keeps a
  /// passable gap between any two arrived agents.
  double target_spacing = 0.0;
  // custom
  std::vector<AgentTask> tasks;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::custom;
  std::vector<AgentTask> agents;
};

/// Two mirrored grids facing each other across x = 0. Left group first.
Scenario gen_reflection(int n_per_side, int rows, double spacing, double gap, double r,
                        double clearance);

/// Concentric rings around the origin; every agent targets its antipode.
Scenario gen_circle(int n_agents, int n_rings, double base_radius, double ring_gap, double r,
                    double clearance);

/// Uniform rejection sampling of starts and targets in a square centered on the origin.
/// Starts keep 2r + clearance apart, targets keep target_spacing apart.
Scenario gen_crowd(int n_agents, double area_side, double r, std::uint64_t seed,
                   double clearance, double target_spacing);

/// Materialize a spec, filling defaults.
Scenario generate(const ScenarioSpec& spec, double r);

}  // namespace lac
