#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lac/cell.hpp"
#include "lac/policy.hpp"
#include "lac/scenario.hpp"
#include "lac/spatial_index.hpp"

namespace lac {

struct SimConfig {
  LacParams lac;
  PenaltyParams penalty;
  LearnParams learn;
  PolicyKind policy = PolicyKind::lac_nav;
  double arrival_tol = 1e-6;
  int max_steps = 60000;
  std::uint64_t seed = 1;
  int threads = 1;  ///< decision-phase workers; never affects results

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct AgentState {
  AgentId id = 0;
  int group = 0;
  Vec2 start = Vec2::Zero();
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 target = Vec2::Zero();
  bool arrived = false;
  std::optional<LearnerState> learner;
  double trajectory_length = 0.0;
  std::optional<int> arrival_step;
};

struct AgentRecord {
  Vec2 position;
  Vec2 velocity;  ///< velocity used for the move that ended at `position`
  int action = -1;
};

struct StepRecord {
  int step = 0;
  std::vector<AgentRecord> agents;  ///< ascending id
};

/// Pair found closer than 2r after a step.
class SafetyViolation : public std::runtime_error {
 public:
  SafetyViolation(int step, AgentId a, AgentId b, double distance);
  int step() const { return step_; }

 private:
  int step_;
};

/// Frozen positions and velocities with a spatial index over them.
class NeighborIndex {
 public:
  explicit NeighborIndex(std::vector<AgentSnapshot> snapshot);

  /// All other agents whose center lies within `radius` (closed ball), sorted by id.
  std::vector<AgentSnapshot> query(std::size_t self, double radius) const;

  const std::vector<AgentSnapshot>& snapshot() const { return snapshot_; }

 private:
  std::vector<AgentSnapshot> snapshot_;
  KdTree2 tree_;
};

std::vector<AgentSnapshot> take_snapshot(std::span<const AgentState> world, double radius);

std::vector<AgentState> make_world(const Scenario& scenario, const SimConfig& config);

/// Velocity and action index (-1 when the policy has none) chosen by one agent.
struct Decision {
  Vec2 velocity = Vec2::Zero();
  int action = -1;
};

Decision decide(const AgentState& agent, std::optional<LearnerState>& learner,
                const NeighborIndex& index, std::size_t self, const SimConfig& config);

/// Advance every agent by one synchronous update. `step_index` is the number
/// of the step being taken (1 for the first move).
StepRecord step(std::vector<AgentState>& world, const SimConfig& config, int step_index);

/// Throws SafetyViolation if any pair is closer than 2r - kOverlapSlack.
void check_separation(std::span<const AgentState> world, double radius, int step_index);

enum class Termination { completed, step_cap };

std::string_view to_string(Termination t);

struct AgentSummary {
  AgentId id = 0;
  int group = 0;
  Vec2 start = Vec2::Zero();
  Vec2 target = Vec2::Zero();
  std::optional<int> arrival_step;
  double path_length = 0.0;
};

/// Parameters needed to interpret a trace without its full config.
struct TraceHeader {
  int schema = 1;
  double delta = 0.01;
  double radius = 10.0;
  double v_max = 50.0;
  double arrival_tol = 1e-6;
  std::uint64_t seed = 1;
  std::string policy = "lac_nav";
  std::string scenario = "custom";
};

struct SimTrace {
  TraceHeader header;
  std::vector<AgentSummary> agents;
  std::vector<StepRecord> steps;  ///< step 0 is the initial state; empty when not recorded
  Termination termination = Termination::step_cap;
  int steps_taken = 0;
  double min_separation = 0.0;  ///< smallest center distance seen over the run
};

struct RunOptions {
  bool record_steps = true;
};

SimTrace run(const SimConfig& config, const Scenario& scenario, RunOptions options = {});
SimTrace run(const SimConfig& config, const ScenarioSpec& spec, RunOptions options = {});

}  // namespace lac
