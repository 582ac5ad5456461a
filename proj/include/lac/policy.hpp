#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lac/cell.hpp"
#include "lac/random.hpp"

namespace lac {

enum class PenaltyAngleMode {
  symmetric,  ///< shortest angle to the goal direction, in [0, pi]
  literal,    ///< counterclockwise offset from the goal direction, in [0, 2*pi)
};

struct PenaltyParams {
  double zeta = 0.95;
  PenaltyAngleMode angle_mode = PenaltyAngleMode::symmetric;

  void validate() const;
  friend bool operator==(const PenaltyParams&, const PenaltyParams&) = default;
};

struct LearnParams {
  double gamma = 0.75;  ///< weight of the penalized length against the stored reward
  double eta = 0.9;     ///< win threshold as a fraction of the speed cap
  double beta = 0.1;    ///< exploration increment per lost step
  int window = 8;       ///< wUCB moving window length T

  void validate(int n_actions) const;
  friend bool operator==(const LearnParams&, const LearnParams&) = default;
};

struct WindowEntry {
  int action;
  double reward;
  friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
};

struct LearnerState {
  LearnerState() = default;
  LearnerState(int n_actions, std::uint64_t seed, AgentId id);

  std::optional<int> last_action;
  double epsilon = 0.0;
  std::deque<WindowEntry> window;
  std::vector<double> reward_table;  ///< latest reward per action, 0 if never rewarded
  RandomStream rng;

  friend bool operator==(const LearnerState&, const LearnerState&) = default;
};

/// Penalty factor zeta^(4*angle/pi) for an action at the given offset from the goal.
double penalty_factor(double offset, const PenaltyParams& params);

/// Penalized length of each action in the cell.
std::vector<double> action_weights(const ActionCell& cell, const PenaltyParams& params);

/// Index of the largest value; values within 1e-12 (relative) of each other
/// tie, and ties go to the smallest index.
int argmax_first(std::span<const double> values);

Vec2 select_vel(const ActionCell& cell, const PenaltyParams& params);
int select_vel_index(const ActionCell& cell, const PenaltyParams& params);

/// Sum of penalized lengths.
double reward_of_cell(std::span<const double> weights);

/// Upper confidence bound per action over the moving window only.
/// Actions absent from the window score +infinity.
std::vector<double> wucb_scores(const LearnerState& state, int n_actions);

/// Win-stay / lose-shift choice with adaptive epsilon-greedy exploration.
/// Updates state.epsilon and consumes a draw from state.rng unless win-stay fires.
int select_act(LearnerState& state, std::span<const double> weights, const ActionCell& cell,
               const LearnParams& params);

struct LearnStep {
  Vec2 velocity;
  int action;
};

/// One full learning cycle: reward the previous action, then choose the next.
LearnStep learn_step(LearnerState& state, const ActionCell& cell, const LearnParams& params,
                     const PenaltyParams& penalty);

/// Buffered Voronoi cell baseline: head for the point of the position-space
/// cell closest to the target, capped at v_max. When the agent sits on the
/// cell boundary and can barely move, the target is moved to the right-hand
/// side of the blocking boundary.
Vec2 bvc_select(const AgentSnapshot& me, const Vec2& target,
                std::span<const AgentSnapshot> neighbors, const LacParams& params);

/// Closest point to `goal` inside {x : x . normal_j <= offset_j}, in coordinates
/// relative to the agent. Throws DomainError when the region is empty.
Vec2 closest_feasible_point(const Vec2& goal, std::span<const Vec2> normals,
                            std::span<const double> offsets);

enum class PolicyKind { lac_nav, lac_learn, bvc };

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);
std::string_view to_string(PenaltyAngleMode mode);
std::optional<PenaltyAngleMode> parse_penalty_angle_mode(std::string_view name);

}  // namespace lac
