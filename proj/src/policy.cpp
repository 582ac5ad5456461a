#include "lac/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace lac {

namespace {

constexpr double kTieTolerance = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void PenaltyParams::validate() const {
  require(zeta > 0.0 && zeta <= 1.0, "zeta must lie in (0, 1]");
}

void LearnParams::validate(int n_actions) const {
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  require(beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  require(window >= n_actions, "window must be >= n_actions");
}

LearnerState::LearnerState(int n_actions, std::uint64_t seed, AgentId id)
    : reward_table(static_cast<std::size_t>(n_actions), 0.0), rng(seed, id) {}

double penalty_factor(double offset, const PenaltyParams& params) {
  const double angle = params.angle_mode == PenaltyAngleMode::symmetric
                           ? angular_distance(Angle(offset), Angle(0.0))
                           : wrap_two_pi(offset);
  return std::pow(params.zeta, 4.0 * angle / std::numbers::pi);
}

std::vector<double> action_weights(const ActionCell& cell, const PenaltyParams& params) {
  const int n = cell.size();
  std::vector<double> weights(cell.actions.size());
  for (int k = 0; k < n; ++k) {
    // 4 * angle / pi with angle = 2 * pi * steps / n; integer steps keep mirrored actions tied.
    const int steps = params.angle_mode == PenaltyAngleMode::symmetric ? std::min(k, n - k) : k;
    const double exponent = 8.0 * steps / n;
    weights[k] = std::pow(params.zeta, exponent) * cell.actions[k].norm();
  }
  return weights;
}

int argmax_first(std::span<const double> values) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    // Mirrored actions differ by rounding only; those still count as ties.
    const double tol = kTieTolerance * std::max(1.0, std::abs(values[best]));
    if (values[k] > values[best] + tol) best = k;
  }
  return best;
}

int select_vel_index(const ActionCell& cell, const PenaltyParams& params) {
  return argmax_first(action_weights(cell, params));
}

Vec2 select_vel(const ActionCell& cell, const PenaltyParams& params) {
  return cell.actions[select_vel_index(cell, params)];
}

double reward_of_cell(std::span<const double> weights) {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::vector<double> wucb_scores(const LearnerState& state, int n_actions) {
  std::vector<double> sum(n_actions, 0.0);
  std::vector<int> count(n_actions, 0);
  for (const auto& e : state.window) {
    sum[e.action] += e.reward;
    ++count[e.action];
  }
  const double total = static_cast<double>(state.window.size());
  std::vector<double> scores(n_actions, std::numeric_limits<double>::infinity());
  for (int k = 0; k < n_actions; ++k) {
    if (count[k] == 0) continue;
    scores[k] = sum[k] / count[k] + std::sqrt(2.0 * std::log(total) / count[k]);
  }
  return scores;
}

int select_act(LearnerState& state, std::span<const double> weights, const ActionCell& cell,
               const LearnParams& params) {
  if (state.last_action == 0) {
    if (weights[0] >= params.eta * cell.max_speed) {
      state.epsilon = 0.0;
      return 0;
    }
    state.epsilon = std::min(1.0, state.epsilon + params.beta);
  }

  const double s = state.rng.uniform01();
  if (s < 1.0 - state.epsilon) {
    std::vector<double> mixed(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      mixed[k] = (1.0 - params.gamma) * state.reward_table[k] + params.gamma * weights[k];
    }
    return argmax_first(mixed);
  }
  return argmax_first(wucb_scores(state, cell.size()));
}

LearnStep learn_step(LearnerState& state, const ActionCell& cell, const LearnParams& params,
                     const PenaltyParams& penalty) {
  const std::vector<double> weights = action_weights(cell, penalty);
  if (state.last_action) {
    const int last = *state.last_action;
    const double reward = reward_of_cell(weights);
    state.reward_table[last] = reward;
    state.window.push_back({last, reward});
    while (static_cast<int>(state.window.size()) > params.window) state.window.pop_front();
  }
  const int action = select_act(state, weights, cell, params);
  state.last_action = action;
  return {cell.actions[action], action};
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::lac_nav: return "lac_nav";
    case PolicyKind::lac_learn: return "lac_learn";
    case PolicyKind::bvc: return "bvc";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "lac_nav") return PolicyKind::lac_nav;
  if (name == "lac_learn") return PolicyKind::lac_learn;
  if (name == "bvc") return PolicyKind::bvc;
  return std::nullopt;
}

std::string_view to_string(PenaltyAngleMode mode) {
  return mode == PenaltyAngleMode::symmetric ? "symmetric" : "literal";
}

std::optional<PenaltyAngleMode> parse_penalty_angle_mode(std::string_view name) {
  if (name == "symmetric") return PenaltyAngleMode::symmetric;
  if (name == "literal") return PenaltyAngleMode::literal;
  return std::nullopt;
}

}  // namespace lac
