#include "lac/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace lac {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string violation_message(int step, AgentId a, AgentId b, double distance) {
  return "step " + std::to_string(step) + ": agents " + std::to_string(a) + " and " +
         std::to_string(b) + " overlap (center distance " + std::to_string(distance) + ")";
}

std::vector<Vec2> positions_of(std::span<const AgentSnapshot> snapshot) {
  std::vector<Vec2> out;
  out.reserve(snapshot.size());
  for (const auto& s : snapshot) out.push_back(s.position);
  return out;
}

// Smallest center distance among pairs within `radius`; +inf if there are none.
double min_close_distance(std::span<const AgentState> world, double radius) {
  std::vector<Vec2> pts;
  pts.reserve(world.size());
  for (const auto& a : world) pts.push_back(a.position);
  const KdTree2 tree(pts);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j : tree.radius_query(pts[i], radius)) {
      if (j <= i) continue;
      best = std::min(best, (pts[j] - pts[i]).norm());
    }
  }
  return best;
}

}  // namespace

void SimConfig::validate() const {
  lac.validate();
  penalty.validate();
  learn.validate(lac.n_actions);
  require(std::isfinite(arrival_tol) && arrival_tol > 0.0, "arrival_tol must be > 0");
  require(max_steps > 0, "max_steps must be > 0");
  require(threads >= 1, "threads must be >= 1");
}

SafetyViolation::SafetyViolation(int step, AgentId a, AgentId b, double distance)
    : std::runtime_error(violation_message(step, a, b, distance)), step_(step) {}

std::string_view to_string(Termination t) {
  return t == Termination::completed ? "completed" : "step_cap";
}

NeighborIndex::NeighborIndex(std::vector<AgentSnapshot> snapshot)
    : snapshot_(std::move(snapshot)), tree_(positions_of(snapshot_)) {}

std::vector<AgentSnapshot> NeighborIndex::query(std::size_t self, double radius) const {
  std::vector<AgentSnapshot> out;
  for (std::size_t j : tree_.radius_query(snapshot_[self].position, radius)) {
    if (j != self) out.push_back(snapshot_[j]);
  }
  // Indices follow id order in every world built by make_world.
  std::sort(out.begin(), out.end(),
            [](const AgentSnapshot& a, const AgentSnapshot& b) { return a.id < b.id; });
  return out;
}

std::vector<AgentSnapshot> take_snapshot(std::span<const AgentState> world, double radius) {
  std::vector<AgentSnapshot> out;
  out.reserve(world.size());
  for (const auto& a : world) {
    out.push_back({a.id, a.position, a.arrived ? Vec2::Zero().eval() : a.velocity, radius});
  }
  return out;
}

std::vector<AgentState> make_world(const Scenario& scenario, const SimConfig& config) {
  std::vector<AgentState> world;
  world.reserve(scenario.agents.size());
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const auto& task = scenario.agents[i];
    AgentState a;
    a.id = static_cast<AgentId>(i);
    a.group = task.group;
    a.start = task.start;
    a.position = task.start;
    a.target = task.target;
    if (config.policy == PolicyKind::lac_learn) {
      a.learner.emplace(config.lac.n_actions, config.seed, a.id);
    }
    if ((a.target - a.position).norm() <= config.arrival_tol) {
      a.arrived = true;
      a.arrival_step = 0;
    }
    world.push_back(std::move(a));
  }
  return world;
}

Decision decide(const AgentState& agent, std::optional<LearnerState>& learner,
                const NeighborIndex& index, std::size_t self, const SimConfig& config) {
  const auto neighbors = index.query(self, neighbor_cutoff(config.lac));
  const AgentSnapshot& me = index.snapshot()[self];
  switch (config.policy) {
    case PolicyKind::lac_nav: {
      const ActionCell cell = build_cell(me, agent.target, neighbors, config.lac);
      const int k = select_vel_index(cell, config.penalty);
      return {cell.actions[k], k};
    }
    case PolicyKind::lac_learn: {
      const ActionCell cell = build_cell(me, agent.target, neighbors, config.lac);
      const LearnStep s = learn_step(*learner, cell, config.learn, config.penalty);
      return {s.velocity, s.action};
    }
    case PolicyKind::bvc:
      return {bvc_select(me, agent.target, neighbors, config.lac), -1};
  }
  return {};
}

StepRecord step(std::vector<AgentState>& world, const SimConfig& config, int step_index) {
  const NeighborIndex index(take_snapshot(world, config.lac.r));
  const std::size_t n = world.size();

  // Decision phase: reads only the frozen snapshot and each agent's own learner.
  std::vector<Decision> decisions(n);
  auto decide_range = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      if (world[i].arrived) continue;
      decisions[i] = decide(world[i], world[i].learner, index, i, config);
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.threads), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    decide_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(decide_range, w, workers);
  }

  // Commit phase.
  StepRecord record;
  record.step = step_index;
  record.agents.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentState& a = world[i];
    if (a.arrived) {
      record.agents.push_back({a.position, Vec2::Zero(), -1});
      continue;
    }
    const Decision& d = decisions[i];
    const Vec2 next = a.position + config.lac.delta * d.velocity;
    a.trajectory_length += (next - a.position).norm();
    a.position = next;
    a.velocity = d.velocity;
    if ((a.target - a.position).norm() <= config.arrival_tol) {
      a.arrived = true;
      a.arrival_step = step_index;
      a.velocity = Vec2::Zero();
    }
    record.agents.push_back({a.position, d.velocity, d.action});
  }
  check_separation(world, config.lac.r, step_index);
  return record;
}

void check_separation(std::span<const AgentState> world, double radius, int step_index) {
  std::vector<Vec2> pts;
  pts.reserve(world.size());
  for (const auto& a : world) pts.push_back(a.position);
  const KdTree2 tree(pts);
  const double limit = 2.0 * radius - kOverlapSlack;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j : tree.radius_query(pts[i], limit)) {
      if (j <= i) continue;
      const double d = (pts[j] - pts[i]).norm();
      if (d < limit) throw SafetyViolation(step_index, world[i].id, world[j].id, d);
    }
  }
}

SimTrace run(const SimConfig& config, const Scenario& scenario, RunOptions options) {
  config.validate();
  std::vector<AgentState> world = make_world(scenario, config);
  check_separation(world, config.lac.r, 0);

  SimTrace trace;
  trace.header.delta = config.lac.delta;
  trace.header.radius = config.lac.r;
  trace.header.v_max = config.lac.v_max;
  trace.header.arrival_tol = config.arrival_tol;
  trace.header.seed = config.seed;
  trace.header.policy = std::string(to_string(config.policy));
  trace.header.scenario = std::string(to_string(scenario.kind));

  const double probe = neighbor_cutoff(config.lac);
  trace.min_separation = min_close_distance(world, probe);

  if (options.record_steps) {
    StepRecord initial;
    for (const auto& a : world) initial.agents.push_back({a.position, Vec2::Zero(), -1});
    trace.steps.push_back(std::move(initial));
  }

  auto all_arrived = [&] {
    return std::all_of(world.begin(), world.end(), [](const AgentState& a) { return a.arrived; });
  };

  int s = 0;
  while (!all_arrived() && s < config.max_steps) {
    ++s;
    StepRecord rec = step(world, config, s);
    trace.min_separation = std::min(trace.min_separation, min_close_distance(world, probe));
    if (options.record_steps) trace.steps.push_back(std::move(rec));
  }
  trace.steps_taken = s;
  trace.termination = all_arrived() ? Termination::completed : Termination::step_cap;

  for (const auto& a : world) {
    trace.agents.push_back({a.id, a.group, a.start, a.target, a.arrival_step,
                            a.trajectory_length});
  }
  return trace;
}

SimTrace run(const SimConfig& config, const ScenarioSpec& spec, RunOptions options) {
  return run(config, generate(spec, config.lac.r), options);
}

}  // namespace lac
