#include "lac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lac/random.hpp"

namespace lac {

namespace {

constexpr std::uint64_t kStartStream = 0x5354415254ULL;
constexpr std::uint64_t kTargetStream = 0x544152474554ULL;
constexpr int kRetriesPerAgent = 2000;

double default_clearance(double clearance, double r) {
  return clearance > 0.0 ? clearance : 0.1 * r;
}

std::vector<Vec2> sample_separated(int n, double side, double r, double min_sep,
                                   RandomStream& rng, const char* what) {
  const double lo = -0.5 * side + r;
  const double span = side - 2.0 * r;
  if (span < 0.0) throw ScenarioError("crowd: area_side smaller than one agent");
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(n));
  const long budget = static_cast<long>(kRetriesPerAgent) * std::max(n, 1);
  long attempts = 0;
  while (static_cast<int>(points.size()) < n) {
    if (++attempts > budget) {
      const double density = points.size() * std::numbers::pi * r * r / (side * side);
      throw ScenarioError(std::string("crowd: could not place ") + what + " for " +
                          std::to_string(n) + " agents (placed " +
                          std::to_string(points.size()) + ", area density " +
                          std::to_string(density) + ")");
    }
    const double x = lo + span * rng.uniform01();
    const double y = lo + span * rng.uniform01();
    const Vec2 candidate(x, y);
    const bool clear = std::all_of(points.begin(), points.end(), [&](const Vec2& p) {
      return (p - candidate).norm() >= min_sep;
    });
    if (clear) points.push_back(candidate);
  }
  return points;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::reflection: return "reflection";
    case ScenarioKind::circle: return "circle";
    case ScenarioKind::crowd: return "crowd";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  if (name == "reflection") return ScenarioKind::reflection;
  if (name == "circle") return ScenarioKind::circle;
  if (name == "crowd") return ScenarioKind::crowd;
  if (name == "custom") return ScenarioKind::custom;
  return std::nullopt;
}

Scenario gen_reflection(int n_per_side, int rows, double spacing, double gap, double r,
                        double clearance) {
  const double min_sep = 2.0 * r + clearance;
  if (n_per_side < 1 || rows < 1) throw ScenarioError("reflection: need n_per_side, rows >= 1");
  if (spacing < min_sep) {
    throw ScenarioError("reflection: spacing " + std::to_string(spacing) +
                        " below 2r + clearance = " + std::to_string(min_sep));
  }
  if (gap < min_sep) {
    throw ScenarioError("reflection: gap " + std::to_string(gap) +
                        " below 2r + clearance = " + std::to_string(min_sep));
  }
  rows = std::min(rows, n_per_side);

  Scenario out;
  out.kind = ScenarioKind::reflection;
  out.agents.reserve(2 * static_cast<std::size_t>(n_per_side));
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? -1.0 : 1.0;
    for (int i = 0; i < n_per_side; ++i) {
      const int col = i / rows;
      const int row = i % rows;
      const Vec2 start(sign * (0.5 * gap + col * spacing), (row - 0.5 * (rows - 1)) * spacing);
      out.agents.push_back({start, Vec2(-start.x(), start.y()), side});
    }
  }
  return out;
}

Scenario gen_circle(int n_agents, int n_rings, double base_radius, double ring_gap, double r,
                    double clearance) {
  const double min_sep = 2.0 * r + clearance;
  if (n_agents < 1 || n_rings < 1) throw ScenarioError("circle: need n_agents, n_rings >= 1");
  if (n_rings > n_agents) throw ScenarioError("circle: more rings than agents");
  if (n_rings > 1 && ring_gap < min_sep) {
    throw ScenarioError("circle: ring_gap below 2r + clearance");
  }

  Scenario out;
  out.kind = ScenarioKind::circle;
  const int base = n_agents / n_rings;
  const int extra = n_agents % n_rings;
  for (int ring = 0; ring < n_rings; ++ring) {
    // Remainder goes to the outer rings, which have the most room.
    const int count = base + (ring >= n_rings - extra ? 1 : 0);
    const double radius = base_radius + ring * ring_gap;
    if (count > 1) {
      const double chord = 2.0 * radius * std::sin(std::numbers::pi / count);
      if (chord < min_sep) {
        throw ScenarioError("circle: ring " + std::to_string(ring) + " of radius " +
                            std::to_string(radius) + " cannot fit " + std::to_string(count) +
                            " agents (neighbor spacing " + std::to_string(chord) + ")");
      }
    } else if (radius < 0.5 * min_sep) {
      throw ScenarioError("circle: base_radius too small for antipodal swap");
    }
    const double stagger = ring % 2 == 1 ? std::numbers::pi / count : 0.0;
    for (int j = 0; j < count; ++j) {
      const double a = 2.0 * std::numbers::pi * j / count + stagger;
      const Vec2 start(radius * std::cos(a), radius * std::sin(a));
      out.agents.push_back({start, -start, ring});
    }
  }
  return out;
}

Scenario gen_crowd(int n_agents, double area_side, double r, std::uint64_t seed,
                   double clearance, double target_spacing) {
  if (n_agents < 1) throw ScenarioError("crowd: need n_agents >= 1");
  const double min_sep = 2.0 * r + clearance;
  if (!(target_spacing >= min_sep)) {
    throw ScenarioError("crowd: target_spacing must be at least 2r + clearance");
  }
  RandomStream start_rng(seed, kStartStream);
  RandomStream target_rng(seed, kTargetStream);
  const auto starts = sample_separated(n_agents, area_side, r, min_sep, start_rng, "starts");
  const auto targets = sample_separated(n_agents, area_side, r, target_spacing, target_rng, "targets");

  Scenario out;
  out.kind = ScenarioKind::crowd;
  for (int i = 0; i < n_agents; ++i) out.agents.push_back({starts[i], targets[i], 0});
  return out;
}

Scenario generate(const ScenarioSpec& spec, double r) {
  const double clearance = default_clearance(spec.clearance, r);
  switch (spec.kind) {
    case ScenarioKind::reflection: {
      if (spec.agents < 2 || spec.agents % 2 != 0) {
        throw ScenarioError("reflection: agents must be a positive even number");
      }
      const int per_side = spec.agents / 2;
      const int rows = spec.rows > 0 ? spec.rows : std::min(per_side, 10);
      const double spacing = spec.spacing > 0.0 ? spec.spacing : 3.0 * r;
      const double gap = spec.gap > 0.0 ? spec.gap : 20.0 * r;
      return gen_reflection(per_side, rows, spacing, gap, r, clearance);
    }
    case ScenarioKind::circle: {
      const int rings = spec.rings > 0 ? spec.rings : (spec.agents + 23) / 24;
      const double base = spec.base_radius > 0.0 ? spec.base_radius : 10.0 * r;
      const double ring_gap = spec.ring_gap > 0.0 ? spec.ring_gap : 4.0 * r;
      return gen_circle(spec.agents, rings, base, ring_gap, r, clearance);
    }
    case ScenarioKind::crowd: {
      const double side = spec.area_side > 0.0 ? spec.area_side : 60.0 * r;
      // Arrived agents stay put, so two targets closer than 4r would leave a wall
      // nobody can pass through.
      const double spacing =
          spec.target_spacing > 0.0 ? spec.target_spacing : 4.0 * r + clearance;
      return gen_crowd(spec.agents, side, r, spec.seed, clearance, spacing);
    }
    case ScenarioKind::custom: {
      const double min_sep = 2.0 * r + clearance;
      const auto& t = spec.tasks;
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          if ((t[i].start - t[j].start).norm() < min_sep) {
            throw ScenarioError("custom: starts of agents " + std::to_string(i) + " and " +
                                std::to_string(j) + " closer than 2r + clearance");
          }
          if ((t[i].target - t[j].target).norm() < min_sep) {
            throw ScenarioError("custom: targets of agents " + std::to_string(i) + " and " +
                                std::to_string(j) + " closer than 2r + clearance");
          }
        }
      }
      return {ScenarioKind::custom, t};
    }
  }
  throw ScenarioError("unknown scenario kind");
}

}  // namespace lac
