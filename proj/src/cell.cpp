#include "lac/cell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lac {

namespace {

std::string overlap_message(AgentId a, AgentId b, double distance) {
  return "agents " + std::to_string(a) + " and " + std::to_string(b) +
         " overlap (center distance " + std::to_string(distance) + ")";
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

OverlapError::OverlapError(AgentId a, AgentId b, double distance)
    : std::runtime_error(overlap_message(a, b, distance)),
      first_(a),
      second_(b),
      distance_(distance) {}

void LacParams::validate() const {
  require(std::isfinite(r) && r > 0.0, "radius must be > 0");
  require(std::isfinite(v_max) && v_max > 0.0, "v_max must be > 0");
  require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
  require(std::isfinite(tau) && tau > 0.0, "tau must be > 0");
  require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
  require(n_actions >= 4, "n_actions must be >= 4");
  require(tau >= delta, "tau must be >= delta for the neighbor cutoff to hold");
}

double ActionCell::offset(int k) const {
  return 2.0 * std::numbers::pi * k / static_cast<double>(actions.size());
}

Angle ActionCell::direction(int k) const { return goal_dir + Angle(offset(k)); }

BvcBound bvc_bound(const Vec2& p_i, const Vec2& p_j, const LacParams& params,
                   AgentId id_i, AgentId id_j) {
  const Vec2 p_ij = p_j - p_i;
  const double dist = p_ij.norm();
  if (dist < 2.0 * params.r - kOverlapSlack || dist == 0.0) {
    throw OverlapError(id_i, id_j, dist);
  }
  // Within the slack the pair counts as touching: zero room to approach.
  const double slack = std::max(0.0, (dist - 2.0 * params.r) / (2.0 * params.delta));
  return {p_ij / dist, slack};
}

double risk_scale(double c_ij, const Vec2& u_ij, const Vec2& v_j, double p_dist,
                  const LacParams& params) {
  const double approach = std::max(0.0, c_ij - v_j.dot(u_ij));
  if (approach == 0.0) return 1.0;
  const double gap = std::max(0.0, p_dist - 2.0 * params.r);
  return std::min(1.0, gap / (approach * params.tau));
}

SafeHalfPlane scaled_half_plane(const BvcBound& bound, double theta, double lambda,
                                AgentId source) {
  const double factor = 1.0 - lambda + theta * lambda;
  return {bound.normal, factor * bound.slack, source};
}

SafeHalfPlane safe_half_plane(const AgentSnapshot& me, const AgentSnapshot& other,
                              const LacParams& params) {
  const BvcBound b = bvc_bound(me.position, other.position, params, me.id, other.id);
  const double dist = (other.position - me.position).norm();
  const double theta = risk_scale(b.slack, b.normal, other.velocity, dist, params);
  return scaled_half_plane(b, theta, params.lambda, other.id);
}

ActionCell build_cell_from_planes(const Vec2& position, const Vec2& target,
                                  std::span<const SafeHalfPlane> planes,
                                  const LacParams& params) {
  const Vec2 to_goal = target - position;
  const double goal_dist = to_goal.norm();
  if (goal_dist == 0.0) {
    throw DomainError("build_cell: agent already at its target");
  }

  ActionCell cell;
  cell.goal_dir = rho(to_goal);
  cell.max_speed = std::min(params.v_max, goal_dist / params.delta);
  cell.actions.reserve(static_cast<std::size_t>(params.n_actions));

  const Vec2 heading = to_goal / goal_dist;
  for (int k = 0; k < params.n_actions; ++k) {
    // k = 0 keeps the exact goal heading rather than a cos/sin round trip.
    const Vec2 ray = cell.max_speed *
                     (k == 0 ? heading
                             : rotate_ccw(heading, 2.0 * std::numbers::pi * k / params.n_actions));
    double scale = 1.0;
    for (const auto& plane : planes) {
      const double along = ray.dot(plane.normal);
      if (along > 0.0 && along * scale > plane.bound) {
        scale = plane.bound / along;
      }
    }
    cell.actions.push_back(scale * ray);
  }
  return cell;
}

ActionCell build_cell(const AgentSnapshot& me, const Vec2& target,
                      std::span<const AgentSnapshot> neighbors, const LacParams& params) {
  std::vector<SafeHalfPlane> planes;
  planes.reserve(neighbors.size());
  for (const auto& other : neighbors) {
    planes.push_back(safe_half_plane(me, other, params));
  }
  return build_cell_from_planes(me.position, target, planes, params);
}

}  // namespace lac
