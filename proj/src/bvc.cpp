#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lac/policy.hpp"

namespace lac {

namespace {

// Fraction of the attainable step below which a boundary-hugging agent counts as stuck.
constexpr double kStuckFraction = 0.1;

bool feasible(const Vec2& x, std::span<const Vec2> normals, std::span<const double> offsets) {
  for (std::size_t j = 0; j < normals.size(); ++j) {
    const double tol = 1e-9 * (1.0 + std::abs(offsets[j]));
    if (x.dot(normals[j]) > offsets[j] + tol) return false;
  }
  return true;
}

// Pull x toward the origin until every constraint holds exactly.
Vec2 shrink_into(const Vec2& x, std::span<const Vec2> normals, std::span<const double> offsets) {
  double scale = 1.0;
  for (std::size_t j = 0; j < normals.size(); ++j) {
    const double along = x.dot(normals[j]);
    if (along > 0.0 && along * scale > offsets[j]) scale = offsets[j] / along;
  }
  return scale * x;
}

}  // namespace

Vec2 closest_feasible_point(const Vec2& goal, std::span<const Vec2> normals,
                            std::span<const double> offsets) {
  if (feasible(goal, normals, offsets)) return goal;

  Vec2 best = Vec2::Zero();
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec2& x) {
    if (!x.allFinite() || !feasible(x, normals, offsets)) return;
    const double d = (x - goal).squaredNorm();
    if (d < best_dist) {
      best_dist = d;
      best = x;
    }
  };

  const std::size_t m = normals.size();
  for (std::size_t j = 0; j < m; ++j) {
    consider(goal - (goal.dot(normals[j]) - offsets[j]) * normals[j]);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const Vec2& na = normals[a];
      const Vec2& nb = normals[b];
      const double det = na.x() * nb.y() - na.y() * nb.x();
      if (std::abs(det) < 1e-12) continue;
      const Vec2 x((offsets[a] * nb.y() - offsets[b] * na.y()) / det,
                   (na.x() * offsets[b] - nb.x() * offsets[a]) / det);
      consider(x);
    }
  }
  if (!std::isfinite(best_dist)) {
    throw DomainError("closest_feasible_point: constraint region is empty");
  }
  return shrink_into(best, normals, offsets);
}

Vec2 bvc_select(const AgentSnapshot& me, const Vec2& target,
                std::span<const AgentSnapshot> neighbors, const LacParams& params) {
  std::vector<Vec2> normals;
  std::vector<double> offsets;
  normals.reserve(neighbors.size());
  offsets.reserve(neighbors.size());
  for (const auto& other : neighbors) {
    const BvcBound b = bvc_bound(me.position, other.position, params, me.id, other.id);
    normals.push_back(b.normal);
    offsets.push_back(params.delta * b.slack);
  }

  const Vec2 goal = target - me.position;
  const double reach = std::min(params.delta * params.v_max, goal.norm());
  Vec2 step = closest_feasible_point(goal, normals, offsets);

  if (step.norm() < kStuckFraction * reach) {
    // Right-hand rule: slide along the tightest boundary that blocks the goal.
    int blocking = -1;
    for (std::size_t j = 0; j < normals.size(); ++j) {
      if (goal.dot(normals[j]) <= offsets[j]) continue;
      if (blocking < 0 || offsets[j] < offsets[blocking]) blocking = static_cast<int>(j);
    }
    if (blocking >= 0) {
      const Vec2 right = rotate_cw(normals[blocking], std::numbers::pi / 2.0);
      const Vec2 detour = closest_feasible_point(step + reach * right, normals, offsets);
      if (detour.norm() > step.norm()) step = detour;
    }
  }

  Vec2 velocity = step / params.delta;
  const double speed = velocity.norm();
  if (speed > params.v_max) velocity *= params.v_max / speed;
  return velocity;
}

}  // namespace lac
