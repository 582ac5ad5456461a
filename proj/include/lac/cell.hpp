#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lac/geom.hpp"

namespace lac {

using AgentId = std::uint32_t;

/// Absolute slack on the 2r separation before a pair counts as overlapping.
inline constexpr double kOverlapSlack = 1e-6;

/// Two agents are closer than 2r (beyond kOverlapSlack).
class OverlapError : public std::runtime_error {
 public:
  OverlapError(AgentId a, AgentId b, double distance);

  AgentId first() const { return first_; }
  AgentId second() const { return second_; }
  double distance() const { return distance_; }

 private:
  AgentId first_;
  AgentId second_;
  double distance_;
};

struct LacParams {
  double r = 10.0;       ///< agent radius
  double v_max = 50.0;   ///< maximum speed
  double delta = 0.01;   ///< update interval
  double tau = 0.05;     ///< look-ahead horizon
  double lambda = 0.5;   ///< relax factor
  int n_actions = 8;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const LacParams&, const LacParams&) = default;
};

struct AgentSnapshot {
  AgentId id = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  double radius = 10.0;
};

/// Velocity constraint v . normal <= bound.
struct SafeHalfPlane {
  Vec2 normal = Vec2::UnitX();
  double bound = 0.0;
  AgentId source = 0;

  bool contains(const Vec2& v) const { return v.dot(normal) <= bound; }
};

/// Finite velocity set; actions[k] points k*2*pi/n counterclockwise from the goal direction.
struct ActionCell {
  std::vector<Vec2> actions;
  Angle goal_dir;
  double max_speed = 0.0;

  int size() const { return static_cast<int>(actions.size()); }
  /// Angle offset of action k relative to the goal direction.
  double offset(int k) const;
  /// Absolute direction of action k (defined even when the action has zero length).
  Angle direction(int k) const;
};

/// Unclipped constraint of the buffered Voronoi cell in velocity space.
struct BvcBound {
  Vec2 normal;  // u_ij
  double slack;  // c_ij
};

BvcBound bvc_bound(const Vec2& p_i, const Vec2& p_j, const LacParams& params,
                   AgentId id_i = 0, AgentId id_j = 0);

/// Collision-risk scale in (0, 1]; 1 when the neighbor is not approaching within tau.
double risk_scale(double c_ij, const Vec2& u_ij, const Vec2& v_j, double p_dist,
                  const LacParams& params);

/// Scale the half-plane {v . u <= c} toward the origin by (1 - lambda + theta * lambda).
SafeHalfPlane scaled_half_plane(const BvcBound& bound, double theta, double lambda,
                                AgentId source);

SafeHalfPlane safe_half_plane(const AgentSnapshot& me, const AgentSnapshot& other,
                              const LacParams& params);

/// Cell built from an explicit set of constraints.
ActionCell build_cell_from_planes(const Vec2& position, const Vec2& target,
                                  std::span<const SafeHalfPlane> planes,
                                  const LacParams& params);

ActionCell build_cell(const AgentSnapshot& me, const Vec2& target,
                      std::span<const AgentSnapshot> neighbors, const LacParams& params);

/// Distance beyond which a neighbor cannot constrain the cell.
inline double neighbor_cutoff(const LacParams& params) {
  return 2.0 * params.v_max * params.tau + 2.0 * params.r;
}

}  // namespace lac
