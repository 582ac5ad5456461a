#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lac/geom.hpp"

namespace lac {

/// Static 2-d tree over a point set, rebuilt from scratch when the points move.
class KdTree2 {
 public:
  KdTree2() = default;
  explicit KdTree2(std::span<const Vec2> points);

  /// Indices of all points p with |p - center| <= radius (closed ball), ascending.
  std::vector<std::size_t> radius_query(const Vec2& center, double radius) const;

  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::size_t point;  // index into points_
    int axis;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::size_t>& idx, std::size_t begin, std::size_t end, int depth);
  void query(int node, const Vec2& center, double radius_sq, double radius,
             std::vector<std::size_t>& out) const;

  std::vector<Vec2> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace lac
