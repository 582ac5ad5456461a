#include "lac/spatial_index.hpp"

#include <algorithm>
#include <numeric>

namespace lac {

KdTree2::KdTree2(std::span<const Vec2> points) : points_(points.begin(), points.end()) {
  std::vector<std::size_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, idx.size(), 0);
}

int KdTree2::build(std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
                   int depth) {
  if (begin >= end) return -1;
  const int axis = depth % 2;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                   [&](std::size_t a, std::size_t b) {
                     const double pa = points_[a][axis];
                     const double pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const int node = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], axis});
  const int left = build(idx, begin, mid, depth + 1);
  const int right = build(idx, mid + 1, end, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

void KdTree2::query(int node, const Vec2& center, double radius_sq, double radius,
                    std::vector<std::size_t>& out) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec2& p = points_[n.point];
  if ((p - center).squaredNorm() <= radius_sq) out.push_back(n.point);
  const double diff = center[n.axis] - p[n.axis];
  // Points equal on the split axis can sit on either side.
  if (diff <= radius) query(n.left, center, radius_sq, radius, out);
  if (diff >= -radius) query(n.right, center, radius_sq, radius, out);
}

std::vector<std::size_t> KdTree2::radius_query(const Vec2& center, double radius) const {
  std::vector<std::size_t> out;
  query(root_, center, radius * radius, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lac
