#pragma once

#include <cstddef>
#include <vector>

#include "polyvis/geom.hpp"

namespace polyvis {

/// A trapezoid with vertical sides at x0 < x1, bounded below and above by
/// polygon edges (edge i runs from corner i to corner i + 1 of the corner
/// table). A side of height zero makes it a triangle.
struct VerticalTrapezoid {
  double x0 = 0, x1 = 0;
  std::size_t bottom = 0, top = 0;
  double bottom0 = 0, top0 = 0, bottom1 = 0, top1 = 0;  // y of both edges at x0 and x1
  int parent = -1;
  int parent_side = 0;  // 0: the parent is across the left side, 1: across the right side
  std::vector<std::size_t> children;

  double width() const { return x1 - x0; }
  double height0() const { return top0 - bottom0; }
  double height1() const { return top1 - bottom1; }
  double area() const { return 0.5 * width() * (height0() + height1()); }
  /// Integral over the trapezoid of the horizontal distance to its left (0) or right (1) side.
  double side_moment(int side) const;
  /// Integral over pairs of points of the trapezoid of |x - x'|.
  double self_pair_integral() const;
};

struct VerticalTrapezoidation {
  CornerTable corners;
  std::vector<VerticalTrapezoid> traps;
  std::size_t root = 0;
  std::vector<std::size_t> order;  // breadth-first from the root
  std::vector<std::vector<std::size_t>> neighbors;  // trapezoids sharing a vertical side

  explicit VerticalTrapezoidation(const CornerTable& ct) : corners(ct) {}
  /// Re-derives parents, sides and the traversal order for another root.
  void reroot(std::size_t r);
};

/// Cuts the simple polygon along the maximal vertical segment through every
/// corner. The root is the leftmost trapezoid. Corners must have distinct x.
VerticalTrapezoidation vertical_trapezoidation(const PolygonWithHoles& poly);

}  // namespace polyvis
