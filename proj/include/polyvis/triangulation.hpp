#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "polyvis/geom.hpp"

namespace polyvis {

struct Triangulation {
  CornerTable corners;
  std::vector<std::array<std::size_t, 3>> triangles;  // counterclockwise corner triples
  // neighbor[t][k]: triangle across the side from corner k to corner k+1 of t.
  std::vector<std::array<std::optional<std::size_t>, 3>> neighbor;
  std::vector<std::pair<std::size_t, std::size_t>> diagonals;

  explicit Triangulation(const CornerTable& ct) : corners(ct) {}
  double triangle_area(std::size_t t) const;
  /// Triangle containing p (closed), by linear scan.
  std::optional<std::size_t> locate(const Point2& p) const;
};

/// Monotone decomposition followed by monotone-piece triangulation; handles holes.
Triangulation triangulate(const PolygonWithHoles& poly);
Triangulation triangulate(const CornerTable& ct);

}  // namespace polyvis
