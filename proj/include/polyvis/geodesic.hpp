#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "polyvis/geom.hpp"
#include "polyvis/triangulation.hpp"

namespace polyvis {

inline constexpr std::size_t kNotACorner = std::numeric_limits<std::size_t>::max();

struct GeodesicPath {
  std::vector<Point2> points;
  std::vector<std::size_t> corners;  // corner index per point; kNotACorner for the endpoints

  double length() const;
  double l1_length() const;
};

/// Shortest paths in a triangulated simple polygon (funnel algorithm over the
/// sleeve of triangles between the endpoints). Holds scratch buffers, so use
/// one solver per thread.
class GeodesicSolver {
 public:
  explicit GeodesicSolver(const Triangulation& tri);

  /// p must lie in triangle tp and q in triangle tq. Reuses `out`.
  void path(const Point2& p, std::size_t tp, const Point2& q, std::size_t tq, GeodesicPath& out) const;
  GeodesicPath path(const Point2& p, const Point2& q) const;
  const Triangulation& triangulation() const { return *tri_; }

 private:
  struct Portal {
    Point2 left, right;
    std::size_t left_id, right_id;
  };
  void sleeve(std::size_t tp, std::size_t tq, std::vector<Portal>& portals) const;

  const Triangulation* tri_;
  std::vector<std::size_t> parent_;
  std::vector<int> parent_side_;
  std::vector<std::size_t> depth_;
  mutable std::vector<Portal> portals_;
  mutable std::vector<std::size_t> down_;
};

/// Convenience wrapper: triangulates P and returns the shortest path from p to q.
GeodesicPath geodesic(const PolygonWithHoles& poly, const Point2& p, const Point2& q);

}  // namespace polyvis
