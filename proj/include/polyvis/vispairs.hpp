#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "polyvis/decomposition.hpp"
#include "polyvis/geom.hpp"

namespace polyvis {

enum class DualColor { Red, Blue };

/// Dual image of the part of a splitting diagonal seen from one point. The
/// diagonal lies on the y-axis as {0} x [0, 1]; a point (a, b) maps to the
/// line y = a x - b and the line through it and (0, s) maps to ((b - s)/a, -s).
struct DualSegment {
  Point2 a, b;
  DualColor color = DualColor::Red;
  std::size_t source = 0;
};

struct CountingProblem {
  std::vector<DualSegment> red;
  std::vector<DualSegment> blue;
};

/// Closed segments; touching counts. Degenerate (single-point) segments are allowed.
bool dual_segments_meet(const DualSegment& s, const DualSegment& t);

using BichromaticCounter = std::function<std::uint64_t(const CountingProblem&)>;

/// Exact count of red-blue pairs that meet, by testing every pair.
std::uint64_t count_bichromatic(const CountingProblem& problem);

/// Maps p into the frame where u -> (0, 0) and v -> (0, 1); the left side of
/// u -> v goes to x < 0.
Point2 diagonal_frame(const Point2& u, const Point2& v, const Point2& p);

/// Dual segment of p for the diagonal (u, v) of ct, or nullopt if p sees none
/// of it. p must not lie on the line uv.
std::optional<DualSegment> dual_segment(const CornerTable& ct, const Point2& p, std::size_t u,
                                        std::size_t v, DualColor color, std::size_t source);

struct VisPairsNode {
  std::size_t node = 0;
  bool leaf = false;
  std::size_t u = 0, v = 0;  // splitting diagonal, internal nodes only
  std::size_t m1 = 0, m2 = 0;  // points sent to each side; leaves use m1
  std::uint64_t pairs = 0;     // cross pairs, or C(m, 2) at a leaf
};

struct VisPairsResult {
  std::uint64_t count = 0;
  std::vector<VisPairsNode> nodes;
};

/// Number of pairs of points of M that see each other in the simple polygon
/// (closed visibility). Points must lie in the closed polygon.
VisPairsResult count_visible_pairs(const PolygonWithHoles& poly, const std::vector<Point2>& points,
                                   const BichromaticCounter& counter = count_bichromatic);

/// Edges of the visibility graph: corner pairs that see each other,
/// including the pairs joined by a polygon edge.
std::uint64_t visibility_graph_edge_count(const PolygonWithHoles& poly);

}  // namespace polyvis
