#pragma once

#include <cstddef>
#include <vector>

#include "polyvis/geom.hpp"
#include "polyvis/trapezoidation.hpp"

namespace polyvis {

/// Sum over unordered pairs of the L1 distance, for points of any dimension.
double total_l1_pairwise(const std::vector<std::vector<double>>& points);
double total_l1_pairwise(const std::vector<Point2>& points);

/// Per trapezoid-tree node t: area of the subtree region P[t], the integral
/// over P[t] of the horizontal path length to the separator l(t) (zero at the
/// root), and the horizontal pair integral D1(P[t], P[t]).
struct AxisAggregate {
  double area = 0;
  double to_separator = 0;
  double pair_integral = 0;
};

/// Bottom-up aggregates in the trapezoidation's current rooting.
std::vector<AxisAggregate> axis_aggregates(const VerticalTrapezoidation& vt);

/// Integral over ordered pairs of the horizontal length of a shortest
/// rectilinear path (D1). Corners must have distinct x.
double horizontal_pair_integral(const PolygonWithHoles& poly);

/// Swaps x and y and restores counterclockwise orientation.
PolygonWithHoles transpose(const PolygonWithHoles& poly);

struct ExpectedL1 {
  double value = 0;
  double d1 = 0, d2 = 0;
  double area = 0;
};

/// Expected geodesic L1 distance between two uniform points of a simple
/// polygon whose corners have distinct x and distinct y coordinates.
ExpectedL1 expected_l1(const PolygonWithHoles& poly);

}  // namespace polyvis
