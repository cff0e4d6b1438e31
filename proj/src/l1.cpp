#include "polyvis/l1.hpp"

#include <algorithm>

#include "polyvis/numeric.hpp"

namespace polyvis {
namespace {

double sorted_prefix_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  CompensatedSum sum;
  for (std::size_t i = 1; i < m; ++i)
    sum.add(static_cast<double>(i) * static_cast<double>(m - i) * (v[i] - v[i - 1]));
  return sum.value();
}

}  // namespace

double total_l1_pairwise(const std::vector<std::vector<double>>& points) {
  if (points.empty()) return 0.0;
  const std::size_t d = points.front().size();
  CompensatedSum total;
  std::vector<double> col(points.size());
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].size() != d) throw GeometryError("points of different dimensions");
      col[i] = points[i][k];
    }
    total.add(sorted_prefix_sum(col));
  }
  return total.value();
}

double total_l1_pairwise(const std::vector<Point2>& points) {
  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  return sorted_prefix_sum(xs) + sorted_prefix_sum(ys);
}

std::vector<AxisAggregate> axis_aggregates(const VerticalTrapezoidation& vt) {
  std::vector<AxisAggregate> agg(vt.traps.size());
  for (auto it = vt.order.rbegin(); it != vt.order.rend(); ++it) {
    const std::size_t id = *it;
    const VerticalTrapezoid& t = vt.traps[id];
    const double w = t.width(), own = t.area();
    // Children attach on the side away from their own parent side.
    auto side_of = [&](std::size_t c) { return 1 - vt.traps[c].parent_side; };

    AxisAggregate& a = agg[id];
    a.area = own;
    for (std::size_t c : t.children) a.area += agg[c].area;

    if (t.parent >= 0) {
      const int s = t.parent_side;
      CompensatedSum l;
      l.add(t.side_moment(s));
      for (std::size_t c : t.children) {
        l.add(agg[c].to_separator);
        if (side_of(c) != s) l.add(agg[c].area * w);
      }
      a.to_separator = l.value();
    }

    CompensatedSum d;
    d.add(t.self_pair_integral());
    for (std::size_t c : t.children) {
      d.add(agg[c].pair_integral);
      d.add(2 * (own * agg[c].to_separator + agg[c].area * t.side_moment(side_of(c))));
    }
    for (std::size_t c : t.children)
      for (std::size_t c2 : t.children) {
        if (c == c2) continue;
        d.add(agg[c].area * agg[c2].to_separator + agg[c2].area * agg[c].to_separator);
        if (side_of(c) != side_of(c2)) d.add(agg[c].area * agg[c2].area * w);
      }
    a.pair_integral = d.value();
  }
  return agg;
}

double horizontal_pair_integral(const PolygonWithHoles& poly) {
  const VerticalTrapezoidation vt = vertical_trapezoidation(poly);
  return axis_aggregates(vt)[vt.root].pair_integral;
}

PolygonWithHoles transpose(const PolygonWithHoles& poly) {
  auto flip = [](Ring r) {
    for (auto& p : r) std::swap(p.x, p.y);
    std::reverse(r.begin(), r.end());
    return r;
  };
  PolygonWithHoles out{flip(poly.outer), {}};
  for (const auto& h : poly.holes) out.holes.push_back(flip(h));
  return out;
}

ExpectedL1 expected_l1(const PolygonWithHoles& poly) {
  const auto report = validate_polygon(poly, true);
  if (report.has(IssueKind::DuplicateX) || report.has(IssueKind::DuplicateY))
    throw GeometryError("corners must have distinct x and y coordinates");
  ExpectedL1 r;
  const VerticalTrapezoidation vt = vertical_trapezoidation(poly);
  const auto agg = axis_aggregates(vt);
  r.area = agg[vt.root].area;
  r.d1 = agg[vt.root].pair_integral;
  r.d2 = horizontal_pair_integral(transpose(poly));
  r.value = (r.d1 + r.d2) / (r.area * r.area);
  return r;
}

}  // namespace polyvis
