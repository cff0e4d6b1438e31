#include "polyvis/vispairs.hpp"

#include <algorithm>

#include "polyvis/triangulation.hpp"
#include "polyvis/visibility.hpp"

namespace polyvis {
namespace {

bool in_box(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool on_closed_segment(const Point2& a, const Point2& b, const Point2& p) {
  return orient(a, b, p) == 0 && in_box(a, b, p);
}

bool triangle_contains(const Triangulation& tri, std::size_t t, const Point2& p) {
  const auto& c = tri.triangles[t];
  const auto& pts = tri.corners.pts;
  return orient(pts[c[0]], pts[c[1]], p) >= 0 && orient(pts[c[1]], pts[c[2]], p) >= 0 &&
         orient(pts[c[2]], pts[c[0]], p) >= 0;
}

std::uint64_t choose2(std::uint64_t m) { return m * (m - (m > 0)) / 2; }

}  // namespace

bool dual_segments_meet(const DualSegment& s, const DualSegment& t) {
  const Point2 &a = s.a, &b = s.b, &c = t.a, &d = t.b;
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (a != b && c != d && o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_closed_segment(a, b, c) || on_closed_segment(a, b, d) || on_closed_segment(c, d, a) ||
         on_closed_segment(c, d, b);
}

std::uint64_t count_bichromatic(const CountingProblem& problem) {
  std::uint64_t count = 0;
  for (const auto& r : problem.red)
    for (const auto& b : problem.blue) count += dual_segments_meet(r, b);
  return count;
}

Point2 diagonal_frame(const Point2& u, const Point2& v, const Point2& p) {
  const Vector2 d = v - u;
  const Vector2 w = p - u;
  const double len2 = dot(d, d);
  return {-cross(d, w) / len2, dot(d, w) / len2};
}

std::optional<DualSegment> dual_segment(const CornerTable& ct, const Point2& p, std::size_t u,
                                        std::size_t v, DualColor color, std::size_t source) {
  const auto vis = visible_part_of_segment(ct, p, u, v);
  if (!vis) return std::nullopt;
  const Point2 f = diagonal_frame(ct.pts[u], ct.pts[v], p);
  auto image = [&](double s) { return Point2{(f.y - s) / f.x, -s}; };
  return DualSegment{image(vis->first), image(vis->second), color, source};
}

VisPairsResult count_visible_pairs(const PolygonWithHoles& poly, const std::vector<Point2>& points,
                                   const BichromaticCounter& counter) {
  require_simple(validate_polygon(poly));
  if (!poly.holes.empty()) throw GeometryError("visible-pair counting needs a polygon without holes");
  const CornerTable ct(poly);
  const Triangulation tri = triangulate(ct);
  const DecompositionTree tree = build_decomposition_tree(tri);

  std::vector<std::size_t> home(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto t = tri.locate(points[i]);
    if (!t) throw GeometryError("point outside the polygon");
    home[i] = *t;
  }

  VisPairsResult result;
  std::vector<char> in_first(tri.triangles.size());
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  stack.emplace_back(tree.root, std::move(all));

  while (!stack.empty()) {
    auto [id, idx] = std::move(stack.back());
    stack.pop_back();
    const DecompositionNode& node = tree.nodes[id];
    VisPairsNode rec;
    rec.node = id;
    if (node.leaf()) {
      rec.leaf = true;
      rec.m1 = idx.size();
      rec.pairs = choose2(idx.size());
      result.count += rec.pairs;
      result.nodes.push_back(rec);
      continue;
    }
    rec.u = node.u;
    rec.v = node.v;
    const Point2& pu = ct.pts[node.u];
    const Point2& pv = ct.pts[node.v];
    const auto& first_tris = tree.nodes[node.first].triangles;
    const auto& second_tris = tree.nodes[node.second].triangles;
    for (std::size_t t : first_tris) in_first[t] = 1;
    for (std::size_t t : second_tris) in_first[t] = 0;

    // Points on the far side of the diagonal's line, or on it, are handled by
    // direct visibility tests; all others go through the dual count.
    std::vector<std::size_t> side1, side2, direct1, direct2;
    CountingProblem problem;
    for (std::size_t i : idx) {
      const Point2& p = points[i];
      const int o = orient(pu, pv, p);
      const bool first = (o == 0 && in_box(pu, pv, p)) || in_first[home[i]];
      if (first && !in_first[home[i]]) {
        home[i] = *std::find_if(first_tris.begin(), first_tris.end(),
                                [&](std::size_t t) { return triangle_contains(tri, t, p); });
      }
      (first ? side1 : side2).push_back(i);
      if (o == 0 || (first && o < 0) || (!first && o > 0)) {
        (first ? direct1 : direct2).push_back(i);
        continue;
      }
      const DualColor color = first ? DualColor::Red : DualColor::Blue;
      if (auto s = dual_segment(ct, p, node.u, node.v, color, i))
        (first ? problem.red : problem.blue).push_back(*s);
    }
    rec.m1 = side1.size();
    rec.m2 = side2.size();
    rec.pairs = counter(problem);
    for (std::size_t i : direct1)
      for (std::size_t j : side2) rec.pairs += segment_in_polygon(ct, points[i], points[j]);
    for (std::size_t j : direct2)
      for (std::size_t i : side1)
        if (std::find(direct1.begin(), direct1.end(), i) == direct1.end())
          rec.pairs += segment_in_polygon(ct, points[i], points[j]);
    result.count += rec.pairs;
    result.nodes.push_back(rec);
    stack.emplace_back(node.second, std::move(side2));
    stack.emplace_back(node.first, std::move(side1));
  }
  return result;
}

std::uint64_t visibility_graph_edge_count(const PolygonWithHoles& poly) {
  return count_visible_pairs(poly, poly.outer).count;
}

}  // namespace polyvis
