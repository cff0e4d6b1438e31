#include "polyvis/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace polyvis {

double GeodesicPath::length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) s += distance(points[i - 1], points[i]);
  return s;
}

double GeodesicPath::l1_length() const {
  double s = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i)
    s += std::abs(points[i].x - points[i - 1].x) + std::abs(points[i].y - points[i - 1].y);
  return s;
}

GeodesicSolver::GeodesicSolver(const Triangulation& tri) : tri_(&tri) {
  const std::size_t m = tri.triangles.size();
  parent_.assign(m, m);
  parent_side_.assign(m, -1);
  depth_.assign(m, 0);
  std::vector<char> seen(m, 0);
  std::vector<std::size_t> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t t = queue[head];
    for (int k = 0; k < 3; ++k) {
      const auto nb = tri.neighbor[t][k];
      if (!nb || seen[*nb]) continue;
      seen[*nb] = 1;
      parent_[*nb] = t;
      depth_[*nb] = depth_[t] + 1;
      for (int j = 0; j < 3; ++j)
        if (tri.neighbor[*nb][j] == t) parent_side_[*nb] = j;
      queue.push_back(*nb);
    }
  }
  if (queue.size() != m) throw GeometryError("triangulation dual graph is disconnected");
}

void GeodesicSolver::sleeve(std::size_t tp, std::size_t tq, std::vector<Portal>& portals) const {
  const auto& tris = tri_->triangles;
  const auto& pts = tri_->corners.pts;
  // Leaving triangle t through its side k: left end is t[k+1], right end t[k].
  auto leaving = [&](std::size_t t, int k) {
    const std::size_t r = tris[t][k], l = tris[t][(k + 1) % 3];
    return Portal{pts[l], pts[r], l, r};
  };
  std::size_t a = tp, b = tq;
  down_.clear();
  while (depth_[a] > depth_[b]) {
    portals.push_back(leaving(a, parent_side_[a]));
    a = parent_[a];
  }
  while (depth_[b] > depth_[a]) {
    down_.push_back(b);
    b = parent_[b];
  }
  while (a != b) {
    portals.push_back(leaving(a, parent_side_[a]));
    a = parent_[a];
    down_.push_back(b);
    b = parent_[b];
  }
  // Entering child c from its parent: the portal is c's parent side seen from outside.
  for (auto it = down_.rbegin(); it != down_.rend(); ++it) {
    const std::size_t c = *it;
    const int k = parent_side_[c];
    const std::size_t l = tris[c][k], r = tris[c][(k + 1) % 3];
    portals.push_back(Portal{pts[l], pts[r], l, r});
  }
}

void GeodesicSolver::path(const Point2& p, std::size_t tp, const Point2& q, std::size_t tq,
                          GeodesicPath& out) const {
  out.points.clear();
  out.corners.clear();
  out.points.push_back(p);
  out.corners.push_back(kNotACorner);
  if (tp == tq) {
    out.points.push_back(q);
    out.corners.push_back(kNotACorner);
    return;
  }
  auto& portals = portals_;
  portals.clear();
  portals.push_back(Portal{p, p, kNotACorner, kNotACorner});
  sleeve(tp, tq, portals);
  portals.push_back(Portal{q, q, kNotACorner, kNotACorner});

  auto emit = [&out](const Point2& x, std::size_t id) {
    if (out.points.back() == x) return;
    out.points.push_back(x);
    out.corners.push_back(id);
  };
  Point2 apex = p, left = p, right = p;
  std::size_t apex_i = 0, left_i = 0, right_i = 0;
  for (std::size_t i = 1; i < portals.size(); ++i) {
    const Portal& pt = portals[i];
    // Tighten the right side.
    if (orient(apex, right, pt.right) >= 0) {
      if (apex == right || orient(apex, left, pt.right) < 0) {
        right = pt.right;
        right_i = i;
      } else {
        emit(left, portals[left_i].left_id);
        apex = left;
        apex_i = left_i;
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    // Tighten the left side.
    if (orient(apex, left, pt.left) <= 0) {
      if (apex == left || orient(apex, right, pt.left) > 0) {
        left = pt.left;
        left_i = i;
      } else {
        emit(right, portals[right_i].right_id);
        apex = right;
        apex_i = right_i;
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  emit(q, kNotACorner);
}

GeodesicPath GeodesicSolver::path(const Point2& p, const Point2& q) const {
  const auto tp = tri_->locate(p);
  const auto tq = tri_->locate(q);
  if (!tp || !tq) throw GeometryError("geodesic endpoint outside the polygon");
  GeodesicPath out;
  path(p, *tp, q, *tq, out);
  return out;
}

GeodesicPath geodesic(const PolygonWithHoles& poly, const Point2& p, const Point2& q) {
  if (!poly.holes.empty()) throw GeometryError("geodesics need a simple polygon");
  const Triangulation tri = triangulate(poly);
  return GeodesicSolver(tri).path(p, q);
}

}  // namespace polyvis
