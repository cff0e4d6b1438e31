#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyvis/geom.hpp"
#include "polyvis/numeric.hpp"

namespace polyvis {

CornerTable::CornerTable(const PolygonWithHoles& poly) {
  auto add_ring = [this](const Ring& r, std::size_t ring_id) {
    const std::size_t base = pts.size();
    const std::size_t k = r.size();
    for (std::size_t i = 0; i < k; ++i) {
      pts.push_back(r[i]);
      next.push_back(base + (i + 1) % k);
      prev.push_back(base + (i + k - 1) % k);
      ring.push_back(ring_id);
    }
  };
  add_ring(poly.outer, 0);
  for (std::size_t h = 0; h < poly.holes.size(); ++h) add_ring(poly.holes[h], h + 1);
}

bool CornerTable::is_reflex(std::size_t i) const {
  return orient(pts[prev[i]], pts[i], pts[next[i]]) < 0;
}

bool CornerTable::in_wedge(std::size_t i, const Point2& t) const {
  const Point2& c = pts[i];
  const Point2& p = pts[prev[i]];
  const Point2& n = pts[next[i]];
  const bool left_of_in = orient(p, c, t) >= 0;
  const bool left_of_out = orient(c, n, t) >= 0;
  return is_reflex(i) ? (left_of_in || left_of_out) : (left_of_in && left_of_out);
}

bool CornerTable::in_wedge_dir(std::size_t i, const Point2& from, const Point2& to) const {
  const Point2& c = pts[i];
  const Point2& p = pts[prev[i]];
  const Point2& n = pts[next[i]];
  // orient(p, c, c + (to - from)) == cross_sign(p, c, from, to)
  const bool left_of_in = cross_sign(p, c, from, to) >= 0;
  const bool left_of_out = cross_sign(c, n, from, to) >= 0;
  return is_reflex(i) ? (left_of_in || left_of_out) : (left_of_in && left_of_out);
}

namespace {

struct RingHit {
  bool inside = false;
  bool on_boundary = false;
};

RingHit ring_contains(const Ring& r, const Point2& p) {
  RingHit hit;
  const std::size_t k = r.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point2& a = r[i];
    const Point2& b = r[(i + 1) % k];
    if (point_on_segment(a, b, p)) {
      hit.on_boundary = true;
      return hit;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const int o = orient(a, b, p);
      if ((b.y > a.y && o > 0) || (b.y < a.y && o < 0)) hit.inside = !hit.inside;
    }
  }
  return hit;
}

std::vector<const Ring*> all_rings(const PolygonWithHoles& poly) {
  std::vector<const Ring*> rings{&poly.outer};
  for (const auto& h : poly.holes) rings.push_back(&h);
  return rings;
}

std::string fmt_point(const Point2& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p.x << ", " << p.y << ")";
  return os.str();
}

}  // namespace

bool contains_point(const PolygonWithHoles& poly, const Point2& p) {
  bool inside = false;
  for (const Ring* r : all_rings(poly)) {
    const RingHit h = ring_contains(*r, p);
    if (h.on_boundary) return true;
    if (h.inside) inside = !inside;
  }
  return inside;
}

bool segment_in_polygon(const PolygonWithHoles& poly, const Point2& p, const Point2& q) {
  return segment_in_polygon(CornerTable(poly), p, q);
}

bool segment_in_polygon(const CornerTable& ct, const Point2& p, const Point2& q) {
  if (p == q) return true;
  const std::size_t n = ct.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ct.pts[i];
    const Point2& b = ct.pts[ct.next[i]];
    const int o1 = orient(p, q, a);
    const int o2 = orient(p, q, b);
    const int o3 = orient(a, b, p);
    const int o4 = orient(a, b, q);
    if (o1 * o2 < 0 && o3 * o4 < 0) return false;
    // An endpoint resting on the interior of this edge must look inward.
    if (o3 == 0 && p != a && p != b && point_on_segment(a, b, p) && o4 < 0) return false;
    if (o4 == 0 && q != a && q != b && point_on_segment(a, b, q) && o3 < 0) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& w = ct.pts[i];
    if (w == p) {
      if (!ct.in_wedge(i, q)) return false;
    } else if (w == q) {
      if (!ct.in_wedge(i, p)) return false;
    } else if (point_on_segment(p, q, w)) {
      if (!ct.in_wedge(i, p) || !ct.in_wedge(i, q)) return false;
    }
  }
  return true;
}

bool normalize_orientation(PolygonWithHoles& poly) {
  bool changed = false;
  if (ring_area(poly.outer) < 0) {
    poly.outer = reversed(poly.outer);
    changed = true;
  }
  for (auto& h : poly.holes) {
    if (ring_area(h) > 0) {
      h = reversed(h);
      changed = true;
    }
  }
  return changed;
}

bool ValidationReport::has(IssueKind k) const {
  return std::any_of(issues.begin(), issues.end(), [k](const auto& i) { return i.kind == k; });
}

const char* to_string(IssueKind k) {
  switch (k) {
    case IssueKind::TooFewVertices: return "too_few_vertices";
    case IssueKind::RepeatedVertex: return "repeated_vertex";
    case IssueKind::SelfIntersection: return "self_intersection";
    case IssueKind::Orientation: return "orientation";
    case IssueKind::HoleOutside: return "hole_outside";
    case IssueKind::HolesIntersect: return "holes_intersect";
    case IssueKind::Collinear: return "collinear";
    case IssueKind::DuplicateX: return "duplicate_x";
    case IssueKind::DuplicateY: return "duplicate_y";
    case IssueKind::NonFinite: return "non_finite";
  }
  return "unknown";
}

namespace {

// Sorts the other corners around c by direction modulo pi and reports the
// first triple found on one line. O(n log n) per corner.
std::optional<std::string> find_collinear_through(const std::vector<Point2>& pts, std::size_t c) {
  struct Dir {
    std::size_t idx;
    bool flipped;
  };
  const Point2& o = pts[c];
  std::vector<Dir> dirs;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == c) continue;
    const Vector2 d = pts[i] - o;
    dirs.push_back({i, d.dy < 0 || (d.dy == 0 && d.dx < 0)});
  }
  auto cmp_sign = [&](const Dir& a, const Dir& b) {
    int s = cross_sign(o, pts[a.idx], o, pts[b.idx]);
    if (a.flipped != b.flipped) s = -s;
    return s;
  };
  std::sort(dirs.begin(), dirs.end(), [&](const Dir& a, const Dir& b) { return cmp_sign(a, b) > 0; });
  for (std::size_t i = 0; i + 1 < dirs.size(); ++i) {
    if (cmp_sign(dirs[i], dirs[i + 1]) == 0) {
      return "corners " + fmt_point(o) + ", " + fmt_point(pts[dirs[i].idx]) + ", " +
             fmt_point(pts[dirs[i + 1].idx]) + " are collinear";
    }
  }
  return std::nullopt;
}

bool segments_touch(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  return !std::holds_alternative<Disjoint>(segment_intersect(Segment(a, b), Segment(c, d)));
}

}  // namespace

ValidationReport validate_polygon(const PolygonWithHoles& poly, bool require_distinct_axes) {
  ValidationReport rep;
  auto add = [&rep](IssueKind k, std::string msg) { rep.issues.push_back({k, std::move(msg)}); };

  const auto rings = all_rings(poly);
  for (std::size_t r = 0; r < rings.size(); ++r) {
    if (rings[r]->size() < 3) {
      add(IssueKind::TooFewVertices, "ring " + std::to_string(r) + " has fewer than 3 vertices");
      rep.simple = false;
    }
    for (const auto& p : *rings[r]) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        add(IssueKind::NonFinite, "non-finite coordinate in ring " + std::to_string(r));
        rep.simple = false;
      }
    }
  }
  if (!rep.ok()) return rep;

  const CornerTable ct(poly);
  const std::size_t n = ct.size();

  {
    std::vector<Point2> sorted = ct.pts;
    std::sort(sorted.begin(), sorted.end(),
              [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (sorted[i] == sorted[i + 1]) {
        add(IssueKind::RepeatedVertex, "repeated vertex " + fmt_point(sorted[i]));
        rep.simple = false;
        return rep;
      }
    }
  }

  // Edge i and edge j intersect only if they are consecutive on one ring and
  // then only in their shared corner.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = ct.pts[i];
    const Point2& b = ct.pts[ct.next[i]];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2& c = ct.pts[j];
      const Point2& d = ct.pts[ct.next[j]];
      const bool same_ring = ct.ring[i] == ct.ring[j];
      if (same_ring && (ct.next[i] == j || ct.next[j] == i)) {
        // Consecutive edges: reject a fold-back onto the shared line.
        const std::size_t shared = ct.next[i] == j ? j : i;
        const Point2& s = ct.pts[shared];
        const Point2& before = ct.pts[ct.prev[shared]];
        const Point2& after = ct.pts[ct.next[shared]];
        if (orient(before, s, after) == 0 && dot_sign(s, before, s, after) > 0) {
          add(IssueKind::SelfIntersection, "ring folds back at " + fmt_point(s));
          rep.simple = false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d)) {
        if (same_ring) {
          add(IssueKind::SelfIntersection,
              "edges at " + fmt_point(a) + " and " + fmt_point(c) + " intersect");
          rep.simple = false;
        } else {
          add(IssueKind::HolesIntersect,
              "ring boundaries touch near " + fmt_point(a) + " and " + fmt_point(c));
          rep.holes_ok = false;
        }
      }
    }
  }

  if (ring_area(poly.outer) <= 0) {
    add(IssueKind::Orientation, "outer ring is not counterclockwise");
    rep.oriented = false;
  }
  for (std::size_t h = 0; h < poly.holes.size(); ++h) {
    if (ring_area(poly.holes[h]) >= 0) {
      add(IssueKind::Orientation, "hole " + std::to_string(h) + " is not clockwise");
      rep.oriented = false;
    }
  }

  if (rep.simple && rep.holes_ok) {
    for (std::size_t h = 0; h < poly.holes.size(); ++h) {
      const Point2& probe = poly.holes[h].front();
      if (!ring_contains(poly.outer, probe).inside) {
        add(IssueKind::HoleOutside, "hole " + std::to_string(h) + " is not inside the outer ring");
        rep.holes_ok = false;
      }
      for (std::size_t g = 0; g < poly.holes.size(); ++g) {
        if (g != h && ring_contains(poly.holes[g], probe).inside) {
          add(IssueKind::HolesIntersect,
              "hole " + std::to_string(h) + " lies inside hole " + std::to_string(g));
          rep.holes_ok = false;
        }
      }
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    if (auto msg = find_collinear_through(ct.pts, c)) {
      add(IssueKind::Collinear, *msg);
      rep.general_position = false;
      break;
    }
  }

  if (require_distinct_axes) {
    std::vector<double> xs, ys;
    for (const auto& p : ct.pts) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
      add(IssueKind::DuplicateX, "two corners share an x-coordinate");
      rep.distinct_axes = false;
    }
    if (std::adjacent_find(ys.begin(), ys.end()) != ys.end()) {
      add(IssueKind::DuplicateY, "two corners share a y-coordinate");
      rep.distinct_axes = false;
    }
  }
  return rep;
}

void require_valid(const ValidationReport& report) {
  if (!report.ok()) throw GeometryError(report.issues.front().message);
}

void require_simple(const ValidationReport& report) {
  for (const auto& issue : report.issues) {
    if (issue.kind == IssueKind::Collinear || issue.kind == IssueKind::DuplicateX ||
        issue.kind == IssueKind::DuplicateY)
      continue;
    throw GeometryError(issue.message);
  }
}

PolygonWithHoles perturb(const PolygonWithHoles& poly, double eps, std::uint64_t seed) {
  PolygonWithHoles out = poly;
  std::uint64_t k = 0;
  auto move = [&](Point2& p) {
    const double dx = (2 * counter_uniform(seed, k++) - 1) * eps;
    const double dy = (2 * counter_uniform(seed, k++) - 1) * eps;
    p = {p.x + dx, p.y + dy};
  };
  for (auto& p : out.outer) move(p);
  for (auto& h : out.holes)
    for (auto& p : h) move(p);
  return out;
}

}  // namespace polyvis
