#include "polyvis/trapezoidation.hpp"

#include <algorithm>
#include <map>

namespace polyvis {

double VerticalTrapezoid::side_moment(int side) const {
  const double w = width(), h0 = height0(), h1 = height1();
  return side == 0 ? w * w * (h0 + 2 * h1) / 6 : w * w * (2 * h0 + h1) / 6;
}

double VerticalTrapezoid::self_pair_integral() const {
  const double w = width(), a = height0(), b = height1() - height0();
  return w * w * w * (a * a / 3 + a * b / 3 + b * b / 15);
}

void VerticalTrapezoidation::reroot(std::size_t r) {
  root = r;
  for (auto& t : traps) {
    t.parent = -1;
    t.children.clear();
  }
  order.assign(1, r);
  std::vector<char> seen(traps.size(), 0);
  seen[r] = 1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t t = order[k];
    for (std::size_t c : neighbors[t]) {
      if (seen[c]) continue;
      seen[c] = 1;
      traps[c].parent = static_cast<int>(t);
      traps[c].parent_side = traps[c].x0 == traps[t].x1 ? 0 : 1;
      traps[t].children.push_back(c);
      order.push_back(c);
    }
  }
  if (order.size() != traps.size()) throw GeometryError("trapezoid adjacency is not connected");
}

VerticalTrapezoidation vertical_trapezoidation(const PolygonWithHoles& poly) {
  require_simple(validate_polygon(poly));
  if (!poly.holes.empty()) throw GeometryError("vertical trapezoidation needs a polygon without holes");
  VerticalTrapezoidation vt{CornerTable(poly)};
  const CornerTable& ct = vt.corners;
  const std::size_t n = ct.size();

  std::vector<double> xs;
  for (const auto& p : ct.pts) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw GeometryError("two corners share an x coordinate");

  auto y_at = [&](std::size_t e, double x) {
    const Point2& a = ct.pts[e];
    const Point2& b = ct.pts[ct.next[e]];
    if (x == a.x) return a.y;
    if (x == b.x) return b.y;
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
  };
  // Edges spanning one slab never cross inside it; shared endpoints are
  // ordered exactly.
  auto below = [&](std::size_t e1, std::size_t e2, double xm) {
    const std::size_t a1 = e1, b1 = ct.next[e1], a2 = e2, b2 = ct.next[e2];
    std::size_t c = n, o1 = n, o2 = n;
    if (a1 == a2) c = a1, o1 = b1, o2 = b2;
    else if (a1 == b2) c = a1, o1 = b1, o2 = a2;
    else if (b1 == a2) c = b1, o1 = a1, o2 = b2;
    else if (b1 == b2) c = b1, o1 = a1, o2 = a2;
    if (c < n) {
      const int o = orient(ct.pts[c], ct.pts[o1], ct.pts[o2]);
      return ct.pts[o1].x > ct.pts[c].x ? o > 0 : o < 0;
    }
    return y_at(e1, xm) < y_at(e2, xm);
  };

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> open;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double xa = xs[k], xb = xs[k + 1], xm = 0.5 * (xa + xb);
    std::vector<std::size_t> cut;
    for (std::size_t e = 0; e < n; ++e) {
      const double ax = ct.pts[e].x, bx = ct.pts[ct.next[e]].x;
      if (std::min(ax, bx) <= xa && std::max(ax, bx) >= xb) cut.push_back(e);
    }
    std::sort(cut.begin(), cut.end(), [&](std::size_t a, std::size_t b) { return below(a, b, xm); });
    if (cut.size() % 2) throw GeometryError("vertical trapezoidation: odd slab crossing");
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> next_open;
    for (std::size_t i = 0; i < cut.size(); i += 2) {
      const auto key = std::make_pair(cut[i], cut[i + 1]);
      auto it = open.find(key);
      std::size_t id;
      if (it != open.end()) {
        id = it->second;
      } else {
        id = vt.traps.size();
        VerticalTrapezoid t;
        t.x0 = xa;
        t.bottom = key.first;
        t.top = key.second;
        vt.traps.push_back(t);
      }
      vt.traps[id].x1 = xb;
      next_open[key] = id;
    }
    open = std::move(next_open);
  }

  for (auto& t : vt.traps) {
    t.bottom0 = y_at(t.bottom, t.x0);
    t.top0 = y_at(t.top, t.x0);
    t.bottom1 = y_at(t.bottom, t.x1);
    t.top1 = y_at(t.top, t.x1);
  }

  // Trapezoids ending at x and those starting there are adjacent when their
  // sides overlap in more than a point.
  vt.neighbors.assign(vt.traps.size(), {});
  std::map<double, std::vector<std::size_t>> ending, starting;
  for (std::size_t i = 0; i < vt.traps.size(); ++i) {
    ending[vt.traps[i].x1].push_back(i);
    starting[vt.traps[i].x0].push_back(i);
  }
  for (const auto& [x, left] : ending) {
    auto it = starting.find(x);
    if (it == starting.end()) continue;
    for (std::size_t a : left)
      for (std::size_t b : it->second) {
        const auto& ta = vt.traps[a];
        const auto& tb = vt.traps[b];
        if (std::max(ta.bottom1, tb.bottom0) < std::min(ta.top1, tb.top0)) {
          vt.neighbors[a].push_back(b);
          vt.neighbors[b].push_back(a);
        }
      }
  }
  vt.reroot(0);
  return vt;
}

}  // namespace polyvis
