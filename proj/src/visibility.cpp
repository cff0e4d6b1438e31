#include "polyvis/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace polyvis {
namespace {

struct SegmentView {
  const CornerTable& ct;
  std::optional<std::pair<std::size_t, std::size_t>> extra;

  std::size_t count() const { return ct.size() + (extra ? 1 : 0); }
  std::size_t first(std::size_t id) const { return id < ct.size() ? id : extra->first; }
  std::size_t second(std::size_t id) const { return id < ct.size() ? ct.next[id] : extra->second; }
  const Point2& a(std::size_t id) const { return ct.pts[first(id)]; }
  const Point2& b(std::size_t id) const { return ct.pts[second(id)]; }
  bool incident(std::size_t id, std::size_t corner) const {
    return first(id) == corner || second(id) == corner;
  }
};

// Strict "nearer to p along any common ray" order on pairwise noncrossing
// segments. s2 is nearer when it lies entirely on p's side of line(s1).
struct NearerThan {
  const SegmentView* segs;
  Point2 p;

  bool operator()(std::size_t s1, std::size_t s2) const {
    if (s1 == s2) return false;
    const Point2& a1 = segs->a(s1);
    const Point2& b1 = segs->b(s1);
    const Point2& a2 = segs->a(s2);
    const Point2& b2 = segs->b(s2);
    const int side_p = orient(a1, b1, p);
    const int sa = orient(a1, b1, a2) * side_p;
    const int sb = orient(a1, b1, b2) * side_p;
    if (sa >= 0 && sb >= 0 && (sa | sb) != 0) return false;
    if (sa <= 0 && sb <= 0 && (sa | sb) != 0) return true;
    // s2 straddles line(s1); decide from the other side.
    const int side_p2 = orient(a2, b2, p);
    const int ta = orient(a2, b2, a1) * side_p2;
    const int tb = orient(a2, b2, b1) * side_p2;
    return ta >= 0 && tb >= 0;
  }
};

// Counterclockwise order of directions from p, starting at the ray p -> s.
struct AngleFrom {
  Point2 p;
  Point2 s;

  int half(const Point2& x) const {
    const int o = orient(p, s, x);
    if (o > 0) return 0;
    if (o < 0) return 1;
    return dot_sign(p, s, p, x) > 0 ? 0 : 1;
  }
  bool operator()(const Point2& x, const Point2& y) const {
    const int hx = half(x), hy = half(y);
    if (hx != hy) return hx < hy;
    const int o = orient(p, x, y);
    if (o != 0) return o > 0;
    return dot_sign(x, y, p, x) > 0;  // same ray: nearer first
  }
};

bool on_ray(const Point2& p, const Point2& s, const Point2& x) {
  return orient(p, s, x) == 0 && dot_sign(p, s, p, x) > 0;
}

}  // namespace

std::optional<std::size_t> corner_at(const CornerTable& ct, const Point2& p) {
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (ct.pts[i] == p) return i;
  return std::nullopt;
}

std::vector<SweepEvent> radial_sweep(const CornerTable& ct, const Point2& p, const SweepOptions& opt) {
  const std::size_t n = ct.size();
  const SegmentView segs{ct, opt.extra};
  const std::optional<std::size_t> self = opt.self ? opt.self : corner_at(ct, p);

  std::size_t start = 0;
  std::optional<std::size_t> stop;
  if (opt.range) {
    start = opt.range->first;
    stop = opt.range->second;
  } else if (self) {
    start = ct.next[*self];
    stop = ct.prev[*self];
  }
  const Point2 s = ct.pts[start];
  const AngleFrom by_angle{p, s};

  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!self || i != *self) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return by_angle(ct.pts[i], ct.pts[j]); });
  if (stop) {
    auto it = std::find(order.begin(), order.end(), *stop);
    if (it == order.end()) throw GeometryError("sweep range end is not a corner");
    order.erase(it + 1, order.end());
  }

  auto skip = [&](std::size_t id) { return self && segs.incident(id, *self); };

  std::set<std::size_t, NearerThan> active(NearerThan{&segs, p});
  for (std::size_t id = 0; id < segs.count(); ++id) {
    if (skip(id)) continue;
    const Point2& a = segs.a(id);
    const Point2& b = segs.b(id);
    const int oa = orient(p, s, a);
    const int ob = orient(p, s, b);
    bool crosses = false;
    if (oa < 0 && ob > 0) crosses = orient(a, b, p) > 0;
    else if (oa > 0 && ob < 0) crosses = orient(b, a, p) > 0;
    else if (on_ray(p, s, a) && ob < 0) crosses = true;
    else if (on_ray(p, s, b) && oa < 0) crosses = true;
    if (crosses) active.insert(id);
  }

  auto front = [&]() -> std::optional<std::size_t> {
    if (active.empty()) return std::nullopt;
    return *active.begin();
  };

  std::vector<SweepEvent> events;
  events.reserve(order.size());
  std::size_t incident[3];
  for (std::size_t w : order) {
    std::size_t k = 0;
    incident[k++] = w;
    incident[k++] = ct.prev[w];
    if (opt.extra && (opt.extra->first == w || opt.extra->second == w)) incident[k++] = n;

    SweepEvent ev;
    ev.corner = w;
    ev.front_before = front();
    const Point2& pw = ct.pts[w];
    int side[3];
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t id = incident[j];
      const std::size_t other = segs.first(id) == w ? segs.second(id) : segs.first(id);
      side[j] = skip(id) ? 0 : orient(p, pw, ct.pts[other]);
      if (side[j] < 0) {
        auto it = active.find(id);
        if (it != active.end() && *it == id) active.erase(it);
      }
    }
    ev.front_at = front();
    if (!ev.front_at) {
      ev.visible = true;
    } else {
      const Point2& a = segs.a(*ev.front_at);
      const Point2& b = segs.b(*ev.front_at);
      ev.visible = orient(a, b, pw) * orient(a, b, p) >= 0;
    }
    for (std::size_t j = 0; j < k; ++j)
      if (side[j] > 0) active.insert(incident[j]);
    ev.front_after = front();
    events.push_back(ev);
  }
  return events;
}

Point2 ray_hit(const CornerTable& ct, const Point2& p, const Point2& w, std::size_t s,
               const std::optional<std::pair<std::size_t, std::size_t>>& extra) {
  const SegmentView segs{ct, extra};
  const Point2& a = segs.a(s);
  const Point2& b = segs.b(s);
  const auto t = ray_line_parameter(p, w - p, a, b);
  if (!t) return a;
  return p + (*t) * (w - p);
}

std::vector<Point2> visibility_polygon(const PolygonWithHoles& poly, const Point2& p) {
  if (!contains_point(poly, p)) throw GeometryError("viewpoint outside the polygon");
  return visibility_polygon(CornerTable(poly), p);
}

std::vector<Point2> visibility_polygon(const CornerTable& ct, const Point2& p) {
  const SegmentView segs{ct, std::nullopt};
  const auto self = corner_at(ct, p);
  SweepOptions opt;
  opt.self = self;
  const auto events = radial_sweep(ct, p, opt);

  std::vector<Point2> out;
  auto push = [&out](const Point2& q) {
    if (out.empty() || !(out.back() == q)) out.push_back(q);
  };
  auto incident = [&](const std::optional<std::size_t>& s, std::size_t w) {
    return s && segs.incident(*s, w);
  };
  if (self) push(p);
  for (std::size_t k = 0; k < events.size(); ++k) {
    const SweepEvent& ev = events[k];
    if (!ev.visible) continue;
    const std::size_t w = ev.corner;
    const Point2& pw = ct.pts[w];
    const bool first = self && k == 0;
    const bool last = self && k + 1 == events.size();
    if (first) {
      push(pw);
      if (ev.front_after && !incident(ev.front_after, w)) push(ray_hit(ct, p, pw, *ev.front_after));
    } else if (last) {
      if (ev.front_before && !incident(ev.front_before, w)) push(ray_hit(ct, p, pw, *ev.front_before));
      push(pw);
    } else if (incident(ev.front_before, w)) {
      push(pw);
      if (ev.front_after && !incident(ev.front_after, w)) push(ray_hit(ct, p, pw, *ev.front_after));
    } else if (incident(ev.front_after, w)) {
      if (ev.front_before) push(ray_hit(ct, p, pw, *ev.front_before));
      push(pw);
    } else {
      push(pw);
    }
  }
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

FanTable::FanTable(const CornerTable& ct) : ct_(ct), fans_(ct.size()) {
  const std::size_t n = ct.size();
  for (std::size_t c = 0; c < n; ++c) {
    DiagonalFan& fan = fans_[c];
    fan.corner = c;
    const Point2& pc = ct.pts[c];
    SweepOptions opt;
    opt.self = c;
    for (const SweepEvent& ev : radial_sweep(ct, pc, opt)) {
      if (!ev.visible) continue;
      const std::size_t w = ev.corner;
      fan.to.push_back(w);
      if (ct.in_wedge_dir(w, pc, ct.pts[w])) {
        if (!ev.front_at) throw GeometryError("extension leaves the polygon");
        fan.beyond_edge.push_back(ev.front_at);
        fan.beyond.push_back(ray_hit(ct, pc, ct.pts[w], *ev.front_at));
      } else {
        fan.beyond_edge.push_back(std::nullopt);
        fan.beyond.push_back(ct.pts[w]);
      }
    }
    const std::size_t m = fan.to.size();
    for (std::size_t i = 0; i < m; ++i) index_[c * n + fan.to[i]] = i;

    // Successors: cyclic order of the diagonals' lines, angles taken mod pi.
    std::vector<int> flip(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Point2& q = ct.pts[fan.to[i]];
      const bool upper = q.y > pc.y || (q.y == pc.y && q.x > pc.x);
      flip[i] = upper ? 1 : -1;
    }
    std::vector<std::size_t> by_line(m);
    std::iota(by_line.begin(), by_line.end(), 0);
    std::sort(by_line.begin(), by_line.end(), [&](std::size_t i, std::size_t j) {
      return flip[i] * flip[j] * cross_sign(pc, ct.pts[fan.to[i]], pc, ct.pts[fan.to[j]]) > 0;
    });
    fan.successor.assign(m, 0);
    for (std::size_t k = 0; k < m; ++k) fan.successor[by_line[k]] = by_line[(k + 1) % m];

    fan.eta.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t b = fan.to[i];
      const std::size_t after = ct.next[b];
      if (after == c || orient(pc, ct.pts[b], ct.pts[after]) > 0) {
        fan.eta[i] = b;
      } else {
        if (!fan.beyond_edge[i]) throw GeometryError("eta edge undefined (degenerate input)");
        fan.eta[i] = *fan.beyond_edge[i];
      }
    }
  }
}

std::optional<std::size_t> FanTable::find(std::size_t c, std::size_t d) const {
  auto it = index_.find(c * fans_.size() + d);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FanTable::successor(std::size_t c, std::size_t d) const {
  const auto i = find(c, d);
  if (!i) throw GeometryError("not a diagonal");
  return fans_[c].to[fans_[c].successor[*i]];
}

std::size_t FanTable::eta(std::size_t a, std::size_t b) const {
  const auto i = find(a, b);
  if (!i) throw GeometryError("not a diagonal");
  return fans_[a].eta[*i];
}

std::size_t FanTable::diagonal_count() const {
  std::size_t total = 0;
  for (const auto& f : fans_) total += f.to.size();
  return total / 2;
}

Segment extension(const FanTable& fans, std::size_t a, std::size_t b) {
  const auto i = fans.find(a, b);
  if (!i) throw GeometryError("not a diagonal");
  const Point2& pb = fans.corners().pts[b];
  const DiagonalFan& f = fans.fan(a);
  if (!f.beyond_edge[*i]) return Segment::zero_length(pb);
  return Segment(pb, f.beyond[*i]);
}

std::pair<Point2, std::size_t> ray_shoot(const CornerTable& ct, const Point2& p, const Vector2& d) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_edge = ct.size();
  for (std::size_t e = 0; e < ct.size(); ++e) {
    const Point2& a = ct.pts[e];
    const Point2& b = ct.pts[ct.next[e]];
    if (point_on_segment(a, b, p)) continue;
    const double den = cross(d, b - a);
    if (den == 0.0) continue;
    const double t = cross(a - p, b - a) / den;
    const double u = cross(a - p, d) / den;
    if (t > 0.0 && u >= 0.0 && u <= 1.0 && t < best) {
      best = t;
      best_edge = e;
    }
  }
  if (best_edge == ct.size()) throw GeometryError("ray does not hit the boundary");
  return {p + best * d, best_edge};
}

Segment extension_from_point(const CornerTable& ct, const Point2& a, std::size_t b) {
  const Point2& pb = ct.pts[b];
  if (!ct.in_wedge_dir(b, a, pb)) return Segment::zero_length(pb);
  return Segment(pb, ray_shoot(ct, pb, pb - a).first);
}

std::optional<std::pair<double, double>> visible_part_of_segment(const CornerTable& ct,
                                                                 const Point2& p, std::size_t u,
                                                                 std::size_t v) {
  const int o = orient(p, ct.pts[u], ct.pts[v]);
  if (o == 0) throw GeometryError("viewpoint on the line of the segment");
  const bool swapped = o < 0;
  if (swapped) std::swap(u, v);
  const Point2& pu = ct.pts[u];
  const Point2& pv = ct.pts[v];
  const std::size_t extra_id = ct.size();

  SweepOptions opt;
  opt.self = corner_at(ct, p);
  opt.extra = std::make_pair(u, v);
  opt.range = std::make_pair(u, v);
  const auto events = radial_sweep(ct, p, opt);

  auto param = [&](std::size_t w) {
    if (w == u) return 0.0;
    if (w == v) return 1.0;
    const Vector2 d = ct.pts[w] - p;
    return std::clamp(cross(d, p - pu) / cross(d, pv - pu), 0.0, 1.0);
  };
  const auto self = opt.self;
  auto sees_dir = [&](std::size_t w) { return !self || ct.in_wedge(*self, ct.pts[w]); };
  // Whether rays just counterclockwise of the ray through w point into the wedge.
  auto inside_after = [&](std::size_t w) {
    if (!self) return true;
    if (w == ct.next[*self]) return true;
    if (w == ct.prev[*self]) return false;
    return ct.in_wedge(*self, ct.pts[w]);
  };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double s) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  };
  bool inside = !self || ct.in_wedge(*self, pu);
  if (self && u == ct.prev[*self]) inside = false;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const SweepEvent& ev = events[k];
    const std::size_t w = ev.corner;
    if ((w == u || w == v) && ev.visible && sees_dir(w)) take(param(w));
    if (self && (w == ct.next[*self] || w == ct.prev[*self] || w == u)) inside = inside_after(w);
    if (k + 1 < events.size() && inside && ev.front_after == extra_id) {
      take(param(w));
      take(param(events[k + 1].corner));
    }
  }
  if (lo > hi) return std::nullopt;
  if (swapped) return std::make_pair(1.0 - hi, 1.0 - lo);
  return std::make_pair(lo, hi);
}

}  // namespace polyvis
