#include "polyvis/triangulation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace polyvis {
namespace {

// Sweep order: higher y first, ties broken by smaller x.
bool above(const Point2& a, const Point2& b) { return a.y > b.y || (a.y == b.y && a.x < b.x); }

enum class Kind { Start, Split, End, Merge, Regular };

// Status of the monotone-decomposition sweep: downward edges ordered left to
// right. Keys are edge ids; the edge id runs from pts[id] down to pts[next[id]].
struct LeftToRight {
  using is_transparent = void;
  const CornerTable* ct;

  const Point2& top(std::size_t e) const { return ct->pts[e]; }
  const Point2& bot(std::size_t e) const { return ct->pts[ct->next[e]]; }

  bool operator()(std::size_t e1, std::size_t e2) const {
    if (e1 == e2) return false;
    if (!above(top(e1), top(e2))) {
      const int o = orient(bot(e2), top(e2), top(e1));
      if (o != 0) return o > 0;
      return orient(bot(e2), top(e2), bot(e1)) > 0;
    }
    const int o = orient(bot(e1), top(e1), top(e2));
    if (o != 0) return o < 0;
    return orient(bot(e1), top(e1), bot(e2)) < 0;
  }
  bool operator()(std::size_t e, const Point2& v) const { return orient(bot(e), top(e), v) < 0; }
  bool operator()(const Point2& v, std::size_t e) const { return orient(bot(e), top(e), v) > 0; }
};

std::vector<std::pair<std::size_t, std::size_t>> monotone_diagonals(const CornerTable& ct) {
  const std::size_t n = ct.size();
  std::vector<Kind> kind(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& v = ct.pts[i];
    const Point2& p = ct.pts[ct.prev[i]];
    const Point2& q = ct.pts[ct.next[i]];
    const bool convex = orient(p, v, q) > 0;
    if (above(v, p) && above(v, q)) kind[i] = convex ? Kind::Start : Kind::Split;
    else if (above(p, v) && above(q, v)) kind[i] = convex ? Kind::End : Kind::Merge;
    else kind[i] = Kind::Regular;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return above(ct.pts[a], ct.pts[b]); });

  std::set<std::size_t, LeftToRight> status(LeftToRight{&ct});
  std::vector<std::size_t> helper(n, n);
  std::vector<std::pair<std::size_t, std::size_t>> diags;
  auto connect_if_merge = [&](std::size_t v, std::size_t e) {
    if (helper[e] < n && kind[helper[e]] == Kind::Merge) diags.emplace_back(v, helper[e]);
  };
  auto left_of = [&](std::size_t v) {
    auto it = status.lower_bound(ct.pts[v]);
    if (it == status.begin()) throw GeometryError("triangulation: no edge left of a vertex");
    return *std::prev(it);
  };

  for (std::size_t v : order) {
    const std::size_t in = ct.prev[v];  // edge arriving at v
    switch (kind[v]) {
      case Kind::Start:
        helper[v] = v;
        status.insert(v);
        break;
      case Kind::End:
        connect_if_merge(v, in);
        status.erase(in);
        break;
      case Kind::Split: {
        const std::size_t e = left_of(v);
        diags.emplace_back(v, helper[e]);
        helper[e] = v;
        helper[v] = v;
        status.insert(v);
        break;
      }
      case Kind::Merge: {
        connect_if_merge(v, in);
        status.erase(in);
        const std::size_t e = left_of(v);
        connect_if_merge(v, e);
        helper[e] = v;
        break;
      }
      case Kind::Regular:
        if (above(ct.pts[ct.prev[v]], ct.pts[v])) {
          connect_if_merge(v, in);
          status.erase(in);
          helper[v] = v;
          status.insert(v);
        } else {
          const std::size_t e = left_of(v);
          connect_if_merge(v, e);
          helper[e] = v;
        }
        break;
    }
  }
  return diags;
}

// Counterclockwise order of neighbours around a vertex.
struct AroundVertex {
  Point2 c;
  int half(const Point2& p) const { return (p.y > c.y || (p.y == c.y && p.x > c.x)) ? 0 : 1; }
  bool operator()(const Point2& a, const Point2& b) const {
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return orient(c, a, b) > 0;
  }
};

void triangulate_monotone(const CornerTable& ct, const std::vector<std::size_t>& face,
                          std::vector<std::array<std::size_t, 3>>& out) {
  const std::size_t m = face.size();
  if (m == 3) {
    out.push_back({face[0], face[1], face[2]});
    return;
  }
  std::size_t top = 0, bottom = 0;
  for (std::size_t k = 1; k < m; ++k) {
    if (above(ct.pts[face[k]], ct.pts[face[top]])) top = k;
    if (above(ct.pts[face[bottom]], ct.pts[face[k]])) bottom = k;
  }
  // Counterclockwise from the top runs down the left chain.
  std::vector<char> left(m, 0);
  for (std::size_t k = top; k != bottom; k = (k + 1) % m) left[k] = 1;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return above(ct.pts[face[a]], ct.pts[face[b]]);
  });

  auto emit = [&](std::size_t a, std::size_t b, std::size_t c) {
    std::array<std::size_t, 3> t{face[a], face[b], face[c]};
    const int o = orient(ct.pts[t[0]], ct.pts[t[1]], ct.pts[t[2]]);
    if (o == 0) throw GeometryError("triangulation produced a degenerate triangle");
    if (o < 0) std::swap(t[1], t[2]);
    out.push_back(t);
  };
  auto valid = [&](std::size_t j, std::size_t a, std::size_t b) {
    const int o = orient(ct.pts[face[j]], ct.pts[face[a]], ct.pts[face[b]]);
    return left[j] ? o < 0 : o > 0;
  };

  std::vector<std::size_t> stack{order[0], order[1]};
  for (std::size_t idx = 2; idx + 1 < m; ++idx) {
    const std::size_t j = order[idx];
    if (left[j] != left[stack.back()]) {
      while (stack.size() > 1) {
        const std::size_t a = stack.back();
        stack.pop_back();
        emit(j, a, stack.back());
      }
      stack.clear();
      stack.push_back(order[idx - 1]);
      stack.push_back(j);
    } else {
      std::size_t a = stack.back();
      stack.pop_back();
      while (!stack.empty() && valid(j, a, stack.back())) {
        const std::size_t b = stack.back();
        stack.pop_back();
        emit(j, a, b);
        a = b;
      }
      stack.push_back(a);
      stack.push_back(j);
    }
  }
  const std::size_t last = order[m - 1];
  while (stack.size() > 1) {
    const std::size_t a = stack.back();
    stack.pop_back();
    emit(last, a, stack.back());
  }
}

}  // namespace

double Triangulation::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point2& a = corners.pts[tri[0]];
  return 0.5 * cross(corners.pts[tri[1]] - a, corners.pts[tri[2]] - a);
}

std::optional<std::size_t> Triangulation::locate(const Point2& p) const {
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    const Point2& a = corners.pts[tri[0]];
    const Point2& b = corners.pts[tri[1]];
    const Point2& c = corners.pts[tri[2]];
    if (orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0) return t;
  }
  return std::nullopt;
}

Triangulation triangulate(const PolygonWithHoles& poly) {
  require_simple(validate_polygon(poly));
  return triangulate(CornerTable(poly));
}

Triangulation triangulate(const CornerTable& ct) {
  const std::size_t n = ct.size();
  Triangulation tri(ct);
  tri.diagonals = monotone_diagonals(ct);

  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    nbr[i].push_back(ct.next[i]);
    nbr[i].push_back(ct.prev[i]);
  }
  for (auto [a, b] : tri.diagonals) {
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  for (std::size_t v = 0; v < n; ++v) {
    AroundVertex around{ct.pts[v]};
    std::sort(nbr[v].begin(), nbr[v].end(),
              [&](std::size_t a, std::size_t b) { return around(ct.pts[a], ct.pts[b]); });
  }

  // Walk the faces to the left of interior half-edges.
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> starts;
  for (std::size_t i = 0; i < n; ++i) starts.emplace_back(i, ct.next[i]);
  for (auto [a, b] : tri.diagonals) {
    starts.emplace_back(a, b);
    starts.emplace_back(b, a);
  }
  for (auto he : starts) {
    if (seen.count(he)) continue;
    std::vector<std::size_t> face;
    auto cur = he;
    while (!seen.count(cur)) {
      seen.insert(cur);
      face.push_back(cur.first);
      const auto& around = nbr[cur.second];
      const auto pos = std::find(around.begin(), around.end(), cur.first) - around.begin();
      const std::size_t w = around[(pos + around.size() - 1) % around.size()];
      cur = {cur.second, w};
      if (face.size() > n) throw GeometryError("triangulation: face walk did not close");
    }
    triangulate_monotone(ct, face, tri.triangles);
  }

  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, int>> side_owner;
  tri.neighbor.assign(tri.triangles.size(), {});
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    for (int k = 0; k < 3; ++k) {
      std::size_t a = tri.triangles[t][k], b = tri.triangles[t][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto it = side_owner.find({a, b});
      if (it == side_owner.end()) {
        side_owner[{a, b}] = {t, k};
      } else {
        tri.neighbor[t][k] = it->second.first;
        tri.neighbor[it->second.first][it->second.second] = t;
      }
    }
  }
  // Report every internal side, not only those added by the monotone split.
  tri.diagonals.clear();
  for (const auto& [key, owner] : side_owner)
    if (tri.neighbor[owner.first][owner.second]) tri.diagonals.push_back(key);
  return tri;
}

}  // namespace polyvis
