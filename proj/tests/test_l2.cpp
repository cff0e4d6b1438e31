#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "polyvis/geodesic.hpp"
#include "polyvis/l2.hpp"
#include "polyvis/numeric.hpp"
#include "polyvis/triangulation.hpp"

using namespace polyvis;

namespace {

const double kSquareL2 = (2 + std::sqrt(2.0) + 5 * std::log(1 + std::sqrt(2.0))) / 15;

// Integral of f over the triangle abc in barycentric coordinates.
double triangle_quadrature(const Point2& a, const Point2& b, const Point2& c,
                           const std::function<double(const Point2&)>& f, double tol = 1e-11) {
  const double jac = std::abs(cross(b - a, c - a));
  return jac * integrate(
                   [&](double s) {
                     return integrate([&](double t) { return f(a + s * (b - a) + t * (c - a)); }, 0.0, 1.0 - s,
                                      tol)
                         .value;
                   },
                   0.0, 1.0, tol)
                   .value;
}

// Defining integral of the weighted triangle integral, point by point.
double weighted_oracle(const Point2& u, const Point2& l1, const Point2& l2, const Point2& f, const Point2& g,
                       const Point2& anchor) {
  return triangle_quadrature(
      u, l1, l2,
      [&](const Point2& p) {
        const auto t = ray_line_parameter(u, u - p, f, g);
        const Point2 y = u + *t * (u - p);
        return distance(u, p) * 0.5 * std::abs(cross(anchor - u, y - u));
      },
      1e-10);
}

PolygonWithHoles map_points(PolygonWithHoles poly, double angle, double s, double dx, double dy) {
  const double c = std::cos(angle), si = std::sin(angle);
  for (auto& p : poly.outer) p = {s * (c * p.x - si * p.y) + dx, s * (si * p.x + c * p.y) + dy};
  return poly;
}

PolygonWithHoles mirror(const PolygonWithHoles& poly) {
  PolygonWithHoles out;
  for (auto it = poly.outer.rbegin(); it != poly.outer.rend(); ++it) out.outer.push_back({-it->x, it->y});
  return out;
}

struct Estimate {
  double mean, se;
};

Estimate finish(double s, double s2, int n) {
  const double m = s / n;
  return {m, std::sqrt(std::max(0.0, s2 / n - m * m) / n)};
}

struct Sampler {
  PolygonWithHoles poly;
  Triangulation tri;
  GeodesicSolver solver;
  std::mt19937_64 rng;
  GeodesicPath path;

  Sampler(const PolygonWithHoles& p, std::uint64_t seed) : poly(p), tri(triangulate(p)), solver(tri), rng(seed) {}
  Point2 point() { return fixtures::random_inside(poly, rng); }
  const GeodesicPath& geodesic(const Point2& p, const Point2& q) {
    solver.path(p, *tri.locate(p), q, *tri.locate(q), path);
    return path;
  }
};

// Counterclockwise angle of d from the outgoing edge of corner u.
double angle_from_next(const CornerTable& ct, std::size_t u, const Vector2& d) {
  const Vector2 n = ct.pts[ct.next[u]] - ct.pts[u];
  double a = std::atan2(cross(n, d), dot(n, d));
  return a < 0 ? a + 2 * std::numbers::pi : a;
}

}  // namespace

TEST_CASE("xi of a triangle") {
  CHECK(xi_triangle({0, 0}, {1, 1}, {2, 2}) == 0.0);
  CHECK(xi_triangle({0, 0}, {1, 0}, {1, 0}) == 0.0);
  const double ref = triangle_quadrature({0, 0}, {0, 1}, {1, 1}, [](const Point2& q) { return std::hypot(q.x, q.y); });
  CHECK(std::abs(xi_triangle({0, 0}, {0, 1}, {1, 1}) - ref) <= 1e-9 * ref);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 25; ++k) {
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const double xi = xi_triangle(a, b, c);
    const double q = triangle_quadrature(a, b, c, [&](const Point2& p) { return distance(a, p); });
    CHECK(std::abs(xi - q) <= 1e-9 * q);
    // Homogeneity of degree three and invariance under the vertex order of b, c.
    const double s = 0.37;
    const Point2 sb = a + s * (b - a), sc = a + s * (c - a);
    CHECK(std::abs(xi_triangle(a, sb, sc) - s * s * s * xi) <= 1e-12 * xi);
    CHECK(std::abs(xi_triangle(a, c, b) - xi) <= 1e-12 * xi);
    // A cevian through a splits the integral.
    const Point2 m = b + 0.3 * (c - b);
    CHECK(std::abs(xi_triangle(a, b, m) + xi_triangle(a, m, c) - xi) <= 1e-10 * xi);
  }
}

TEST_CASE("weighted triangle integral") {
  const Point2 o{0, 0}, l1{0.5, 1}, l2{-0.5, 1}, f{1, 2}, g{0, 3};
  const Point2 anchor = o + *ray_line_parameter(o, l1 - o, f, g) * (l1 - o);
  const double fixed = weighted_triangle_integral(o, l1, l2, f, g, anchor);
  const double ref = weighted_oracle(o, l1, l2, f, g, anchor);
  CHECK(std::abs(fixed - ref) <= 1e-7 * ref);
  // Mirror image across the y-axis.
  auto mx = [](const Point2& p) { return Point2{-p.x, p.y}; };
  CHECK(std::abs(weighted_triangle_integral(o, mx(l1), mx(l2), mx(f), mx(g), mx(anchor)) - fixed) <= 1e-12 * fixed);
  // Degree five homogeneity.
  auto half = [](const Point2& p) { return Point2{0.5 * p.x, 0.5 * p.y}; };
  CHECK(std::abs(weighted_triangle_integral(o, half(l1), half(l2), half(f), half(g), half(anchor)) - fixed / 32) <=
        1e-12 * fixed);
  CHECK(weighted_triangle_integral(o, l1, l1, f, g, anchor) == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.2, 3);
  for (int k = 0; k < 30; ++k) {
    const Point2 c{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (std::abs(cross(a - c, b - c)) < 0.05) continue;
    // The line is hit on both sides (away from p) or on p's side, depending on the instance.
    const double sa = k % 2 ? -pos(rng) : pos(rng), sb = k % 2 ? -pos(rng) : pos(rng);
    const Point2 lf = c + sa * (a - c), lg = c + sb * (b - c);
    const Point2 anc = k % 3 ? lf : lg;
    const double closed = weighted_triangle_integral(c, a, b, lf, lg, anc);
    const double quad = weighted_triangle_integral_quadrature(c, a, b, lf, lg, anc);
    const double oracle = weighted_oracle(c, a, b, lf, lg, anc);
    CHECK(std::abs(closed - quad) <= 1e-9 * quad);
    CHECK(std::abs(closed - oracle) <= 1e-7 * oracle);
  }
}

TEST_CASE("order swap identity for the weighted integral") {
  // p ranges over the triangle (u, l1, l2); D(p) is where the ray from u away
  // from p meets the opposite base; the inner integral is over (u, D(p), o2).
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 1.5), x(-0.6, 0.6);
  for (int k = 0; k < 20; ++k) {
    const Point2 c{0, 0};
    const double h1 = u(rng), h2 = u(rng);
    const double xa = x(rng), xb = x(rng);
    const Point2 l1{std::max(xa, xb), h1}, l2{std::min(xa, xb), h1};
    const Point2 f{1.0, -h2 + 0.3 * x(rng)}, g{-1.0, -h2 + 0.3 * x(rng)};
    auto opposite = [&](const Point2& p) { return c + *ray_line_parameter(c, c - p, f, g) * (c - p); };
    const Point2 o1 = opposite(l1), o2 = opposite(l2);
    const double direct =
        triangle_quadrature(c, l1, l2, [&](const Point2& p) { return xi_triangle(c, opposite(p), o2); }, 1e-10);
    const double swapped = weighted_triangle_integral(c, o1, o2, l1, l2, l1);
    CHECK(std::abs(direct - swapped) <= 1e-6 * swapped);
  }
}

TEST_CASE("similarity-canonical trapezoid pieces") {
  std::mt19937_64 rng(4);
  for (int inst = 0; inst < 4; ++inst) {
    const auto poly = fixtures::random_star(rng, 12);
    const CornerTable ct(poly);
    const FanTable fans(ct);
    int normalized = 0;
    for (std::size_t e = 0; e < ct.size(); ++e) {
      const double len = distance(ct.pts[e], ct.pts[ct.next[e]]);
      for (const auto& t : sweep_edge(fans, e).trapezoids) {
        const auto raw = split_span(edge_frame(ct, t));
        const auto pieces = weighted_pieces(ct, t);
        REQUIRE(raw.size() == pieces.size());
        for (std::size_t j = 0; j < raw.size(); ++j) {
          const auto& w = pieces[j];
          const double direct = frame_integral_quadrature(raw[j], 1, 1e-11) * std::pow(len, 5);
          CHECK(std::abs(w.value(1e-11) - direct) <= 1e-8 * std::max(direct, 1e-300));
          if (!w.normalized) continue;
          ++normalized;
          CHECK(w.geom.left.x == 0.0);
          CHECK(w.geom.right.x == 1.0);
          CHECK(w.geom.f.x == 1.0);
          CHECK(w.geom.g.x == 0.0);
          CHECK(w.geom.v0.dy == 1.0);
          CHECK(w.geom.v1.dy == 1.0);
        }
      }
    }
    CHECK(normalized > 0);
  }
  TrapezoidFrame flat{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 1}, {0, 1}};
  CHECK(frame_integral_quadrature(flat, 1) == 0.0);
}

TEST_CASE("unit square and convex polygons") {
  const auto sq = expected_l2(fixtures::square());
  CHECK(std::abs(sq.value - kSquareL2) <= 2e-6);
  CHECK(sq.corner_part == 0.0);

  std::mt19937_64 rng(5);
  const auto poly = fixtures::random_convex(rng, 8);
  const auto r = expected_l2(poly);
  CHECK(r.corner_part == 0.0);
  Sampler s(poly, 6);
  double a = 0, a2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double d = distance(s.point(), s.point());
    a += d;
    a2 += d * d;
  }
  const auto mc = finish(a, a2, n);
  CHECK(std::abs(r.value - mc.mean) <= 3 * mc.se);

  // Convex regions: the region left of a diagonal is the sub-polygon.
  const RegionTables tables(poly);
  const CornerTable& ct = tables.corners();
  for (std::size_t u = 0; u < ct.size(); ++u) {
    CHECK(tables.corner_contribution(u) == 0.0);
    const std::size_t v = ct.next[ct.next[u]];
    const auto e = tables.entry(u, v);
    double ref = 0;
    for (std::size_t w = v; ct.next[w] != u; w = ct.next[w])
      ref += triangle_quadrature(ct.pts[v], ct.pts[w], ct.pts[ct.next[w]],
                                 [&](const Point2& q) { return distance(ct.pts[u], q); });
    ref += triangle_quadrature(ct.pts[u], ct.pts[v], ct.pts[ct.prev[u]], [&](const Point2& q) {
      return distance(ct.pts[u], q);
    });
    CHECK(std::abs(e.l_minus - ref) <= 1e-7 * ref);
  }
}

TEST_CASE("region partition for every diagonal") {
  std::mt19937_64 rng(7);
  for (int inst = 0; inst < 12; ++inst) {
    const auto poly = inst % 3 == 0   ? fixtures::random_comb(rng, 2 + inst / 3)
                      : inst % 3 == 1 ? fixtures::random_star(rng, 10 + 2 * inst)
                                      : fixtures::random_convex(rng, 6 + inst);
    const double area = polygon_area(poly);
    const RegionTables tables(poly);
    for (std::size_t u = 0; u < tables.corners().size(); ++u)
      CHECK(std::abs(tables.view_area(u) - area) <= 1e-10 * area);
    for (const auto& e : tables.diagonal_entries()) {
      CHECK(std::abs(e.area_minus + e.area_plus - area) <= 1e-10 * area);
      CHECK(e.l_minus >= 0);
      CHECK(e.l_plus >= 0);
    }
  }
}

TEST_CASE("region integrals match Monte Carlo of geodesic distance from a corner") {
  const auto poly = fixtures::l_hexagon_distinct();
  const RegionTables tables(poly);
  const CornerTable& ct = tables.corners();
  const double area = polygon_area(poly);
  Sampler s(poly, 8);
  const int n = 200000;
  for (std::size_t u : {0, 1, 5}) {
    for (std::size_t v : tables.fans().fan(u).to) {
      if (v == ct.next[u] || v == ct.prev[u]) continue;
      const auto e = tables.entry(u, v);
      const double split = angle_from_next(ct, u, ct.pts[v] - ct.pts[u]);
      double a = 0, a2 = 0, l = 0, l2 = 0;
      for (int i = 0; i < n; ++i) {
        const auto& path = s.geodesic(ct.pts[u], s.point());
        bool minus;
        if (path.corners.size() > 2 && path.corners[1] == v)
          minus = orient(ct.pts[u], ct.pts[v], path.points[2]) > 0;
        else
          minus = angle_from_next(ct, u, path.points[1] - ct.pts[u]) >= split;
        const double len = minus * path.length() * area;
        a += minus * area;
        a2 += minus * area * area;
        l += len;
        l2 += len * len;
      }
      const auto ma = finish(a, a2, n), ml = finish(l, l2, n);
      CHECK(std::abs(e.area_minus - ma.mean) <= 3 * ma.se);
      CHECK(std::abs(e.l_minus - ml.mean) <= 3 * ml.se);
    }
  }
}

TEST_CASE("corner contributions match Monte Carlo classified by the first bend") {
  std::mt19937_64 rng(9);
  std::vector<PolygonWithHoles> polys{fixtures::l_hexagon_distinct(), fixtures::random_comb(rng, 3)};
  std::uint64_t seed = 10;
  for (const auto& poly : polys) {
    const RegionTables tables(poly);
    const double a2 = polygon_area(poly) * polygon_area(poly);
    const std::size_t corners = tables.corners().size();
    std::vector<double> s(corners), s2(corners);
    Sampler smp(poly, seed++);
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
      const Point2 p = smp.point(), q = smp.point();
      const auto& path = smp.geodesic(p, q);
      if (path.corners.size() <= 2) continue;
      const double x = path.length() * a2;
      s[path.corners[1]] += x;
      s2[path.corners[1]] += x * x;
    }
    for (std::size_t u = 0; u < corners; ++u) {
      const auto mc = finish(s[u], s2[u], n);
      const double m = tables.corner_contribution(u);
      if (!tables.corners().is_reflex(u)) {
        CHECK(m == 0.0);
        CHECK(mc.mean == 0.0);
      } else {
        CHECK(std::abs(m - mc.mean) <= 3 * mc.se);
      }
    }
  }
}

TEST_CASE("expected L2 and its two parts match Monte Carlo") {
  std::mt19937_64 rng(11);
  std::vector<PolygonWithHoles> polys{fixtures::l_hexagon_distinct(), fixtures::rectangle(2, 1),
                                      fixtures::random_comb(rng, 4), fixtures::random_star(rng, 18)};
  std::uint64_t seed = 20;
  for (const auto& poly : polys) {
    const auto r = expected_l2(poly);
    const double a2 = r.area * r.area;
    Sampler s(poly, seed++);
    double v = 0, v2 = 0, c = 0, c2 = 0, t = 0, t2 = 0;
    const int n = 300000;
    for (int i = 0; i < n; ++i) {
      const auto& path = s.geodesic(s.point(), s.point());
      const double len = path.length();
      const bool direct = path.points.size() == 2;
      v += direct * len;
      v2 += direct * len * len;
      c += !direct * len;
      c2 += !direct * len * len;
      t += len;
      t2 += len * len;
    }
    const auto mv = finish(v, v2, n), mc = finish(c, c2, n), mt = finish(t, t2, n);
    CHECK(std::abs(r.visible_part / a2 - mv.mean) <= 3 * mv.se);
    CHECK(std::abs(r.corner_part / a2 - mc.mean) <= 3 * std::max(mc.se, 1e-300));
    CHECK(std::abs(r.value - mt.mean) <= 3 * mt.se);
  }
}

TEST_CASE("isometries, scaling and mirrored corners") {
  std::mt19937_64 rng(13);
  for (int inst = 0; inst < 4; ++inst) {
    const auto poly = inst % 2 ? fixtures::random_star(rng, 14) : fixtures::random_comb(rng, 3);
    const auto base = expected_l2(poly);
    CHECK(std::abs(expected_l2(map_points(poly, 0.7, 1, 3.5, -2)).value - base.value) <= 1e-9 * base.value);
    CHECK(std::abs(expected_l2(map_points(poly, 0, 2.5, 0, 0)).value - 2.5 * base.value) <= 1e-9 * 2.5 * base.value);
    // Mirroring swaps the two sides of every corner.
    const auto m = expected_l2(mirror(poly));
    const std::size_t n = poly.outer.size();
    for (std::size_t u = 0; u < n; ++u)
      CHECK(std::abs(m.corner[n - 1 - u] - base.corner[u]) <= 1e-9 * std::max(base.corner[u], 1e-300));
    CHECK(std::abs(m.value - base.value) <= 1e-9 * base.value);
  }
}

TEST_CASE("threads, ledger and rejected inputs") {
  std::mt19937_64 rng(15);
  const auto poly = fixtures::random_comb(rng, 3);
  const auto one = expected_l2(poly, {1, true});
  const auto four = expected_l2(poly, {4, true});
  CHECK(one.value == four.value);
  CHECK(one.ledger.size() == four.ledger.size());
  CompensatedSum tau;
  std::set<std::string> kinds;
  for (const auto& c : one.ledger) {
    kinds.insert(to_string(c.kind));
    if (c.kind == L2ConstantKind::Trapezoid) tau.add(c.value);
  }
  CHECK(std::abs(tau.value() - one.visible_part) <= 1e-12 * one.visible_part);
  for (const char* k : {"trapezoid", "region-area", "l-value", "xi", "weighted-xi"}) CHECK(kinds.count(k) == 1);

  CHECK_THROWS_AS(expected_l2(fixtures::square_with_hole()), GeometryError);
  CHECK_THROWS_AS(expected_l2({{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}}, {}}), GeometryError);
}
