#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "polyvis/triangulation.hpp"
#include "polyvis/vispairs.hpp"

using namespace polyvis;

namespace {

std::uint64_t brute_pairs(const PolygonWithHoles& poly, const std::vector<Point2>& pts) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) k += segment_in_polygon(poly, pts[i], pts[j]);
  return k;
}

std::vector<Point2> sample(const PolygonWithHoles& poly, std::mt19937_64& rng, int m) {
  std::vector<Point2> pts;
  for (int i = 0; i < m; ++i) pts.push_back(fixtures::random_inside(poly, rng));
  return pts;
}

DualSegment seg(Point2 a, Point2 b, DualColor c = DualColor::Red) { return {a, b, c, 0}; }

}  // namespace

TEST_CASE("dual segment of a point seeing the whole diagonal") {
  const PolygonWithHoles poly{{{-1, -1}, {0, 0}, {1, -1}, {1, 2}, {0, 1}, {-1, 2}}, {}};
  const CornerTable ct(poly);
  const auto s = dual_segment(ct, {-1, 0.5}, 1, 4, DualColor::Red, 7);
  REQUIRE(s);
  CHECK(s->a.x == doctest::Approx(-0.5));
  CHECK(s->a.y == doctest::Approx(0.0));
  CHECK(s->b.x == doctest::Approx(0.5));
  CHECK(s->b.y == doctest::Approx(-1.0));
  CHECK(s->source == 7);
  // Every point of the segment lies on the dual line y = a x - b.
  for (const Point2& q : {s->a, s->b}) CHECK(q.y == doctest::Approx(-1.0 * q.x - 0.5));
}

TEST_CASE("dual segment is empty when nothing is seen") {
  // The corner (1, 3) hides the diagonal (0,0)-(0,1) from the arm on the right.
  const PolygonWithHoles poly{
      {{-1, -1}, {0, 0}, {1, 0}, {1, 3}, {3, 3}, {3, 4}, {0.5, 4}, {0, 1}, {-1, 2}}, {}};
  const CornerTable ct(poly);
  CHECK_FALSE(dual_segment(ct, {2.8, 3.5}, 1, 7, DualColor::Blue, 0));
  CHECK(dual_segment(ct, {0.9, 3.5}, 1, 7, DualColor::Blue, 0));
}

TEST_CASE("bichromatic counting on small configurations") {
  CountingProblem one{{seg({-1, 0}, {1, 0})}, {seg({0, -1}, {0, 1}, DualColor::Blue)}};
  CHECK(count_bichromatic(one) == 1);

  CountingProblem grid;
  const int k = 7;
  for (int i = 0; i < k; ++i) {
    grid.red.push_back(seg({-1, double(i)}, {double(k), double(i)}));
    grid.blue.push_back(seg({double(i), -1}, {double(i), double(k)}, DualColor::Blue));
  }
  CHECK(count_bichromatic(grid) == std::uint64_t(k * k));

  CountingProblem touch{{seg({0, 0}, {1, 0})}, {seg({1, 0}, {2, 1}, DualColor::Blue)}};
  CHECK(count_bichromatic(touch) == 1);
  CountingProblem point{{seg({0.5, 0}, {0.5, 0})}, {seg({0, 0}, {1, 0}, DualColor::Blue)}};
  CHECK(count_bichromatic(point) == 1);
  CountingProblem apart{{seg({0, 0}, {1, 0})}, {seg({0, 1}, {1, 1}, DualColor::Blue)}};
  CHECK(count_bichromatic(apart) == 0);
}

TEST_CASE("bichromatic counting matches a parametric oracle and is color symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CountingProblem pr;
  for (int i = 0; i < 200; ++i) {
    pr.red.push_back(seg({u(rng), u(rng)}, {u(rng), u(rng)}));
    pr.blue.push_back(seg({u(rng), u(rng)}, {u(rng), u(rng)}, DualColor::Blue));
  }
  std::uint64_t expect = 0;
  for (const auto& r : pr.red)
    for (const auto& b : pr.blue) {
      const double dx = r.b.x - r.a.x, dy = r.b.y - r.a.y, ex = b.b.x - b.a.x, ey = b.b.y - b.a.y;
      const double den = dx * ey - dy * ex;
      const double s = ((b.a.x - r.a.x) * ey - (b.a.y - r.a.y) * ex) / den;
      const double t = ((b.a.x - r.a.x) * dy - (b.a.y - r.a.y) * dx) / den;
      expect += s >= 0 && s <= 1 && t >= 0 && t <= 1;
    }
  CHECK(count_bichromatic(pr) == expect);
  CountingProblem swapped{pr.blue, pr.red};
  CHECK(count_bichromatic(swapped) == expect);
}

TEST_CASE("dual segments meet exactly when the points see each other across the diagonal") {
  std::mt19937_64 rng(5);
  int tested = 0, visible = 0;
  for (int inst = 0; inst < 12; ++inst) {
    const PolygonWithHoles poly = inst % 2 ? fixtures::random_star(rng, 25) : fixtures::random_comb(rng, 5);
    const CornerTable ct(poly);
    const Triangulation tri = triangulate(ct);
    const auto& [u, v] = tri.diagonals[rng() % tri.diagonals.size()];
    const Point2 pu = ct.pts[u], pv = ct.pts[v];
    for (int k = 0; k < 300; ++k) {
      const Point2 p = fixtures::random_inside(poly, rng), q = fixtures::random_inside(poly, rng);
      if (orient(pu, pv, p) <= 0 || orient(pu, pv, q) >= 0) continue;
      const auto sp = dual_segment(ct, p, u, v, DualColor::Red, 0);
      const auto sq = dual_segment(ct, q, u, v, DualColor::Blue, 1);
      // Across the diagonal means the segment pq meets uv.
      const bool across = orient(p, q, pu) * orient(p, q, pv) <= 0 && segment_in_polygon(ct, p, q);
      const bool meet = sp && sq && dual_segments_meet(*sp, *sq);
      CHECK(meet == across);
      ++tested;
      visible += across;
    }
  }
  CHECK(tested > 500);
  CHECK(visible > 50);
}

TEST_CASE("convex polygons see all pairs") {
  std::mt19937_64 rng(2);
  for (int inst = 0; inst < 10; ++inst) {
    const auto poly = fixtures::random_convex(rng, 5 + inst);
    const int m = 10 + 5 * inst;
    CHECK(count_visible_pairs(poly, sample(poly, rng, m)).count == std::uint64_t(m * (m - 1) / 2));
    CHECK(visibility_graph_edge_count(poly) == std::uint64_t((5 + inst) * (4 + inst) / 2));
  }
  CHECK(count_visible_pairs(fixtures::square(), {{0.3, 0.4}}).count == 0);
  CHECK(count_visible_pairs(fixtures::square(), {}).count == 0);
  CHECK(visibility_graph_edge_count({{{0, 0}, {1, 0}, {0, 1}}, {}}) == 3);
}

TEST_CASE("L-hexagon points and corners match the pairwise oracle") {
  std::mt19937_64 rng(9);
  const auto poly = fixtures::l_hexagon();
  for (int rep = 0; rep < 5; ++rep) {
    const auto pts = sample(poly, rng, 30);
    CHECK(count_visible_pairs(poly, pts).count == brute_pairs(poly, pts));
  }
  CHECK(visibility_graph_edge_count(poly) == brute_pairs(poly, poly.outer));
  CHECK(visibility_graph_edge_count(fixtures::l_hexagon_distinct()) ==
        brute_pairs(fixtures::l_hexagon_distinct(), fixtures::l_hexagon_distinct().outer));
}

TEST_CASE("random instances match the pairwise oracle and conserve points") {
  std::mt19937_64 rng(21);
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 4 + static_cast<int>(rng() % 37);
    const auto poly = inst % 3 == 2 ? fixtures::random_comb(rng, 2 + n / 8) : fixtures::random_star(rng, n);
    const auto pts = sample(poly, rng, 1 + static_cast<int>(rng() % 60));
    const auto res = count_visible_pairs(poly, pts);
    CHECK(res.count == brute_pairs(poly, pts));
    std::uint64_t sum = 0;
    std::size_t leaf_points = 0;
    for (const auto& node : res.nodes) {
      sum += node.pairs;
      if (node.leaf) leaf_points += node.m1;
    }
    CHECK(sum == res.count);
    CHECK(leaf_points == pts.size());
    const auto& root = res.nodes.front();
    if (!root.leaf) CHECK(root.m1 + root.m2 == pts.size());
  }
}

TEST_CASE("visibility graph edge counts match the corner oracle") {
  std::mt19937_64 rng(33);
  for (int inst = 0; inst < 20; ++inst) {
    const auto poly = inst % 2 ? fixtures::random_star(rng, 5 + inst) : fixtures::random_comb(rng, 2 + inst / 4);
    CHECK(visibility_graph_edge_count(poly) == brute_pairs(poly, poly.outer));
  }
}

TEST_CASE("points outside or polygons with holes are rejected") {
  CHECK_THROWS_AS(count_visible_pairs(fixtures::square(), {{2, 2}}), GeometryError);
  CHECK_THROWS_AS(count_visible_pairs(fixtures::square_with_hole(), {{0.5, 0.5}}), GeometryError);
}

TEST_CASE("a pluggable counter sees the same problems") {
  std::mt19937_64 rng(4);
  const auto poly = fixtures::random_star(rng, 20);
  const auto pts = sample(poly, rng, 40);
  std::uint64_t calls = 0;
  const auto res = count_visible_pairs(poly, pts, [&](const CountingProblem& pr) {
    ++calls;
    return count_bichromatic(pr);
  });
  CHECK(calls > 0);
  CHECK(res.count == count_visible_pairs(poly, pts).count);
}
