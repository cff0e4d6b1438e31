#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "polyvis/beer.hpp"

using namespace polyvis;

namespace {


struct Estimate {
  double value, se;
};

Estimate mc_visible_fraction(const PolygonWithHoles& poly, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CornerTable ct(poly);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const Point2 a = fixtures::random_inside(poly, rng), b = fixtures::random_inside(poly, rng);
    hits += segment_in_polygon(ct, a, b);
  }
  const double p = double(hits) / n;
  return {p, std::sqrt(p * (1 - p) / n)};
}

// Measure of the pairs of a rotating trapezoid straight from the definition:
// sample both points in a box, keep the pair if its direction is in range and
// its supporting line enters between the pivot lines below the top line.
Estimate mc_frame(const TrapezoidFrame& t, double x0, double x1, double y1, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(0.0, y1);
  const double box = (x1 - x0) * y1;
  const Vector2 top = t.g - t.f;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point2 a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)};
    const Vector2 d = b - a;
    double hit = 0.0;
    if (d.dy > 0 && cross(t.v0, d) >= 0 && cross(d, t.v1) >= 0) {
      const double slope = d.dx / d.dy;
      const double h = a.x - a.y * slope;
      const double hl = t.left.x - t.left.y * slope, hr = t.right.x - t.right.y * slope;
      if (h >= std::min(hl, hr) && h <= std::max(hl, hr)) {
        const Point2 base{h, 0.0};
        const double reach = cross(t.f - base, top) / cross(d, top);
        if ((b - base).dy / d.dy <= reach) hit = 1.0;
      }
    }
    sum += hit;
    sum2 += hit * hit;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  return {mean * box * box, std::sqrt(var / n) * box * box};
}

// Area of the trapezoid at direction d (world coordinates).
double trapezoid_area(const CornerTable& ct, const RotatingTrapezoid& t, const Vector2& d) {
  const Point2 u = ct.pts[t.edge];
  const Point2 v = ct.pts[ct.next[t.edge]];
  const Point2 f = ct.pts[t.top], g = ct.pts[ct.next[t.top]];
  auto meet = [&](const Point2& p, const Point2& a, const Point2& b) {
    return p + (*ray_line_parameter(p, d, a, b)) * d;
  };
  const Point2 pl = ct.pts[t.left], pr = ct.pts[t.right];
  const Ring quad{meet(pl, u, v), meet(pr, u, v), meet(pr, f, g), meet(pl, f, g)};
  return std::abs(ring_area(quad));
}

// Distance along d from p to the boundary, ignoring edge `skip` (p lies on it
// up to rounding).
double ray_length(const CornerTable& ct, const Point2& p, const Vector2& d, std::size_t skip) {
  double best = 1e300;
  for (std::size_t e = 0; e < ct.size(); ++e) {
    if (e == skip) continue;
    const Point2& a = ct.pts[e];
    const Vector2 ab = ct.pts[ct.next[e]] - a;
    const double den = cross(d, ab);
    if (den == 0.0) continue;
    const double t = cross(a - p, ab) / den, u = cross(a - p, d) / den;
    if (t > 0 && u >= 0 && u <= 1) best = std::min(best, t);
  }
  return best * norm(d);
}

// |vis_e(phi)|: rays from the edge are piecewise linear in length between the
// parameters where they pass corners, so midpoints integrate them exactly.
double edge_visibility_area(const CornerTable& ct, std::size_t e, const Vector2& d) {
  const Point2 u = ct.pts[e];
  const Vector2 ev = ct.pts[ct.next[e]] - u;
  std::vector<double> cuts{0.0, 1.0};
  for (const Point2& c : ct.pts) {
    const double s = cross(c - u, d) / cross(ev, d);
    if (s > 0 && s < 1) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  const double sine = cross(ev, d) / (norm(ev) * norm(d));
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 0) continue;
    const Point2 p = u + (0.5 * (cuts[k] + cuts[k + 1])) * ev;
    area += w * norm(ev) * ray_length(ct, p, d, e) * sine;
  }
  return area;
}

std::vector<PolygonWithHoles> sweep_corpus() {
  std::mt19937_64 rng(11);
  std::vector<PolygonWithHoles> out{fixtures::square(), fixtures::l_hexagon_distinct(),
                                    fixtures::square_with_hole()};
  for (int k = 0; k < 6; ++k) out.push_back(fixtures::random_star(rng, 8 + 4 * k));
  out.push_back(fixtures::random_holed(rng, 14, 1));
  out.push_back(fixtures::random_holed(rng, 16, 2));
  return out;
}

}  // namespace

TEST_CASE("convex polygons have Beer index one") {
  std::mt19937_64 rng(3);
  CHECK(beer_index(fixtures::square()).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(beer_index({{{0, 0}, {3, 0.2}, {1, 2}}, {}}).value == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k < 8; ++k) {
    const auto poly = fixtures::random_convex(rng, 5 + 7 * k);
    CHECK(std::abs(beer_index(poly).value - 1.0) < 1e-9);
  }
}

TEST_CASE("per-edge contributions of a convex polygon sum to the squared area") {
  std::mt19937_64 rng(8);
  const auto poly = fixtures::random_convex(rng, 9);
  const auto r = beer_index(poly);
  double sum = 0.0;
  for (double c : r.edge_contribution) {
    CHECK(c >= 0.0);
    sum += c;
  }
  CHECK(sum == doctest::Approx(r.area * r.area).epsilon(1e-10));
}

TEST_CASE("Beer index agrees with sampling") {
  std::mt19937_64 rng(21);
  std::vector<PolygonWithHoles> polys{fixtures::l_hexagon_distinct(), fixtures::square_with_hole(),
                                      fixtures::random_star(rng, 14), fixtures::random_holed(rng, 12, 2)};
  for (std::size_t i = 0; i < polys.size(); ++i) {
    CAPTURE(i);
    const double b = beer_index(polys[i]).value;
    const Estimate mc = mc_visible_fraction(polys[i], 200000, 100 + i);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
    CHECK(std::abs(b - mc.value) < 4 * mc.se);
  }
}

TEST_CASE("similarity invariance") {
  const auto poly = fixtures::l_hexagon_distinct();
  const double base = beer_index(poly).value;
  const double c = std::cos(0.7), s = std::sin(0.7);
  PolygonWithHoles moved;
  for (const auto& p : poly.outer) moved.outer.push_back({3.5 * (c * p.x - s * p.y) - 2, 3.5 * (s * p.x + c * p.y) + 7});
  CHECK(beer_index(moved).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("sweep lifecycle and per-diagonal event counts") {
  for (const auto& poly : sweep_corpus()) {
    const CornerTable ct(poly);
    const FanTable fans(ct);
    std::size_t created = 0;
    // Oriented diagonal (end nearer the swept edge first) -> edges whose sweep it triggers.
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> edges_of;
    for (std::size_t e = 0; e < ct.size(); ++e) {
      const EdgeSweep s = sweep_edge(fans, e);
      CHECK(s.created == s.removed);
      CHECK(s.trapezoids.size() == s.removed);
      CHECK(s.created == 1 + 2 * s.case_count[1] + s.case_count[2]);
      created += s.created;
      for (const auto& d : s.event_diagonals) edges_of[d].insert(e);
      for (const auto& t : s.trapezoids) CHECK(cross(t.v0, t.v1) >= 0.0);
    }
    std::size_t events = 0;
    for (const auto& [d, edges] : edges_of) {
      CAPTURE(d.first);
      CAPTURE(d.second);
      CHECK(fans.is_diagonal(d.first, d.second));
      CHECK(edges.size() <= 2);
      events += edges.size();
    }
    // Each distinct event creates at most two trapezoids.
    CHECK(created <= ct.size() + 2 * events);
  }
}

TEST_CASE("active trapezoids partition the region seen from the edge") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (const auto& poly : sweep_corpus()) {
    const CornerTable ct(poly);
    const FanTable fans(ct);
    for (std::size_t e = 0; e < ct.size(); e += 2) {
      const EdgeSweep s = sweep_edge(fans, e);
      const Vector2 ev = ct.pts[ct.next[e]] - ct.pts[e];
      const Vector2 unit = (1.0 / norm(ev)) * ev;
      for (int k = 0; k < 50; ++k) {
        const double a = angle(rng);
        const Vector2 d{std::cos(a) * unit.dx - std::sin(a) * unit.dy,
                        std::sin(a) * unit.dx + std::cos(a) * unit.dy};
        double sum = 0.0;
        for (const auto& t : s.trapezoids)
          if (cross(t.v0, d) > 0 && cross(d, t.v1) > 0) sum += trapezoid_area(ct, t, d);
        const double expect = edge_visibility_area(ct, e, d);
        CHECK(std::abs(sum - expect) <= 1e-8 * expect);
      }
    }
  }
}

TEST_CASE("queue order does not change the result") {
  BeerOptions by_angle;
  by_angle.order = QueueOrder::ByAngle;
  for (const auto& poly : sweep_corpus()) {
    const double fifo = beer_index(poly).value;
    CHECK(std::abs(beer_index(poly, by_angle).value - fifo) <= 1e-12);
  }
}

TEST_CASE("threads do not change the result") {
  BeerOptions four;
  four.threads = 4;
  const auto poly = sweep_corpus().back();
  CHECK(beer_index(poly, four).value == beer_index(poly).value);
}

TEST_CASE("closed form and quadrature agree per piece") {
  int checked = 0;
  for (const auto& poly : sweep_corpus()) {
    const CornerTable ct(poly);
    const FanTable fans(ct);
    for (std::size_t e = 0; e < ct.size(); ++e) {
      for (const auto& t : sweep_edge(fans, e).trapezoids) {
        for (const auto& piece : canonicalize(ct, t)) {
          const auto closed = frame_integral_closed(piece.geom);
          if (!closed) continue;
          const double quad = frame_integral_quadrature(piece.geom, 0);
          CHECK(*closed >= 0.0);
          CHECK(std::abs(*closed - quad) <= 1e-9 * std::max(quad, 1e-300) + 1e-300);
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("canonical pieces reproduce the raw trapezoid") {
  for (const auto& poly : sweep_corpus()) {
    const CornerTable ct(poly);
    const FanTable fans(ct);
    for (std::size_t e = 0; e < ct.size(); ++e) {
      const double len = distance(ct.pts[e], ct.pts[ct.next[e]]);
      for (const auto& t : sweep_edge(fans, e).trapezoids) {
        const double raw = frame_integral_quadrature(edge_frame(ct, t), 0) * std::pow(len, 4);
        double pieces = 0.0;
        for (const auto& c : canonicalize(ct, t)) {
          CHECK(c.compensation() == doctest::Approx(1.0 / std::pow(c.s0, 4) / std::pow(c.s1 * c.s2, 2)));
          if (c.kind == CanonicalCase::General) {
            CHECK(c.geom.left.x == 0.0);
            CHECK(c.geom.right.x == 1.0);
            CHECK(c.geom.f.x == 1.0);
            CHECK(c.geom.g.x == 0.0);
            CHECK(c.geom.v0.dy == 1.0);
            CHECK(c.geom.v1.dy == 1.0);
          }
          pieces += trapezoid_volume(c);
        }
        CHECK(std::abs(pieces - raw) <= 1e-9 * raw + 1e-300);
      }
    }
  }
}

TEST_CASE("canonicalize splits wide spans") {
  TrapezoidFrame t{{0, 2}, {1, 3}, {1, 4}, {0, 5}, {1, 1}, {-1, 1}};
  // The angle pi/2 gives three equal pieces of pi/6; the transforms distort
  // angles, so compare the piece directions in the original frame.
  const auto pieces = canonicalize(t, 1.0);
  CHECK(pieces.size() == 3);
  for (const auto& c : pieces) CHECK(c.kind == CanonicalCase::General);

  TrapezoidFrame aligned{{0.3, 0.5}, {0.3, 0.9}, {1, 2}, {0, 2.5}, {0.2, 1}, {-0.1, 1}};
  CHECK(canonicalize(aligned, 1.0).front().kind == CanonicalCase::PivotsAligned);
  TrapezoidFrame vertical{{0, 0}, {1, 0}, {2, 0}, {2, 3}, {1, 0}, {1, 1}};
  CHECK(canonicalize(vertical, 1.0).front().kind == CanonicalCase::VerticalTop);
  TrapezoidFrame flat0{{0, 0}, {1, 0}, {1, 1}, {0, 1.2}, {1, 0}, {1, 3}};
  CHECK(canonicalize(flat0, 1.0).front().kind == CanonicalCase::V0Horizontal);
  TrapezoidFrame flat1{{0, 0}, {1, 0}, {1, 1}, {0, 1.2}, {-1, 3}, {-1, 0}};
  CHECK(canonicalize(flat1, 1.0).back().kind == CanonicalCase::V1Horizontal);
}

TEST_CASE("zero angular span has zero volume") {
  TrapezoidFrame t{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 1}, {0.5, 1}};
  for (const auto& c : canonicalize(t, 1.0)) CHECK(trapezoid_volume(c) == 0.0);
}

TEST_CASE("trapezoid volume matches sampling of the pair set") {
  struct Instance {
    TrapezoidFrame t;
    double x0, x1, y1;
  };
  const std::vector<Instance> cases{
      {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, 1}, {0, 1}}, 0, 2, 1},
      {{{0, 0}, {1, 0}, {1, 1}, {0, 1.4}, {1, 0}, {0.2, 1}}, 0, 3.5, 1.4},
      {{{0, 0}, {1, 0}, {1, 1.3}, {0, 1}, {-0.2, 1}, {-1, 0}}, -3.4, 1.3, 1.3},
      {{{0.4, 0.3}, {0.4, 0.6}, {1, 2}, {0, 2.2}, {0, 1}, {-0.5, 1}}, -0.8, 0.8, 2.4},
      {{{0, 0}, {0.8, 0.1}, {1.5, 0}, {1.5, 2}, {1, 0.3}, {1, 1}}, 0, 1.5, 1.5},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    CAPTURE(i);
    const auto& c = cases[i];
    double value = 0.0;
    for (const auto& piece : canonicalize(c.t, 1.0)) value += trapezoid_volume(piece);
    const Estimate mc = mc_frame(c.t, c.x0, c.x1, c.y1, 2000000, 40 + i);
    CHECK(value > 0.0);
    CHECK(std::abs(value - mc.value) < 4 * mc.se);
  }
}
