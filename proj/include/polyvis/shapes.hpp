#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "polyvis/geom.hpp"

namespace polyvis::shapes {

inline PolygonWithHoles square(double s = 1.0) {
  return {{{0, 0}, {s, 0}, {s, s}, {0, s}}, {}};
}

inline PolygonWithHoles rectangle(double w, double h) {
  return {{{0, 0}, {w, 0}, {w, h}, {0, h}}, {}};
}

// The L-shaped hexagon used all over the tests.
inline PolygonWithHoles l_hexagon() {
  return {{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, {}};
}

// Same shape nudged so that no two corners share an x or y coordinate.
inline PolygonWithHoles l_hexagon_distinct() {
  return {{{0, 0}, {2, 0.013}, {2.021, 1}, {1.007, 1.017}, {1.011, 2}, {0.004, 2.009}}, {}};
}

inline PolygonWithHoles square_with_hole() {
  return {{{0, 0}, {4, 0}, {4, 4}, {0, 4}}, {{{1.5, 1.6}, {1.6, 2.5}, {2.5, 2.4}, {2.4, 1.5}}}};
}

inline PolygonWithHoles random_convex(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::vector<double> a(n);
  for (auto& t : a) t = ang(rng);
  std::sort(a.begin(), a.end());
  Ring r;
  for (double t : a) r.push_back({std::cos(t), std::sin(t)});
  return {r, {}};
}

// Star-shaped around the origin with random radii: simple, usually nonconvex.
inline Ring random_star_ring(std::mt19937_64& rng, int n, double rmin = 0.3, double rmax = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = (i + 0.15 + 0.7 * u(rng)) * 2 * std::numbers::pi / n;
  Ring r;
  for (double t : a) {
    const double rad = rmin + (rmax - rmin) * u(rng);
    r.push_back({rad * std::cos(t), rad * std::sin(t)});
  }
  return r;
}

inline PolygonWithHoles random_star(std::mt19937_64& rng, int n) {
  return {random_star_ring(rng, n), {}};
}

// Star-shaped outer ring plus one or two small clockwise holes.
inline PolygonWithHoles random_holed(std::mt19937_64& rng, int n_outer, int holes) {
  PolygonWithHoles p{random_star_ring(rng, n_outer, 0.75, 1.0), {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int h = 0; h < holes; ++h) {
    const double cx = holes == 1 ? 0.05 * u(rng) : (h == 0 ? -0.3 : 0.3);
    const double cy = 0.05 * u(rng);
    Ring ring = random_star_ring(rng, 3 + static_cast<int>(u(rng) * 3), 0.08, 0.2);
    for (auto& q : ring) q = {q.x + cx, q.y + cy};
    std::reverse(ring.begin(), ring.end());
    p.holes.push_back(ring);
  }
  return p;
}

// Uniform point of the closed polygon, by rejection from the bounding box.
inline Point2 random_inside(const PolygonWithHoles& poly, std::mt19937_64& rng) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& q : poly.outer) {
    x0 = std::min(x0, q.x); x1 = std::max(x1, q.x);
    y0 = std::min(y0, q.y); y1 = std::max(y1, q.y);
  }
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  for (;;) {
    const Point2 q{ux(rng), uy(rng)};
    if (contains_point(poly, q)) return q;
  }
}

// A comb: a bar along the bottom with `teeth` jittered vertical teeth.
inline PolygonWithHoles random_comb(std::mt19937_64& rng, int teeth) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Ring top;
  for (int i = 0; i < teeth; ++i) {
    const double x0 = 2.0 * i + 0.1 * u(rng), x1 = 2.0 * i + 1.0 + 0.1 * u(rng);
    const double h = 2.0 + 3.0 * u(rng);
    const double base = 1.0 + 0.05 * u(rng);
    if (i > 0) top.push_back({x0 - 0.02 * u(rng), base});
    top.push_back({x0, h + 0.1 * u(rng)});
    top.push_back({x1, h});
    if (i + 1 < teeth) top.push_back({x1 + 0.03 * u(rng), base + 0.03});
  }
  Ring r{{0.01 * u(rng), 0.0}, {2.0 * teeth - 1.0 + 0.1 * u(rng), 0.02 * u(rng)}};
  for (auto it = top.rbegin(); it != top.rend(); ++it) r.push_back(*it);
  return {r, {}};
}

}  // namespace polyvis::shapes
