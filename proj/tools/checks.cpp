#include "checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json_io.hpp"
#include "polyvis/beer.hpp"
#include "polyvis/l1.hpp"
#include "polyvis/l2.hpp"
#include "polyvis/oracle.hpp"
#include "polyvis/shapes.hpp"
#include "polyvis/vispairs.hpp"
#include "polyvis/visibility.hpp"

namespace polyvis::app {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

// Convex draws are skipped: they would make the sampled oracles exact and
// their standard error zero.
PolygonWithHoles nonconvex_star(std::mt19937_64& rng, int n) {
  for (;;) {
    PolygonWithHoles p = shapes::random_star(rng, n);
    const CornerTable ct(p);
    for (std::size_t c = 0; c < ct.size(); ++c)
      if (ct.is_reflex(c)) return p;
  }
}

// Fixed test polygons, generated from fixed seeds.
struct Corpus {
  std::vector<PolygonWithHoles> convex, simple, holed;

  explicit Corpus(bool quick) {
    std::mt19937_64 rng(20240601);
    const int n_convex = quick ? 6 : 20;
    for (int i = 0; i < n_convex; ++i) convex.push_back(shapes::random_convex(rng, 3 + (61 * i) / (n_convex - 1)));
    const int n_simple = quick ? 4 : 10;
    for (int i = 0; i < n_simple; ++i) {
      if (i % 4 == 3)
        simple.push_back(shapes::random_comb(rng, 3 + i / 4 * 2));
      else
        simple.push_back(nonconvex_star(rng, 8 + (22 * i) / std::max(1, n_simple - 1)));
    }
    const int outer[3] = {18, 14, 12}, holes[3] = {1, 2, 2};
    for (int i = 0; i < (quick ? 1 : 3); ++i) holed.push_back(shapes::random_holed(rng, outer[i], holes[i]));
  }

  std::vector<PolygonWithHoles> all() const {
    std::vector<PolygonWithHoles> out = convex;
    out.insert(out.end(), simple.begin(), simple.end());
    out.insert(out.end(), holed.begin(), holed.end());
    out.push_back(shapes::l_hexagon_distinct());
    out.push_back(shapes::square());
    return out;
  }
};

struct Context {
  const CheckConfig& cfg;
  Corpus corpus;
  std::uint64_t mc_samples;
};

CheckOutcome convexity(Context& ctx) {
  const auto start = Clock::now();
  double worst = 0;
  std::size_t nmin = 1000, nmax = 0;
  for (const auto& p : ctx.corpus.convex) {
    worst = std::max(worst, std::abs(beer_index(p).value - 1.0));
    nmin = std::min(nmin, p.outer.size());
    nmax = std::max(nmax, p.outer.size());
  }
  const double t = seconds_since(start);
  const bool pass = worst <= 1e-9 && t < 10.0;
  return {1, "convex polygons have Beer index 1", pass,
          std::to_string(ctx.corpus.convex.size()) + " polygons, n in [" + std::to_string(nmin) + ", " +
              std::to_string(nmax) + "], max |B - 1| = " + fmt("%.2e", worst) + ", " + fmt("%.2f", t) + " s (limit 10 s)"};
}

CheckOutcome beer_oracle(Context& ctx) {
  const auto start = Clock::now();
  std::vector<PolygonWithHoles> polys = ctx.corpus.simple;
  polys.insert(polys.end(), ctx.corpus.holed.begin(), ctx.corpus.holed.end());
  int bad = 0;
  double worst_z = 0, max_se = 0;
  std::size_t max_simple = 0, max_holed = 0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const double b = beer_index(polys[i]).value;
    const McEstimate mc = mc_beer(polys[i], ctx.mc_samples, 7000 + i, ctx.cfg.threads);
    const double z = std::abs(b - mc.value) / mc.std_error;
    worst_z = std::max(worst_z, z);
    max_se = std::max(max_se, mc.std_error);
    bad += !(std::abs(b - mc.value) <= 3 * mc.std_error);
    auto& nmax = polys[i].holes.empty() ? max_simple : max_holed;
    nmax = std::max(nmax, polys[i].corner_count());
  }
  const double t = seconds_since(start);
  return {2, "Beer index matches Monte Carlo", bad == 0 && t < 300.0,
          std::to_string(ctx.corpus.simple.size()) + " simple (n <= " + std::to_string(max_simple) + ") + " +
              std::to_string(ctx.corpus.holed.size()) + " holed (n <= " + std::to_string(max_holed) + "), " +
              std::to_string(ctx.mc_samples) + " samples, max SE " + fmt("%.2e", max_se) + ", max |z| " +
              fmt("%.2f", worst_z) + " (limit 3), " + std::to_string(bad) + " outside, " + fmt("%.1f", t) +
              " s (limit 300 s)"};
}

CheckOutcome event_bound(Context& ctx) {
  int violations = 0, polys = 0;
  double worst_ratio = 0;
  for (const auto& p : ctx.corpus.all()) {
    const CornerTable ct(p);
    const FanTable fans(ct);
    std::size_t created = 0;
    for (std::size_t e = 0; e < ct.size(); ++e) created += sweep_edge(fans, e).created;
    const std::size_t bound = 2 * fans.diagonal_count() + 2 * ct.size();
    violations += created > bound;
    worst_ratio = std::max(worst_ratio, double(created) / double(bound));
    ++polys;
  }
  return {3, "trapezoid creations <= 2 #diagonals + 2n", violations == 0,
          std::to_string(violations) + " of " + std::to_string(polys) + " polygons exceed the bound, max creations/bound " +
              fmt("%.2f", worst_ratio)};
}

CheckOutcome queue_order(Context& ctx) {
  double worst = 0;
  int polys = 0;
  for (const auto& p : ctx.corpus.all()) {
    BeerOptions fifo, angle;
    angle.order = QueueOrder::ByAngle;
    worst = std::max(worst, std::abs(beer_index(p, fifo).value - beer_index(p, angle).value));
    ++polys;
  }
  return {4, "FIFO and priority-queue sweeps agree", worst <= 1e-12,
          std::to_string(polys) + " polygons, max difference " + fmt("%.2e", worst) + " (limit 1e-12)"};
}

CheckOutcome vispairs_exact(Context& ctx) {
  const auto start = Clock::now();
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> teeth(2, 10), stars(4, 40), ms(2, 60);
  const int instances = ctx.cfg.quick ? 20 : 100;
  int mismatches = 0, convex_bad = 0;
  for (int i = 0; i < instances; ++i) {
    const PolygonWithHoles poly = i % 3 == 2 ? shapes::random_comb(rng, teeth(rng)) : shapes::random_star(rng, stars(rng));
    std::vector<Point2> pts;
    const int m = ms(rng);
    for (int k = 0; k < m; ++k) pts.push_back(shapes::random_inside(poly, rng));
    mismatches += count_visible_pairs(poly, pts).count != brute_visible_pairs(poly, pts);
  }
  const int convex_instances = ctx.cfg.quick ? 3 : 10;
  for (int i = 0; i < convex_instances; ++i) {
    const PolygonWithHoles poly = shapes::random_convex(rng, 3 + 4 * i);
    std::vector<Point2> pts;
    const int m = ms(rng);
    for (int k = 0; k < m; ++k) pts.push_back(shapes::random_inside(poly, rng));
    const std::uint64_t all = std::uint64_t(m) * (m - 1) / 2;
    convex_bad += count_visible_pairs(poly, pts).count != all || brute_visible_pairs(poly, pts) != all;
  }
  const double t = seconds_since(start);
  return {5, "visible pairs match brute force", mismatches == 0 && convex_bad == 0 && t < 120.0,
          std::to_string(instances) + " random instances (n <= 40, m <= 60), " + std::to_string(mismatches) +
              " mismatches; " + std::to_string(convex_instances) + " convex instances, " + std::to_string(convex_bad) +
              " differ from C(m, 2); " + fmt("%.1f", t) + " s (limit 120 s)"};
}

CheckOutcome visgraph_exact(Context& ctx) {
  std::mt19937_64 rng(6160);
  std::uniform_int_distribution<int> stars(4, 30), teeth(2, 7);
  const int instances = ctx.cfg.quick ? 5 : 20;
  int mismatches = 0;
  for (int i = 0; i < instances; ++i) {
    const PolygonWithHoles poly = i % 4 == 3 ? shapes::random_comb(rng, teeth(rng)) : shapes::random_star(rng, stars(rng));
    const CornerTable ct(poly);
    std::uint64_t brute = 0;
    for (std::size_t a = 0; a < ct.size(); ++a)
      for (std::size_t b = a + 1; b < ct.size(); ++b) brute += segment_in_polygon(ct, ct.pts[a], ct.pts[b]);
    mismatches += visibility_graph_edge_count(poly) != brute;
  }
  return {6, "visibility graph edge count matches brute force", mismatches == 0,
          std::to_string(instances) + " polygons (n <= 30), " + std::to_string(mismatches) + " mismatches"};
}

CheckOutcome total_l1(Context& ctx) {
  std::mt19937_64 rng(7170);
  int mismatches = 0, instances = 0;
  const std::vector<int> sizes = ctx.cfg.quick ? std::vector<int>{1, 2, 40, 150} : std::vector<int>{1, 2, 17, 100, 500};
  for (int d : {1, 2, 3, 8}) {
    for (int m : sizes) {
      for (int range : {5, 1000}) {
        std::uniform_int_distribution<std::int64_t> c(-range, range);
        std::vector<std::vector<std::int64_t>> ints(m, std::vector<std::int64_t>(d));
        std::vector<std::vector<double>> pts(m, std::vector<double>(d));
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < d; ++k) pts[i][k] = static_cast<double>(ints[i][k] = c(rng));
        std::int64_t brute = 0;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j)
            for (int k = 0; k < d; ++k) brute += std::abs(ints[i][k] - ints[j][k]);
        mismatches += total_l1_pairwise(pts) != static_cast<double>(brute);
        ++instances;
      }
    }
  }
  return {7, "total L1 distance is exact on integer points", mismatches == 0,
          std::to_string(instances) + " instances, m <= " + std::to_string(sizes.back()) + ", d in {1, 2, 3, 8}, " +
              std::to_string(mismatches) + " mismatches"};
}

CheckOutcome expected_l1_check(Context& ctx) {
  const auto start = Clock::now();
  // Distinct axes are required, so the square and rectangles are perturbed by 1e-9.
  const double sq = std::abs(expected_l1(perturb(shapes::square(), 1e-9, 1)).value - 2.0 / 3);
  double rect = 0;
  for (auto [w, h] : {std::pair{3.0, 0.5}, {1.5, 2.25}, {0.25, 4.0}})
    rect = std::max(rect, std::abs(expected_l1(perturb(shapes::rectangle(w, h), 1e-9, 2)).value - (w + h) / 3));
  int bad = 0;
  double worst_z = 0;
  for (std::size_t i = 0; i < ctx.corpus.simple.size(); ++i) {
    const auto& p = ctx.corpus.simple[i];
    const double v = expected_l1(p).value;
    const McEstimate mc = mc_expected_distance(p, Metric::L1, ctx.mc_samples, 8000 + i, ctx.cfg.threads);
    worst_z = std::max(worst_z, std::abs(v - mc.value) / mc.std_error);
    bad += !(std::abs(v - mc.value) <= 3 * mc.std_error);
  }
  const double t = seconds_since(start);
  return {8, "expected L1 distance", sq <= 1e-6 && rect <= 1e-6 && bad == 0 && t < 300.0,
          "square error " + fmt("%.2e", sq) + ", rectangle error " + fmt("%.2e", rect) + " (limit 1e-6); " +
              std::to_string(ctx.corpus.simple.size()) + " polygons vs Monte Carlo (" + std::to_string(ctx.mc_samples) +
              "), max |z| " + fmt("%.2f", worst_z) + ", " + std::to_string(bad) + " outside 3 SE; " + fmt("%.1f", t) +
              " s (limit 300 s)"};
}

CheckOutcome expected_l2_check(Context& ctx) {
  const auto start = Clock::now();
  const double sq = std::abs(expected_l2(shapes::square()).value - 0.52140543);
  std::mt19937_64 rng(9190);
  std::vector<PolygonWithHoles> convex, nonconvex{shapes::l_hexagon_distinct()};
  for (int n : {5, 9, 16}) convex.push_back(shapes::random_convex(rng, n));
  for (std::size_t i = 0; nonconvex.size() < 5 && i < ctx.corpus.simple.size(); ++i)
    nonconvex.push_back(ctx.corpus.simple[i]);
  while (nonconvex.size() < 5) nonconvex.push_back(shapes::random_star(rng, 14));
  int bad_convex = 0, bad_nonconvex = 0;
  double worst_z = 0;
  std::uint64_t seed = 9000;
  auto compare = [&](const PolygonWithHoles& p, int& bad) {
    const double v = expected_l2(p).value;
    const McEstimate mc = mc_expected_distance(p, Metric::L2, ctx.mc_samples, seed++, ctx.cfg.threads);
    worst_z = std::max(worst_z, std::abs(v - mc.value) / mc.std_error);
    bad += !(std::abs(v - mc.value) <= 3 * mc.std_error);
  };
  for (const auto& p : convex) compare(p, bad_convex);
  for (const auto& p : nonconvex) compare(p, bad_nonconvex);
  const double t = seconds_since(start);
  return {9, "expected L2 distance", sq <= 2e-6 && bad_convex == 0 && bad_nonconvex == 0 && t < 600.0,
          "square error " + fmt("%.2e", sq) + " (limit 2e-6); " + std::to_string(convex.size()) + " convex and " +
              std::to_string(nonconvex.size()) + " nonconvex polygons incl. the L-hexagon vs Monte Carlo (" +
              std::to_string(ctx.mc_samples) + "), max |z| " + fmt("%.2f", worst_z) + ", " +
              std::to_string(bad_convex + bad_nonconvex) + " outside 3 SE; " + fmt("%.1f", t) + " s (limit 600 s)"};
}

struct FrameEstimate {
  double volume, volume_se, weighted, weighted_se;
};

// Pairs of a rotating trapezoid from the definition: both points uniform in a
// box of the base-edge frame; a pair counts if its direction is within range
// and its supporting line crosses the x-axis between the pivot lines, with the
// far point below the top line.
FrameEstimate mc_frame(const TrapezoidFrame& t, double x0, double x1, double y1, std::uint64_t n, std::uint64_t seed) {
  const double box = (x1 - x0) * y1;
  const Vector2 top = t.g - t.f;
  CompensatedSum s0, s0sq, s1, s1sq;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Point2 a{x0 + (x1 - x0) * counter_uniform(seed, 4 * i), y1 * counter_uniform(seed, 4 * i + 1)};
    const Point2 b{x0 + (x1 - x0) * counter_uniform(seed, 4 * i + 2), y1 * counter_uniform(seed, 4 * i + 3)};
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
    const double w = hit * norm(d);
    s0.add(hit);
    s0sq.add(hit * hit);
    s1.add(w);
    s1sq.add(w * w);
  }
  const double nd = static_cast<double>(n), b2 = box * box;
  auto se = [&](const CompensatedSum& s, const CompensatedSum& s2) {
    const double mean = s.value() / nd;
    return std::sqrt(std::max(0.0, s2.value() / nd - mean * mean) / nd) * b2;
  };
  return {s0.value() / nd * b2, se(s0, s0sq), s1.value() / nd * b2, se(s1, s1sq)};
}

CheckOutcome sub_integrals(Context& ctx) {
  std::mt19937_64 rng(10100);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.2, 3);
  const int instances = ctx.cfg.quick ? 20 : 24;

  double xi_err = 0;
  int xi_n = 0;
  while (xi_n < instances) {
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    if (std::abs(cross(b - a, c - a)) < 0.05) continue;
    const QuadResult q = quadrature_2d(a, b, c, [&](const Point2& p) { return distance(a, p); }, 1e-11);
    xi_err = std::max(xi_err, std::abs(xi_triangle(a, b, c) - q.value) / q.value);
    ++xi_n;
  }

  double w_err = 0;
  int w_n = 0;
  while (w_n < instances) {
    const Point2 c{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (std::abs(cross(a - c, b - c)) < 0.05) continue;
    const double sa = w_n % 2 ? -pos(rng) : pos(rng), sb = w_n % 2 ? -pos(rng) : pos(rng);
    const Point2 lf = c + sa * (a - c), lg = c + sb * (b - c);
    const Point2 anchor = w_n % 3 ? lf : lg;
    const QuadResult q = quadrature_2d(
        c, a, b,
        [&](const Point2& p) {
          const auto t = ray_line_parameter(c, c - p, lf, lg);
          const Point2 y = c + *t * (c - p);
          return distance(c, p) * 0.5 * std::abs(cross(anchor - c, y - c));
        },
        1e-10);
    w_err = std::max(w_err, std::abs(weighted_triangle_integral(c, a, b, lf, lg, anchor) - q.value) / q.value);
    ++w_n;
  }

  // Trapezoids from real sweeps: the two largest of each polygon.
  const std::uint64_t n_mc = ctx.cfg.quick ? 200000 : 2000000;
  int vol_bad = 0, wt_bad = 0, frames = 0;
  double vol_z = 0, wt_z = 0;
  while (frames < instances) {
    const PolygonWithHoles poly = shapes::random_star(rng, 10);
    const CornerTable ct(poly);
    const FanTable fans(ct);
    std::vector<std::pair<double, std::pair<std::size_t, RotatingTrapezoid>>> found;
    for (std::size_t e = 0; e < ct.size(); ++e)
      for (const auto& t : sweep_edge(fans, e).trapezoids) {
        double v = 0;
        for (const auto& piece : canonicalize(ct, t)) v += trapezoid_volume(piece);
        found.push_back({v, {e, t}});
      }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t k = 0; k < 2 && k < found.size() && frames < instances; ++k, ++frames) {
      const auto& [e, t] = found[k].second;
      const TrapezoidFrame frame = edge_frame(ct, t);
      const double len = distance(ct.pts[e], ct.pts[ct.next[e]]);
      double vol = 0, wt = 0;
      for (const auto& piece : canonicalize(frame, 1.0)) vol += trapezoid_volume(piece);
      for (const auto& piece : weighted_pieces(ct, t)) wt += piece.value();
      wt /= std::pow(len, 5);
      // Box of the polygon in the edge frame, above the base.
      const Point2 o = ct.pts[e];
      const Vector2 ex = (ct.pts[ct.next[e]] - o);
      double x0 = 1e300, x1 = -1e300, y1 = 0;
      for (const auto& p : ct.pts) {
        const Vector2 r = p - o;
        const double fx = dot(r, ex) / (len * len), fy = cross(ex, r) / (len * len);
        x0 = std::min(x0, fx);
        x1 = std::max(x1, fx);
        y1 = std::max(y1, fy);
      }
      const FrameEstimate mc = mc_frame(frame, x0, x1, y1, n_mc, 11000 + frames);
      vol_z = std::max(vol_z, std::abs(vol - mc.volume) / mc.volume_se);
      wt_z = std::max(wt_z, std::abs(wt - mc.weighted) / mc.weighted_se);
      vol_bad += !(std::abs(vol - mc.volume) <= 4 * mc.volume_se);
      wt_bad += !(std::abs(wt - mc.weighted) <= 4 * mc.weighted_se);
    }
  }
  const bool pass = xi_err <= 1e-8 && w_err <= 1e-7 && vol_bad == 0 && wt_bad == 0;
  return {10, "sub-integrals match independent oracles", pass,
          "xi: " + std::to_string(xi_n) + " triangles, max rel error " + fmt("%.1e", xi_err) +
              " (limit 1e-8); weighted triangle: " + std::to_string(w_n) + " instances, max rel error " +
              fmt("%.1e", w_err) + " (limit 1e-7); trapezoid volume and weighted trapezoid: " + std::to_string(frames) +
              " sweep trapezoids vs Monte Carlo (" + std::to_string(n_mc) + "), max |z| " + fmt("%.2f", vol_z) + " and " +
              fmt("%.2f", wt_z) + " (limit 4)"};
}

CheckOutcome partition(Context& ctx) {
  std::vector<PolygonWithHoles> polys = ctx.corpus.convex;
  polys.insert(polys.end(), ctx.corpus.simple.begin(), ctx.corpus.simple.end());
  polys.push_back(shapes::l_hexagon_distinct());
  polys.push_back(shapes::square());
  double worst = 0;
  std::size_t diagonals = 0;
  for (const auto& p : polys) {
    const RegionTables tables(p);
    const double area = polygon_area(p);
    for (const auto& d : tables.diagonal_entries()) {
      worst = std::max(worst, std::abs(d.area_minus + d.area_plus - area));
      ++diagonals;
    }
  }
  return {11, "region areas on both sides of each diagonal sum to the area", worst <= 1e-10,
          std::to_string(diagonals) + " diagonals of " + std::to_string(polys.size()) + " polygons, max error " +
              fmt("%.2e", worst) + " (limit 1e-10)"};
}

CheckOutcome scaling(Context&) {
  const auto start = Clock::now();
  std::mt19937_64 rng(12120);
  std::vector<double> xs, ys;
  std::string times;
  for (int n : {50, 100, 200, 400}) {
    const PolygonWithHoles poly = shapes::random_star(rng, n);
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      const auto t0 = Clock::now();
      beer_index(poly);
      best = std::min(best, seconds_since(t0));
    }
    xs.push_back(std::log(double(n)));
    ys.push_back(std::log(best));
    times += (times.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " + fmt("%.3f", best) + " s";
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  const double t = seconds_since(start);
  return {12, "beer_index running time scaling", slope <= 2.4 && t < 600.0,
          times + "; log-log slope " + fmt("%.2f", slope) + " (limit 2.4)"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CheckOutcome determinism(Context& ctx) {
  if (!ctx.cfg.cli) return {13, "CLI reports are deterministic", false, "no command runner configured"};
  namespace fs = std::filesystem;
  std::mt19937_64 seed_rng(std::random_device{}());
  const fs::path dir = fs::temp_directory_path() / ("polyvis-check-" + std::to_string(seed_rng()));
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const Json& j) {
    const std::string path = (dir / name).string();
    std::ofstream(path, std::ios::binary) << dump(j);
    return path;
  };
  std::mt19937_64 rng(13130);
  const auto hex = shapes::l_hexagon_distinct();
  std::vector<Point2> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(shapes::random_inside(hex, rng));
  const std::string sq = put("square.json", polygon_to_json(shapes::square()));
  const std::string lh = put("lhex.json", polygon_to_json(hex));
  const std::string ho = put("holed.json", polygon_to_json(shapes::square_with_hole()));
  const std::string pp = put("points.json", points_to_json(pts));
  const std::string ledger = (dir / "ledger.json").string();
  const std::string samples = ctx.cfg.quick ? "20000" : "200000";

  const std::vector<std::vector<std::string>> commands{
      {"validate", sq},
      {"validate", lh, "--distinct-axes"},
      {"beer", lh, "--ledger", ledger},
      {"beer", ho, "--quadrature-only"},
      {"beer", lh, "--perturb", "1e-6", "--perturb-seed", "3"},
      {"vispairs", lh, pp},
      {"visgraph", lh},
      {"total-l1", pp},
      {"expected-l1", lh},
      {"expected-l2", lh, "--ledger", ledger},
      {"mc", "beer", ho, "--samples", samples, "--seed", "5"},
      {"mc", "l1", lh, "--samples", samples, "--seed", "6"},
      {"mc", "l2", lh, "--samples", samples, "--seed", "7"},
      {"dump", ho},
  };
  auto without_threads = [](const std::string& report) {
    std::istringstream in(strip_timing(report));
    std::string line, out;
    while (std::getline(in, line))
      if (line.find("\"threads\":") == std::string::npos) out += line + "\n";
    return out;
  };
  int failures = 0;
  std::string first_failure;
  for (const auto& cmd : commands) {
    std::string name;
    for (const auto& a : cmd) name += (name.empty() ? "" : " ") + (a.rfind(dir.string(), 0) == 0 ? fs::path(a).filename().string() : a);
    std::vector<std::string> one = cmd, four = cmd;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    fs::remove(ledger);
    const auto a = ctx.cfg.cli(one);
    const std::string ledger_a = read_file(ledger);
    fs::remove(ledger);
    const auto b = ctx.cfg.cli(one);
    const std::string ledger_b = read_file(ledger);
    fs::remove(ledger);
    const auto c = ctx.cfg.cli(four);
    const std::string ledger_c = read_file(ledger);
    std::string problem;
    if (a.first != 0 || b.first != 0 || c.first != 0)
      problem = "exit codes " + std::to_string(a.first) + ", " + std::to_string(b.first) + ", " + std::to_string(c.first);
    else if (strip_timing(a.second) != strip_timing(b.second) || ledger_a != ledger_b)
      problem = "repeat differs";
    else if (without_threads(a.second) != without_threads(c.second) || ledger_a != ledger_c)
      problem = "threads 4 differs from threads 1";
    if (!problem.empty()) {
      ++failures;
      if (first_failure.empty()) first_failure = "; first failure: " + name + " (" + problem + ")";
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {13, "CLI reports are deterministic", failures == 0,
          std::to_string(commands.size()) + " commands run twice with --threads 1 and once with --threads 4, " +
              std::to_string(failures) + " differ" + first_failure};
}

}  // namespace

std::vector<int> default_checks(bool quick) {
  if (quick) return {1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 13};
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
}

std::string strip_timing(const std::string& report) {
  std::istringstream in(report);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"timing_seconds\"") == std::string::npos) out += line + "\n";
  return out;
}

std::vector<CheckOutcome> run_checks(const CheckConfig& config) {
  Context ctx{config, Corpus(config.quick), config.quick ? 200000u : 10000000u};
  const std::map<int, CheckOutcome (*)(Context&)> table{
      {1, convexity},   {2, beer_oracle},       {3, event_bound},        {4, queue_order},  {5, vispairs_exact},
      {6, visgraph_exact}, {7, total_l1},        {8, expected_l1_check}, {9, expected_l2_check}, {10, sub_integrals},
      {11, partition},  {12, scaling},          {13, determinism},
  };
  std::vector<CheckOutcome> out;
  for (int id : config.only.empty() ? default_checks(config.quick) : config.only) {
    const auto it = table.find(id);
    if (it == table.end()) continue;
    const auto start = Clock::now();
    CheckOutcome r;
    try {
      r = it->second(ctx);
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = seconds_since(start);
    if (config.on_result) config.on_result(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace polyvis::app
