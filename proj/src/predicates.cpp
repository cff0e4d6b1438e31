#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "polyvis/geom.hpp"

namespace polyvis {
namespace {

// Error-free transformations. An expansion is a sum of doubles with
// nonoverlapping components stored in increasing magnitude.

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

class Expansion {
 public:
  void add(double b) {
    std::size_t out = 0;
    double q = b;
    for (std::size_t i = 0; i < size_; ++i) {
      double s, e;
      two_sum(q, comp_[i], s, e);
      q = s;
      if (e != 0.0) comp_[out++] = e;
    }
    if (q != 0.0) comp_[out++] = q;
    size_ = out;
  }

  void add_product(double a, double b) {
    double p, e;
    two_product(a, b, p, e);
    add(e);
    add(p);
  }

  int sign() const {
    if (size_ == 0) return 0;
    return comp_[size_ - 1] > 0.0 ? 1 : -1;
  }

 private:
  std::array<double, 40> comp_{};
  std::size_t size_ = 0;
};

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;
// Loose bound for the filtered determinant of two products of differences.
constexpr double kFilter = 8.0 * kEps;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

int cross_sign(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double l = (b.x - a.x) * (d.y - c.y);
  const double r = (b.y - a.y) * (d.x - c.x);
  const double det = l - r;
  const double bound = kFilter * (std::abs(l) + std::abs(r));
  if (std::abs(det) > bound) return sign_of(det);

  // (bx - ax)(dy - cy) - (by - ay)(dx - cx), expanded into eight products.
  Expansion ex;
  ex.add_product(b.x, d.y);
  ex.add_product(-b.x, c.y);
  ex.add_product(-a.x, d.y);
  ex.add_product(a.x, c.y);
  ex.add_product(-b.y, d.x);
  ex.add_product(b.y, c.x);
  ex.add_product(a.y, d.x);
  ex.add_product(-a.y, c.x);
  return ex.sign();
}

int orient(const Point2& a, const Point2& b, const Point2& c) { return cross_sign(a, b, a, c); }

int dot_sign(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double l = (b.x - a.x) * (d.x - c.x);
  const double r = (b.y - a.y) * (d.y - c.y);
  const double v = l + r;
  const double bound = kFilter * (std::abs(l) + std::abs(r));
  if (std::abs(v) > bound) return sign_of(v);

  Expansion ex;
  ex.add_product(b.x, d.x);
  ex.add_product(-b.x, c.x);
  ex.add_product(-a.x, d.x);
  ex.add_product(a.x, c.x);
  ex.add_product(b.y, d.y);
  ex.add_product(-b.y, c.y);
  ex.add_product(-a.y, d.y);
  ex.add_product(a.y, c.y);
  return ex.sign();
}

Vector2 interpolate_direction(const Vector2& v0, const Vector2& v1, double rho) {
  return {v0.dx * (1.0 - rho) + v1.dx * rho, v0.dy * (1.0 - rho) + v1.dy * rho};
}

std::optional<double> ray_line_parameter(const Point2& p, const Vector2& d, const Point2& a,
                                         const Point2& b) {
  const Vector2 ab = b - a;
  const double den = cross(d, ab);
  if (den == 0.0) return std::nullopt;
  return cross(a - p, ab) / den;
}

namespace {

// Position of c along segment ab when collinear; compares on the dominant axis.
bool between_collinear(const Point2& a, const Point2& b, const Point2& c) {
  if (a.x != b.x) return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x);
  return std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

}  // namespace

SegmentIntersection segment_intersect(const Segment& s1, const Segment& s2) {
  const int o1 = orient(s1.a, s1.b, s2.a);
  const int o2 = orient(s1.a, s1.b, s2.b);
  const int o3 = orient(s2.a, s2.b, s1.a);
  const int o4 = orient(s2.a, s2.b, s1.b);

  if (o1 == 0 && o2 == 0) {
    // Collinear: project onto the dominant axis of s1.
    const bool use_x = s1.a.x != s1.b.x;
    auto key = [use_x](const Point2& p) { return use_x ? p.x : p.y; };
    Point2 lo1 = s1.a, hi1 = s1.b, lo2 = s2.a, hi2 = s2.b;
    if (key(lo1) > key(hi1)) std::swap(lo1, hi1);
    if (key(lo2) > key(hi2)) std::swap(lo2, hi2);
    const Point2 lo = key(lo1) >= key(lo2) ? lo1 : lo2;
    const Point2 hi = key(hi1) <= key(hi2) ? hi1 : hi2;
    if (key(lo) > key(hi)) return Disjoint{};
    if (lo == hi) return lo;
    return Overlap{Segment(lo, hi)};
  }
  if (o1 * o2 > 0 || o3 * o4 > 0) return Disjoint{};
  // Touching at an endpoint: return it exactly.
  if (o1 == 0) return s2.a;
  if (o2 == 0) return s2.b;
  if (o3 == 0) return s1.a;
  if (o4 == 0) return s1.b;
  const auto t = ray_line_parameter(s1.a, s1.b - s1.a, s2.a, s2.b);
  return s1.a + (*t) * (s1.b - s1.a);
}

double ring_area(const Ring& r) {
  // Shoelace relative to the first vertex to limit cancellation.
  double sum = 0.0;
  const Point2 o = r.empty() ? Point2{} : r.front();
  for (std::size_t i = 1; i + 1 < r.size(); ++i) sum += cross(r[i] - o, r[i + 1] - o);
  return 0.5 * sum;
}

double polygon_area(const PolygonWithHoles& poly) {
  double a = ring_area(poly.outer);
  for (const auto& h : poly.holes) a += ring_area(h);
  return a;
}

Ring reversed(const Ring& r) { return Ring(r.rbegin(), r.rend()); }

// Used by the segment-in-polygon test and the validator.
bool point_on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return orient(a, b, p) == 0 && between_collinear(a, b, p);
}

}  // namespace polyvis
