#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace polyvis {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Vector2 {
  double dx = 0.0;
  double dy = 0.0;

  friend bool operator==(const Vector2&, const Vector2&) = default;
};

inline Vector2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(const Point2& a, const Vector2& v) { return {a.x + v.dx, a.y + v.dy}; }
inline Vector2 operator*(double s, const Vector2& v) { return {s * v.dx, s * v.dy}; }
inline Vector2 operator+(const Vector2& a, const Vector2& b) { return {a.dx + b.dx, a.dy + b.dy}; }

inline double cross(const Vector2& a, const Vector2& b) { return a.dx * b.dy - a.dy * b.dx; }
inline double dot(const Vector2& a, const Vector2& b) { return a.dx * b.dx + a.dy * b.dy; }
inline double norm(const Vector2& v) { return std::hypot(v.dx, v.dy); }
inline double distance(const Point2& a, const Point2& b) { return norm(b - a); }

/// Thrown when input geometry violates a precondition (non-simple ring,
/// general-position failure, point outside the polygon, ...).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A segment with distinct endpoints unless `degenerate` is set. The only
/// producer of degenerate segments is an extension that stops at its start.
struct Segment {
  Point2 a;
  Point2 b;
  bool degenerate = false;

  Segment() = default;
  Segment(Point2 a_, Point2 b_) : a(a_), b(b_) {
    if (a == b) throw GeometryError("zero-length segment");
  }
  static Segment zero_length(Point2 p) {
    Segment s;
    s.a = p;
    s.b = p;
    s.degenerate = true;
    return s;
  }
  double length() const { return distance(a, b); }
};

using Ring = std::vector<Point2>;

/// Outer ring counterclockwise, holes clockwise. Corners are numbered
/// consecutively: the outer ring first, then each hole in order.
struct PolygonWithHoles {
  Ring outer;
  std::vector<Ring> holes;

  std::size_t corner_count() const {
    std::size_t n = outer.size();
    for (const auto& h : holes) n += h.size();
    return n;
  }
  bool is_simple_polygon() const { return holes.empty(); }
};

// ---------------------------------------------------------------------------
// Exact predicates

/// Sign of the orientation determinant of (a, b, c): +1 if c is strictly left
/// of the directed line ab, -1 if strictly right, 0 if collinear. Exact for
/// all finite double inputs.
int orient(const Point2& a, const Point2& b, const Point2& c);

/// Exact sign of cross(b - a, d - c).
int cross_sign(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// Exact sign of dot(b - a, d - c).
int dot_sign(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

struct Disjoint {};
struct Overlap {
  Segment part;
};
using SegmentIntersection = std::variant<Disjoint, Point2, Overlap>;

/// Classifies two closed segments exactly; the intersection point itself is
/// rounded to double.
SegmentIntersection segment_intersect(const Segment& s1, const Segment& s2);

/// Intersection of the line through (p, p + d) with the line through a and b.
/// Returns the parameter t with p + t d on line ab; nullopt when parallel.
std::optional<double> ray_line_parameter(const Point2& p, const Vector2& d, const Point2& a,
                                         const Point2& b);

/// True iff p lies on the closed segment ab.
bool point_on_segment(const Point2& a, const Point2& b, const Point2& p);

double ring_area(const Ring& r);
double polygon_area(const PolygonWithHoles& poly);
Ring reversed(const Ring& r);

/// Componentwise (1 - rho) * v0 + rho * v1, evaluated in that order.
Vector2 interpolate_direction(const Vector2& v0, const Vector2& v1, double rho);

/// Flat view of all corners: corner i starts edge i, which ends at next[i].
/// The polygon interior is to the left of every edge.
struct CornerTable {
  std::vector<Point2> pts;
  std::vector<std::size_t> next;
  std::vector<std::size_t> prev;
  std::vector<std::size_t> ring;  // 0 = outer, k = hole k-1

  explicit CornerTable(const PolygonWithHoles& poly);
  std::size_t size() const { return pts.size(); }
  /// Interior angle at corner i exceeds pi.
  bool is_reflex(std::size_t i) const;
  /// Direction toward `target` from corner i lies in its closed interior wedge.
  bool in_wedge(std::size_t i, const Point2& target) const;
  /// Same test for the direction of the vector to - from.
  bool in_wedge_dir(std::size_t i, const Point2& from, const Point2& to) const;
};

/// Closed visibility against a prebuilt corner table (no allocation).
bool segment_in_polygon(const CornerTable& ct, const Point2& p, const Point2& q);

// ---------------------------------------------------------------------------
// Validation

enum class IssueKind {
  TooFewVertices,
  RepeatedVertex,
  SelfIntersection,
  Orientation,
  HoleOutside,
  HolesIntersect,
  Collinear,
  DuplicateX,
  DuplicateY,
  NonFinite,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool simple = true;
  bool oriented = true;
  bool holes_ok = true;
  bool general_position = true;
  bool distinct_axes = true;

  bool ok() const { return issues.empty(); }
  bool has(IssueKind k) const;
};

const char* to_string(IssueKind k);

/// Checks structure, simplicity, orientation, hole containment and general
/// position exactly. With `require_distinct_axes`, also rejects two corners
/// sharing an x or a y coordinate.
ValidationReport validate_polygon(const PolygonWithHoles& poly, bool require_distinct_axes = false);

/// Throws GeometryError with the report's first message if the report is not ok.
void require_valid(const ValidationReport& report);

/// Like require_valid, but tolerates general-position and axis violations.
void require_simple(const ValidationReport& report);

/// Flips ring orientations to outer-CCW / holes-CW. Returns true if anything
/// was changed.
bool normalize_orientation(PolygonWithHoles& poly);

/// Moves every corner by an independent uniform offset in [-eps, eps]^2,
/// drawn from the counter-based generator with the given seed. The result is
/// a different polygon: derived quantities change by O(eps).
PolygonWithHoles perturb(const PolygonWithHoles& poly, double eps, std::uint64_t seed);

/// Exact point-in-polygon test on the closed region (boundary counts as inside).
bool contains_point(const PolygonWithHoles& poly, const Point2& p);

/// Closed visibility: true iff the segment pq lies in the closed polygon.
/// Both endpoints must be in the closed polygon.
bool segment_in_polygon(const PolygonWithHoles& poly, const Point2& p, const Point2& q);

}  // namespace polyvis
