#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "polyvis/beer.hpp"
#include "polyvis/geom.hpp"
#include "polyvis/visibility.hpp"

namespace polyvis {

/// Integral over q in the triangle abc of |aq|.
double xi_triangle(const Point2& a, const Point2& b, const Point2& c);

/// Integral over p in the triangle (u, l1, l2) of |up| times the area of the
/// triangle (u, anchor, Y(p)), where Y(p) is the point of the line through f
/// and g hit by the ray from u pointing away from p. The line must be hit for
/// every p of the triangle.
double weighted_triangle_integral(const Point2& u, const Point2& l1, const Point2& l2, const Point2& f,
                                  const Point2& g, const Point2& anchor);
/// Same integral by one-dimensional adaptive quadrature only.
double weighted_triangle_integral_quadrature(const Point2& u, const Point2& l1, const Point2& l2,
                                             const Point2& f, const Point2& g, const Point2& anchor);

/// A rotating-trapezoid piece mapped by a similarity so that the left pivot
/// is at (0, 0), the right pivot at (1, 0), f and g have x = 1 and x = 0 and
/// both directions have y = 1. Degenerate shapes keep the coordinates that
/// cannot be normalized.
struct WeightedTrapezoidIntegral {
  TrapezoidFrame geom;
  double scale = 1.0;  // total similarity scale s; the value is compensated by s^-5
  bool normalized = true;

  std::array<double, 6> params() const;  // y(pl), y(pr), y(f), y(g), x(V0), x(V1)
  double value(double rel_tol = 1e-10) const;
};

/// Similarity-canonical pieces of one sweep trapezoid.
std::vector<WeightedTrapezoidIntegral> weighted_pieces(const CornerTable& ct, const RotatingTrapezoid& t);

/// Visible part of a corner's view between two consecutive fan rays.
struct Sector {
  std::size_t base = 0;  // edge hit between the two rays
  Point2 a, b;           // base hits of the clockwise and counterclockwise ray
  double area = 0.0, xi = 0.0;
};

/// Region hidden from u behind the visible corner v, seen through v.
struct Pocket {
  bool exists = false;
  bool ccw = false;       // lies to the left of u -> v
  double area = 0.0;
  double l_from_v = 0.0;  // integral of geodesic distance to v
};

struct DiagonalRegionEntry {
  std::size_t u = 0, v = 0;
  double area_minus = 0.0, area_plus = 0.0;
  double l_minus = 0.0, l_plus = 0.0;
};

enum class L2ConstantKind { Trapezoid, RegionArea, LValue, Xi, WeightedXi, Corner };
const char* to_string(L2ConstantKind k);

struct L2Constant {
  std::string name;
  L2ConstantKind kind = L2ConstantKind::Xi;
  std::vector<double> params;
  double scale = 1.0;
  double value = 0.0;
  std::vector<std::string> refs;
};

/// Sectors, pockets and region tables for every corner of a simple polygon
/// in general position (no three corners on a line).
class RegionTables {
 public:
  explicit RegionTables(const PolygonWithHoles& poly, bool ledger = false);

  const CornerTable& corners() const { return fans_.corners(); }
  const FanTable& fans() const { return fans_; }
  const std::vector<Sector>& sectors(std::size_t u) const { return sectors_[u]; }
  /// Pocket behind fan(u).to[k]; L is measured from that corner.
  const Pocket& pocket(std::size_t u, std::size_t k) const { return pockets_[u][k]; }
  std::vector<DiagonalRegionEntry> diagonal_entries() const;
  DiagonalRegionEntry entry(std::size_t u, std::size_t v) const;
  /// Sum of sector and pocket areas seen from u; equals the polygon area.
  double view_area(std::size_t u) const;
  /// Integral over ordered pairs (p, q) whose geodesic from p bends first at u.
  double corner_contribution(std::size_t u, std::vector<L2Constant>* ledger = nullptr) const;
  const std::vector<L2Constant>& ledger() const { return ledger_; }

 private:
  FanTable fans_;
  bool record_;
  std::vector<std::vector<Sector>> sectors_;
  std::vector<std::vector<Pocket>> pockets_;
  std::vector<std::vector<char>> state_;  // 0 new, 1 in progress, 2 done
  std::vector<L2Constant> ledger_;

  void build_sectors(std::size_t u);
  const Pocket& solve_pocket(std::size_t u, std::size_t k);
  double pocket_l(std::size_t u, std::size_t k) const;
  double corner_side(std::size_t u, bool plus, std::vector<L2Constant>* out) const;
};

/// Integral of |pq| over ordered pairs of mutually visible points.
double visible_pair_distance_integral(const PolygonWithHoles& poly, std::vector<L2Constant>* ledger = nullptr,
                                      unsigned threads = 1);

struct ExpectedL2 {
  double value = 0.0;
  double area = 0.0;
  double visible_part = 0.0;  // integral over mutually visible pairs
  double corner_part = 0.0;   // sum of corner contributions
  std::vector<double> corner;
  std::vector<L2Constant> ledger;
};

struct L2Options {
  unsigned threads = 1;
  bool ledger = false;
};

/// Expected geodesic distance between two uniform points of a simple polygon
/// without holes, in general position.
ExpectedL2 expected_l2(const PolygonWithHoles& poly, const L2Options& opt = {});

}  // namespace polyvis
