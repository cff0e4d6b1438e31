#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polyvis/geom.hpp"

namespace polyvis {

// Angular sweep around a viewpoint. Segment id k < n is the polygon edge
// (k, next[k]); id n is an optional extra segment between two corners.
struct SweepEvent {
  std::size_t corner;
  bool visible = false;
  std::optional<std::size_t> front_before;  // nearest segment just clockwise of the ray
  std::optional<std::size_t> front_at;      // nearest segment on the ray, ignoring the corner's own
  std::optional<std::size_t> front_after;   // nearest segment just counterclockwise of the ray
};

struct SweepOptions {
  std::optional<std::size_t> self;  // the viewpoint is this corner
  std::optional<std::pair<std::size_t, std::size_t>> extra;
  // Restrict events to the closed counterclockwise range from corner first to corner second.
  std::optional<std::pair<std::size_t, std::size_t>> range;
};

/// Events in counterclockwise angular order. Without a range the sweep is a
/// full turn starting at an arbitrary corner; with `self` set and no range it
/// covers the interior wedge of that corner.
std::vector<SweepEvent> radial_sweep(const CornerTable& ct, const Point2& p, const SweepOptions& opt);

/// Point where the ray from p through w meets segment id s.
Point2 ray_hit(const CornerTable& ct, const Point2& p, const Point2& w, std::size_t s,
              const std::optional<std::pair<std::size_t, std::size_t>>& extra = std::nullopt);

/// Star-shaped region of points of the closed polygon seen from p, counterclockwise.
std::vector<Point2> visibility_polygon(const PolygonWithHoles& poly, const Point2& p);
std::vector<Point2> visibility_polygon(const CornerTable& ct, const Point2& p);

/// Diagonals from one corner, counterclockwise from the outgoing edge to the
/// incoming edge. Edges of the polygon are included.
struct DiagonalFan {
  std::size_t corner = 0;
  std::vector<std::size_t> to;
  std::vector<std::size_t> successor;        // index into `to` of the successor diagonal
  std::vector<std::size_t> eta;              // edge id of eta(corner -> to[i])
  std::vector<std::optional<std::size_t>> beyond_edge;  // edge holding the extension end
  std::vector<Point2> beyond;                // extension end; equals the far corner if blocked
};

class FanTable {
 public:
  explicit FanTable(const CornerTable& ct);

  const CornerTable& corners() const { return ct_; }
  const DiagonalFan& fan(std::size_t c) const { return fans_[c]; }
  std::size_t size() const { return fans_.size(); }
  /// Position of diagonal c -> d in fan(c), or nullopt if cd is not a diagonal.
  std::optional<std::size_t> find(std::size_t c, std::size_t d) const;
  bool is_diagonal(std::size_t c, std::size_t d) const { return find(c, d).has_value(); }
  /// Corner reached by the successor of the line through c and d, rotating about c.
  std::size_t successor(std::size_t c, std::size_t d) const;
  std::size_t eta(std::size_t a, std::size_t b) const;
  /// Undirected diagonal count, edges included.
  std::size_t diagonal_count() const;

 private:
  CornerTable ct_;
  std::vector<DiagonalFan> fans_;
  std::unordered_map<std::size_t, std::size_t> index_;
};

/// Extension of the diagonal ab beyond b (b' == b when blocked).
Segment extension(const FanTable& fans, std::size_t a, std::size_t b);

/// Extension from an arbitrary point a through corner b, which a must see.
Segment extension_from_point(const CornerTable& ct, const Point2& a, std::size_t b);

/// Parameters s0 <= s1 on u + s (v - u) of the part of the diagonal uv seen
/// from p, or nullopt if p sees none of it. p must not lie on the line uv.
std::optional<std::pair<double, double>> visible_part_of_segment(const CornerTable& ct,
                                                                 const Point2& p, std::size_t u,
                                                                 std::size_t v);

/// Index of the corner equal to p, if any.
std::optional<std::size_t> corner_at(const CornerTable& ct, const Point2& p);

/// First boundary point hit by the ray from p (inside the closed polygon) in
/// direction d, with the id of the edge it lies on.
std::pair<Point2, std::size_t> ray_shoot(const CornerTable& ct, const Point2& p, const Vector2& d);

}  // namespace polyvis
