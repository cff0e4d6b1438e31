#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyvis/geom.hpp"
#include "polyvis/visibility.hpp"

namespace polyvis {

/// A trapezoid of the rotating sweep from edge `edge`, alive between the
/// directions v0 and v1 (counterclockwise, both pointing away from the edge).
struct RotatingTrapezoid {
  std::size_t edge = 0;
  std::size_t left = 0, right = 0;  // pivot corners
  std::size_t top = 0;              // top edge id, from corner top to next[top]
  Vector2 v0, v1;
  // The successor diagonals run from the pivot to these corners.
  std::size_t left_succ = 0, right_succ = 0;
  int removal_case = 0;  // 1, 2, 3 for events, 0 when the sweep ends with it
};

enum class QueueOrder { Fifo, ByAngle };

struct EdgeSweep {
  std::vector<RotatingTrapezoid> trapezoids;  // in removal order
  std::size_t created = 0;
  std::size_t removed = 0;
  std::array<std::size_t, 4> case_count{};
  // Diagonal responsible for each event, the endpoint nearer the edge first.
  std::vector<std::pair<std::size_t, std::size_t>> event_diagonals;
};

/// Rotational sweep around edge e = (e, next[e]) from direction e to its reverse.
EdgeSweep sweep_edge(const FanTable& fans, std::size_t e, QueueOrder order = QueueOrder::Fifo);

/// Trapezoid geometry in a frame where the base edge lies on the x-axis.
/// Directions interpolate linearly from v0 to v1.
struct TrapezoidFrame {
  Point2 left, right, f, g;
  Vector2 v0, v1;
};

/// Maps the sweep's trapezoid into the frame taking u to (0,0) and v to (1,0).
TrapezoidFrame edge_frame(const CornerTable& ct, const RotatingTrapezoid& t);

enum class CanonicalCase { General, PivotsAligned, VerticalTop, V0Horizontal, V1Horizontal };
const char* to_string(CanonicalCase c);

struct CanonicalTrapezoid {
  TrapezoidFrame geom;
  double s0 = 1.0, s1 = 1.0, s2 = 1.0;
  CanonicalCase kind = CanonicalCase::General;

  double compensation() const;
};

/// Equal angular pieces of span below pi/4, in sweep order.
std::vector<TrapezoidFrame> split_span(const TrapezoidFrame& frame);

/// Normalizes a trapezoid and splits it into equal angular pieces of span below pi/4.
std::vector<CanonicalTrapezoid> canonicalize(const CornerTable& ct, const RotatingTrapezoid& t);
std::vector<CanonicalTrapezoid> canonicalize(const TrapezoidFrame& frame, double edge_length);

enum class VolumeMethod { Auto, ClosedForm, Quadrature };

/// Measure of the pairs (p, q) inside the rotating trapezoid with q - p along a
/// sweep direction and p nearer the base. `weight` 1 weights each pair by |pq|.
double frame_integral_quadrature(const TrapezoidFrame& t, int weight, double rel_tol = 1e-11);
/// Antiderivative path (weight 0 only); nullopt when the partial fractions are ill-conditioned.
std::optional<double> frame_integral_closed(const TrapezoidFrame& t);
/// Value of the inner triple integral at interpolation parameter rho.
double frame_integrand(const TrapezoidFrame& t, int weight, double rho);

/// Contribution of one canonical piece, compensation applied.
double trapezoid_volume(const CanonicalTrapezoid& c, VolumeMethod method = VolumeMethod::Auto);

struct LedgerEntry {
  std::string name;
  std::size_t edge = 0;
  CanonicalCase kind = CanonicalCase::General;
  std::array<double, 6> params{};  // y(pl), y(pr), y(f), y(g), x(V0), x(V1)
  double scale = 1.0;
  double value = 0.0;
};

struct BeerOptions {
  VolumeMethod method = VolumeMethod::Auto;
  QueueOrder order = QueueOrder::Fifo;
  unsigned threads = 1;
  bool ledger = false;
};

struct BeerResult {
  double value = 0.0;
  double area = 0.0;
  std::vector<double> edge_contribution;
  std::size_t trapezoids = 0;
  std::vector<LedgerEntry> ledger;
};

BeerResult beer_index(const PolygonWithHoles& poly, const BeerOptions& opt = {});

}  // namespace polyvis
