#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "polyvis/geom.hpp"
#include "polyvis/numeric.hpp"
#include "polyvis/triangulation.hpp"

namespace polyvis {

struct Sample {
  Point2 point;
  std::size_t triangle = 0;
};

/// Uniform points of a polygon: a triangle is picked with probability
/// proportional to its area, then a point uniformly inside it. Sample k is a
/// pure function of (seed, k).
class SeededSampler {
 public:
  SeededSampler(const PolygonWithHoles& poly, std::uint64_t seed);

  const Triangulation& triangulation() const { return tri_; }
  std::uint64_t seed() const { return seed_; }
  Sample sample(std::uint64_t index) const;
  Sample next() { return sample(counter_++); }

 private:
  Triangulation tri_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::vector<double> cumulative_;
};

Point2 sample_point(SeededSampler& sampler);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n)
  std::uint64_t n = 0;
};

/// Fraction of n sampled pairs whose segment lies in the closed polygon.
McEstimate mc_beer(const PolygonWithHoles& poly, std::uint64_t n, std::uint64_t seed, unsigned threads = 1);

enum class Metric { L1, L2 };

/// Mean geodesic length over n sampled pairs of a simple polygon. L1 lengths
/// are measured along the Euclidean shortest path.
McEstimate mc_expected_distance(const PolygonWithHoles& poly, Metric metric, std::uint64_t n, std::uint64_t seed,
                                unsigned threads = 1);

using PairFunction = std::function<double(const Sample&, const Sample&)>;

/// Mean of a pair function over n sampled pairs (pair i uses samples 2i and
/// 2i + 1). Batches and their reduction order depend only on n, so the result
/// does not depend on the thread count. Each worker gets its own function
/// from make_worker.
McEstimate mc_pairs(const SeededSampler& sampler, std::uint64_t n, unsigned threads,
                    const std::function<PairFunction()>& make_worker);

/// Exact number of mutually visible pairs by testing every pair.
std::uint64_t brute_visible_pairs(const PolygonWithHoles& poly, const std::vector<Point2>& points);

/// Adaptive quadrature of f over a triangle or over every triangle of a
/// polygon's triangulation. `converged` is false when some nested rule hit its
/// interval limit; `error` sums the reported error estimates.
QuadResult quadrature_2d(const Point2& a, const Point2& b, const Point2& c,
                         const std::function<double(const Point2&)>& f, double rel_tol);
QuadResult quadrature_2d(const PolygonWithHoles& poly, const std::function<double(const Point2&)>& f,
                         double rel_tol);

}  // namespace polyvis
