#include "polyvis/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <thread>

#include "polyvis/geodesic.hpp"

namespace polyvis {
namespace {

constexpr std::uint64_t kBatch = 1 << 16;

struct Moments {
  CompensatedSum sum, sum2;
};

}  // namespace

SeededSampler::SeededSampler(const PolygonWithHoles& poly, std::uint64_t seed)
    : tri_(triangulate(poly)), seed_(seed) {
  double total = 0.0;
  for (std::size_t t = 0; t < tri_.triangles.size(); ++t) {
    total += tri_.triangle_area(t);
    cumulative_.push_back(total);
  }
  if (cumulative_.empty() || total <= 0.0) throw GeometryError("cannot sample a polygon of zero area");
}

Sample SeededSampler::sample(std::uint64_t index) const {
  const double pick = counter_uniform(seed_, 3 * index) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), pick);
  const std::size_t t = std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  double r1 = counter_uniform(seed_, 3 * index + 1), r2 = counter_uniform(seed_, 3 * index + 2);
  if (r1 + r2 > 1.0) {
    r1 = 1.0 - r1;
    r2 = 1.0 - r2;
  }
  const auto& c = tri_.triangles[t];
  const Point2 &a = tri_.corners.pts[c[0]], &b = tri_.corners.pts[c[1]], &d = tri_.corners.pts[c[2]];
  return {a + r1 * (b - a) + r2 * (d - a), t};
}

Point2 sample_point(SeededSampler& sampler) { return sampler.next().point; }

McEstimate mc_pairs(const SeededSampler& sampler, std::uint64_t n, unsigned threads,
                    const std::function<PairFunction()>& make_worker) {
  const std::uint64_t batches = (n + kBatch - 1) / kBatch;
  std::vector<Moments> moments(batches);
  auto run = [&](const PairFunction& f, std::uint64_t b) {
    const std::uint64_t end = std::min(n, (b + 1) * kBatch);
    for (std::uint64_t i = b * kBatch; i < end; ++i) {
      const double x = f(sampler.sample(2 * i), sampler.sample(2 * i + 1));
      moments[b].sum.add(x);
      moments[b].sum2.add(x * x);
    }
  };
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, batches)));
  if (workers == 1) {
    const PairFunction f = make_worker();
    for (std::uint64_t b = 0; b < batches; ++b) run(f, b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const PairFunction f = make_worker();
          for (std::uint64_t b = w; b < batches; b += workers) run(f, b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  CompensatedSum sum, sum2;
  for (const auto& m : moments) {
    sum.add(m.sum.value());
    sum2.add(m.sum2.value());
  }
  McEstimate est;
  est.n = n;
  if (n == 0) return est;
  const double nd = static_cast<double>(n);
  est.value = sum.value() / nd;
  if (n > 1) {
    const double var = std::max(0.0, (sum2.value() - nd * est.value * est.value) / (nd - 1));
    est.std_error = std::sqrt(var / nd);
  }
  return est;
}

McEstimate mc_beer(const PolygonWithHoles& poly, std::uint64_t n, std::uint64_t seed, unsigned threads) {
  require_valid(validate_polygon(poly));
  const SeededSampler sampler(poly, seed);
  const CornerTable& ct = sampler.triangulation().corners;
  return mc_pairs(sampler, n, threads, [&]() -> PairFunction {
    return [&](const Sample& p, const Sample& q) { return segment_in_polygon(ct, p.point, q.point) ? 1.0 : 0.0; };
  });
}

McEstimate mc_expected_distance(const PolygonWithHoles& poly, Metric metric, std::uint64_t n, std::uint64_t seed,
                                unsigned threads) {
  require_simple(validate_polygon(poly));
  if (!poly.holes.empty()) throw GeometryError("geodesic sampling needs a polygon without holes");
  const SeededSampler sampler(poly, seed);
  return mc_pairs(sampler, n, threads, [&]() -> PairFunction {
    auto solver = std::make_shared<GeodesicSolver>(sampler.triangulation());
    auto path = std::make_shared<GeodesicPath>();
    return [solver, path, metric](const Sample& p, const Sample& q) {
      solver->path(p.point, p.triangle, q.point, q.triangle, *path);
      return metric == Metric::L2 ? path->length() : path->l1_length();
    };
  });
}

std::uint64_t brute_visible_pairs(const PolygonWithHoles& poly, const std::vector<Point2>& points) {
  const CornerTable ct(poly);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) count += segment_in_polygon(ct, points[i], points[j]);
  return count;
}

QuadResult quadrature_2d(const Point2& a, const Point2& b, const Point2& c,
                         const std::function<double(const Point2&)>& f, double rel_tol) {
  const double jac = std::abs(cross(b - a, c - a));
  QuadResult out;
  if (jac == 0.0) return out;
  bool inner_ok = true;
  double inner_error = 0.0;
  const QuadResult outer = integrate(
      [&](double s) {
        const QuadResult r =
            integrate([&](double t) { return f(a + s * (b - a) + t * (c - a)); }, 0.0, 1.0 - s, rel_tol * 0.1, 1e-300);
        inner_ok = inner_ok && r.converged;
        inner_error = std::max(inner_error, r.error);
        return r.value;
      },
      0.0, 1.0, rel_tol, 1e-300);
  out.value = jac * outer.value;
  out.error = jac * (outer.error + inner_error);
  out.converged = outer.converged && inner_ok;
  return out;
}

QuadResult quadrature_2d(const PolygonWithHoles& poly, const std::function<double(const Point2&)>& f,
                         double rel_tol) {
  const Triangulation tri = triangulate(poly);
  CompensatedSum value;
  QuadResult out;
  for (const auto& t : tri.triangles) {
    const auto& pts = tri.corners.pts;
    const QuadResult r = quadrature_2d(pts[t[0]], pts[t[1]], pts[t[2]], f, rel_tol);
    value.add(r.value);
    out.error += r.error;
    out.converged = out.converged && r.converged;
  }
  out.value = value.value();
  return out;
}

}  // namespace polyvis
