#include "polyvis/beer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <queue>
#include <exception>
#include <thread>

#include "polyvis/numeric.hpp"

namespace polyvis {
namespace {

// A direction sign * (pts[b] - pts[a]); a == b marks the end of the sweep.
struct Dir {
  std::size_t a = 0, b = 0;
  int sign = 1;
  bool at_end() const { return a == b; }
};

struct Pending {
  RotatingTrapezoid t;
  Dir start;
  Dir end;        // filled by schedule()
  int which = 0;  // 1 left event, 2 right event, 0 sweep end
  std::size_t seq = 0;
};

class Sweeper {
 public:
  Sweeper(const FanTable& fans, std::size_t e)
      : fans_(fans), ct_(fans.corners()), u_(e), v_(ct_.next[e]) {}

  // Positive when y lies counterclockwise of x (both in the sweep half-plane).
  int compare(const Dir& x, const Dir& y) const {
    if (x.at_end() || y.at_end()) {
      if (x.at_end() && y.at_end()) return 0;
      return x.at_end() ? -1 : 1;
    }
    const auto& p = ct_.pts;
    return x.sign * y.sign * cross_sign(p[x.a], p[x.b], p[y.a], p[y.b]);
  }

  // Direction of the line through pivot and c pointing away from the edge;
  // lines parallel to the edge are only reached at the end of the sweep.
  Dir line_dir(std::size_t pivot, std::size_t c) const {
    const auto& p = ct_.pts;
    const int s = cross_sign(p[u_], p[v_], p[pivot], p[c]);
    if (s == 0) return {0, 0, 1};
    return {pivot, c, s};
  }

  Vector2 vec(const Dir& d) const {
    if (d.at_end()) return ct_.pts[u_] - ct_.pts[v_];
    const Vector2 w = ct_.pts[d.b] - ct_.pts[d.a];
    return d.sign > 0 ? w : -1.0 * w;
  }

  // Next real event line for a pivot. A pivot ending the top edge has no
  // trapezoid side above it and a pivot on the base edge none below it, so
  // lines leaving it that way are skipped.
  Dir resolve(std::size_t pivot, std::size_t& succ, const Dir& start, std::size_t top) const {
    Dir d = line_dir(pivot, succ);
    if (d.at_end() || compare(start, d) < 0) return {0, 0, 1};
    const bool on_top = pivot == top || pivot == ct_.next[top];
    const bool on_base = pivot == u_ || pivot == v_;
    if (!on_top && !on_base) return d;
    const auto& p = ct_.pts;
    auto false_event = [&](std::size_t c) {
      const int side = cross_sign(p[u_], p[v_], p[pivot], p[c]);
      return (side > 0 && on_top) || (side < 0 && on_base);
    };
    for (std::size_t guard = 0; false_event(succ); ++guard) {
      const std::size_t next = fans_.successor(pivot, succ);
      const Dir dn = line_dir(pivot, next);
      if (dn.at_end() || compare(d, dn) < 0 || guard > fans_.fan(pivot).to.size()) return {0, 0, 1};
      succ = next;
      d = dn;
    }
    return d;
  }

  void schedule(Pending& pd) const {
    const Dir l = resolve(pd.t.left, pd.t.left_succ, pd.start, pd.t.top);
    const Dir r = resolve(pd.t.right, pd.t.right_succ, pd.start, pd.t.top);
    if (l.at_end() && r.at_end()) {
      pd.end = l;
      pd.which = 0;
    } else if (compare(l, r) >= 0) {
      pd.end = l;
      pd.which = 1;
    } else {
      pd.end = r;
      pd.which = 2;
    }
  }

  Pending first() const {
    Pending pd;
    pd.t.edge = u_;
    pd.t.left = u_;
    pd.t.right = v_;
    pd.t.top = fans_.eta(u_, v_);
    pd.t.left_succ = fans_.successor(u_, v_);
    pd.t.right_succ = fans_.successor(v_, u_);
    pd.start = {u_, v_, 1};
    schedule(pd);
    return pd;
  }

  // Finishes pd and appends the trapezoids it spawns.
  template <class Push>
  void remove(Pending& pd, EdgeSweep& out, Push&& push) const {
    RotatingTrapezoid& t = pd.t;
    t.v0 = vec(pd.start);
    t.v1 = vec(pd.end);
    const auto& p = ct_.pts;
    auto child = [&](const RotatingTrapezoid& base) {
      Pending c;
      c.t = base;
      c.t.removal_case = 0;
      c.start = pd.end;
      return c;
    };
    if (pd.which == 1) {
      const std::size_t pl = t.left, c = t.left_succ;
      if (cross_sign(p[u_], p[v_], p[pl], p[c]) > 0) {
        out.event_diagonals.emplace_back(pl, c);
        t.removal_case = 1;
        Pending t0 = child(t);
        t0.t.left = c;
        t0.t.left_succ = fans_.successor(c, pl);
        Pending t1 = child(t);
        t1.t.left = pl;
        t1.t.right = c;
        t1.t.top = fans_.eta(pl, c);
        t1.t.left_succ = fans_.successor(pl, c);
        t1.t.right_succ = fans_.successor(c, pl);
        push(std::move(t0));
        push(std::move(t1));
      } else {
        if (c != t.right) throw GeometryError("rotating sweep: left pivot met a corner below it");
        out.event_diagonals.emplace_back(c, pl);
        t.removal_case = 3;
      }
    } else if (pd.which == 2) {
      const std::size_t pr = t.right, c = t.right_succ;
      if (cross_sign(p[u_], p[v_], p[pr], p[c]) < 0) {
        out.event_diagonals.emplace_back(c, pr);
        t.removal_case = 2;
        Pending t0 = child(t);
        t0.t.right = c;
        t0.t.right_succ = fans_.successor(c, pr);
        push(std::move(t0));
      } else {
        if (c != t.left) throw GeometryError("rotating sweep: right pivot met a corner above it");
        out.event_diagonals.emplace_back(pr, c);
        t.removal_case = 3;
      }
    }
    ++out.case_count[t.removal_case];
    ++out.removed;
    out.trapezoids.push_back(t);
  }

 private:
  const FanTable& fans_;
  const CornerTable& ct_;
  std::size_t u_, v_;
};

}  // namespace

EdgeSweep sweep_edge(const FanTable& fans, std::size_t e, QueueOrder order) {
  Sweeper sw(fans, e);
  EdgeSweep out;
  std::size_t seq = 0;
  if (order == QueueOrder::Fifo) {
    std::deque<Pending> queue;
    auto push = [&](Pending pd) {
      sw.schedule(pd);
      pd.seq = seq++;
      ++out.created;
      queue.push_back(std::move(pd));
    };
    push(sw.first());
    while (!queue.empty()) {
      Pending pd = std::move(queue.front());
      queue.pop_front();
      sw.remove(pd, out, push);
    }
  } else {
    auto later = [&](const Pending& a, const Pending& b) {
      const int c = sw.compare(a.end, b.end);
      if (c != 0) return c < 0;
      return a.seq > b.seq;
    };
    std::priority_queue<Pending, std::vector<Pending>, decltype(later)> queue(later);
    auto push = [&](Pending pd) {
      sw.schedule(pd);
      pd.seq = seq++;
      ++out.created;
      queue.push(std::move(pd));
    };
    push(sw.first());
    while (!queue.empty()) {
      Pending pd = queue.top();
      queue.pop();
      sw.remove(pd, out, push);
    }
  }
  return out;
}

TrapezoidFrame edge_frame(const CornerTable& ct, const RotatingTrapezoid& t) {
  const Point2 u = ct.pts[t.edge];
  const Vector2 d = ct.pts[ct.next[t.edge]] - u;
  const double l2 = dot(d, d);
  auto vec = [&](const Vector2& w) { return Vector2{dot(w, d) / l2, cross(d, w) / l2}; };
  auto pt = [&](const Point2& p) {
    const Vector2 w = vec(p - u);
    return Point2{w.dx, w.dy};
  };
  TrapezoidFrame f;
  f.left = pt(ct.pts[t.left]);
  f.right = pt(ct.pts[t.right]);
  f.f = pt(ct.pts[t.top]);
  f.g = pt(ct.pts[ct.next[t.top]]);
  f.v0 = vec(t.v0);
  f.v1 = vec(t.v1);
  // Pivots on the edge sit exactly on the axis.
  if (t.left == t.edge || t.left == ct.next[t.edge]) f.left.y = 0.0;
  if (t.right == t.edge || t.right == ct.next[t.edge]) f.right.y = 0.0;
  return f;
}

const char* to_string(CanonicalCase c) {
  switch (c) {
    case CanonicalCase::General: return "general";
    case CanonicalCase::PivotsAligned: return "xpr_zero";
    case CanonicalCase::VerticalTop: return "vertical_fg";
    case CanonicalCase::V0Horizontal: return "yv0_zero";
    case CanonicalCase::V1Horizontal: return "yv1_zero";
  }
  return "?";
}

double CanonicalTrapezoid::compensation() const {
  return 1.0 / (s0 * s0 * s0 * s0 * s1 * s1 * s2 * s2);
}

std::vector<CanonicalTrapezoid> canonicalize(const CornerTable& ct, const RotatingTrapezoid& t) {
  return canonicalize(edge_frame(ct, t), distance(ct.pts[t.edge], ct.pts[ct.next[t.edge]]));
}

std::vector<TrapezoidFrame> split_span(const TrapezoidFrame& frame) {
  const double span = std::atan2(cross(frame.v0, frame.v1), dot(frame.v0, frame.v1));
  const int pieces = span > 0 ? static_cast<int>(std::floor(span / (std::numbers::pi / 4))) + 1 : 1;
  std::vector<Vector2> dirs{frame.v0};
  const double len0 = norm(frame.v0);
  for (int k = 1; k < pieces; ++k) {
    const double a = span * k / pieces;
    dirs.push_back({len0 * (std::cos(a) * frame.v0.dx / len0 - std::sin(a) * frame.v0.dy / len0),
                    len0 * (std::sin(a) * frame.v0.dx / len0 + std::cos(a) * frame.v0.dy / len0)});
  }
  dirs.push_back(frame.v1);
  std::vector<TrapezoidFrame> out;
  for (int k = 0; k < pieces; ++k) {
    TrapezoidFrame g = frame;
    g.v0 = dirs[k];
    g.v1 = dirs[k + 1];
    out.push_back(g);
  }
  return out;
}

std::vector<CanonicalTrapezoid> canonicalize(const TrapezoidFrame& frame, double edge_length) {
  constexpr double kTiny = 1e-12;
  std::vector<CanonicalTrapezoid> out;
  for (const TrapezoidFrame& piece : split_span(frame)) {
    CanonicalTrapezoid c;
    TrapezoidFrame& g = c.geom;
    g = piece;
    c.s0 = 1.0 / edge_length;
    bool aligned = false, vertical = false;

    const double x0 = g.left.x;
    for (Point2* p : {&g.left, &g.right, &g.f, &g.g}) p->x -= x0;
    if (std::abs(g.right.x) > kTiny) c.s1 = 1.0 / g.right.x;
    else aligned = true;
    for (Point2* p : {&g.left, &g.right, &g.f, &g.g}) p->x *= c.s1;
    for (Vector2* v : {&g.v0, &g.v1}) v->dx *= c.s1;
    g.left.x = 0.0;
    if (!aligned) g.right.x = 1.0;

    const Vector2 top = g.g - g.f;
    if (std::abs(top.dx) > kTiny * norm(top)) {
      const Point2 f0 = g.f;
      g.f = {1.0, f0.y + (1.0 - f0.x) * top.dy / top.dx};
      g.g = {0.0, f0.y - f0.x * top.dy / top.dx};
      if (std::abs(g.f.y) > kTiny) c.s2 = 1.0 / g.f.y;
    } else {
      vertical = true;
      g.f = {g.f.x, 0.0};
      g.g = {g.f.x, 1.0};
    }
    for (Point2* p : {&g.left, &g.right, &g.f, &g.g}) p->y *= c.s2;
    for (Vector2* v : {&g.v0, &g.v1}) v->dy *= c.s2;
    if (!vertical && c.s2 != 1.0) g.f.y = 1.0;

    const bool h0 = g.v0.dy == 0.0, h1 = g.v1.dy == 0.0;
    if (!h0 && !h1) {
      g.v0 = (1.0 / g.v0.dy) * g.v0;
      g.v1 = (1.0 / g.v1.dy) * g.v1;
      g.v0.dy = g.v1.dy = 1.0;
    } else if (h0 && !h1) {
      g.v0 = {g.v0.dx > 0 ? 1.0 : -1.0, 0.0};
      g.v1 = (1.0 / std::abs(g.v1.dx)) * g.v1;
    } else if (h1 && !h0) {
      g.v1 = {g.v1.dx > 0 ? 1.0 : -1.0, 0.0};
      g.v0 = (1.0 / std::abs(g.v0.dx)) * g.v0;
    }
    if (aligned) c.kind = CanonicalCase::PivotsAligned;
    else if (vertical) c.kind = CanonicalCase::VerticalTop;
    else if (h0) c.kind = CanonicalCase::V0Horizontal;
    else if (h1) c.kind = CanonicalCase::V1Horizontal;
    out.push_back(c);
  }
  return out;
}

double frame_integrand(const TrapezoidFrame& t, int weight, double rho) {
  const Vector2 v = interpolate_direction(t.v0, t.v1, rho);
  const Vector2 top = t.g - t.f;
  const double gamma = cross(v, top);
  auto reach = [&](const Point2& p) {
    const double below = p.y == 0.0 ? 0.0 : p.y / v.dy;
    return below + cross(t.f - p, top) / gamma;
  };
  const double tl = reach(t.left), tr = reach(t.right);
  const double c = cross(t.v0, t.v1) * cross(t.right - t.left, v);
  if (weight == 0) return c * (tl + tr) * (tl * tl + tr * tr) / 24.0;
  const double l2 = tl * tl, r2 = tr * tr;
  return c * norm(v) * (l2 * l2 + l2 * tl * tr + l2 * r2 + tl * tr * r2 + r2 * r2) / 60.0;
}

double frame_integral_quadrature(const TrapezoidFrame& t, int weight, double rel_tol) {
  if (cross(t.v0, t.v1) == 0.0) return 0.0;
  const QuadResult r = integrate([&](double rho) { return frame_integrand(t, weight, rho); }, 0.0, 1.0,
                                 rel_tol, 1e-300);
  return std::abs(r.value);
}

namespace {

// Integral over [0,1] of (n0 + n1 r) / (l0 + l1 r)^k.
double linear_ratio_integral(double n0, double n1, double l0, double l1, int k) {
  if (k == 0) return n0 + 0.5 * n1;
  const double x = l1 / l0;
  const double scale = std::pow(l0, -k);
  if (std::abs(x) < 0.25) {
    // Binomial series of (1 + x r)^-k.
    double sum = 0.0, coef = 1.0, xm = 1.0;
    for (int m = 0; m < 80; ++m) {
      const double term = coef * xm * (n0 / (m + 1) + n1 / (m + 2));
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum) && m > 2) break;
      coef *= -static_cast<double>(k + m) / (m + 1);
      xm *= x;
    }
    return scale * sum;
  }
  const double end0 = l0, end1 = l0 + l1;
  auto power_integral = [&](int j) {
    if (j == 0) return 1.0;
    if (j == 1) return std::log1p(x) / l1;
    double s = 0.0;
    for (int i = 0; i <= j - 2; ++i) s += std::pow(end0, -(i + 1)) * std::pow(end1, -(j - 1 - i));
    return s / (j - 1);
  };
  const double alpha = n1 / l1;
  const double beta = n0 - alpha * l0;
  return alpha * power_integral(k - 1) + beta * power_integral(k);
}

// 1 / (Y^a G^b) as a sum of pure powers, using 1 = (y1 G - g1 Y) / delta.
void partial_fractions(int a, int b, double scale, double y1, double g1, double delta,
                       std::array<double, 4>& in_y, std::array<double, 4>& in_g) {
  if (scale == 0.0) return;
  if (a == 0) {
    in_g[b] += scale;
  } else if (b == 0) {
    in_y[a] += scale;
  } else {
    partial_fractions(a, b - 1, scale * y1 / delta, y1, g1, delta, in_y, in_g);
    partial_fractions(a - 1, b, -scale * g1 / delta, y1, g1, delta, in_y, in_g);
  }
}

}  // namespace

std::optional<double> frame_integral_closed(const TrapezoidFrame& t) {
  const double c = cross(t.v0, t.v1);
  if (c == 0.0) return 0.0;
  const Vector2 top = t.g - t.f;
  const Vector2 d = t.right - t.left;
  const double y0 = t.v0.dy, y1 = t.v1.dy - t.v0.dy;
  const double g0 = cross(t.v0, top), g1 = cross(t.v1, top) - g0;
  const double n0 = cross(d, t.v0), n1 = cross(d, t.v1) - n0;
  const double al = t.left.y, ar = t.right.y;
  const double bl = cross(t.f - t.left, top), br = cross(t.f - t.right, top);

  // (Tl + Tr)(Tl^2 + Tr^2) with T = a / Y + b / G; coef[i] multiplies Y^-i G^-(3-i).
  const double sa = al + ar, sb = bl + br;
  const double qa = al * al + ar * ar, qb = bl * bl + br * br, qab = 2.0 * (al * bl + ar * br);
  const std::array<double, 4> coef{sb * qb, sa * qb + sb * qab, sa * qab + sb * qa, sa * qa};
  if ((coef[1] != 0 || coef[2] != 0 || coef[3] != 0) && (y0 == 0.0 || y0 + y1 == 0.0))
    throw GeometryError("trapezoid with a raised pivot reaches a direction parallel to its edge");

  std::array<double, 4> in_y{}, in_g{};
  in_g[3] += coef[0];
  in_y[3] += coef[3];
  const double delta = y1 * g0 - g1 * y0;
  const double ref = std::abs(y1 * g0) + std::abs(g1 * y0);
  if (coef[1] != 0.0 || coef[2] != 0.0) {
    if (delta == 0.0) {
      // G is a multiple of Y.
      const double lambda = y0 != 0.0 ? g0 / y0 : g1 / y1;
      in_y[3] += coef[1] / (lambda * lambda) + coef[2] / lambda;
    } else if (std::abs(delta) <= 1e-9 * ref) {
      return std::nullopt;
    } else {
      partial_fractions(2, 1, coef[2], y1, g1, delta, in_y, in_g);
      partial_fractions(1, 2, coef[1], y1, g1, delta, in_y, in_g);
    }
  }
  double total = 0.0, magnitude = 0.0;
  for (int k = 0; k <= 3; ++k) {
    if (in_y[k] != 0.0) {
      const double term = in_y[k] * linear_ratio_integral(n0, n1, y0, y1, k);
      total += term;
      magnitude += std::abs(term);
    }
    if (in_g[k] != 0.0) {
      const double term = in_g[k] * linear_ratio_integral(n0, n1, g0, g1, k);
      total += term;
      magnitude += std::abs(term);
    }
  }
  if (!std::isfinite(total) || magnitude > 1e6 * std::abs(total)) return std::nullopt;
  return std::abs(c * total / 24.0);
}

double trapezoid_volume(const CanonicalTrapezoid& c, VolumeMethod method) {
  double raw;
  if (method == VolumeMethod::Quadrature) {
    raw = frame_integral_quadrature(c.geom, 0);
  } else {
    const auto closed = frame_integral_closed(c.geom);
    if (closed) raw = *closed;
    else if (method == VolumeMethod::ClosedForm) throw GeometryError("closed form is ill-conditioned here");
    else raw = frame_integral_quadrature(c.geom, 0);
  }
  return raw * c.compensation();
}

namespace {

struct EdgeResult {
  double value = 0.0;
  std::size_t trapezoids = 0;
  std::vector<LedgerEntry> ledger;
};

EdgeResult run_edge(const FanTable& fans, std::size_t e, const BeerOptions& opt) {
  EdgeResult r;
  const EdgeSweep sweep = sweep_edge(fans, e, opt.order);
  r.trapezoids = sweep.trapezoids.size();
  CompensatedSum sum;
  for (std::size_t k = 0; k < sweep.trapezoids.size(); ++k) {
    const auto pieces = canonicalize(fans.corners(), sweep.trapezoids[k]);
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      const double value = trapezoid_volume(pieces[j], opt.method);
      sum.add(value);
      if (opt.ledger) {
        const TrapezoidFrame& g = pieces[j].geom;
        LedgerEntry entry;
        entry.name = "tau_" + std::to_string(e) + "_" + std::to_string(k) + "_" + std::to_string(j);
        entry.edge = e;
        entry.kind = pieces[j].kind;
        entry.params = {g.left.y, g.right.y, g.f.y, g.g.y, g.v0.dx, g.v1.dx};
        entry.scale = pieces[j].compensation();
        entry.value = value;
        r.ledger.push_back(std::move(entry));
      }
    }
  }
  r.value = sum.value();
  return r;
}

}  // namespace

BeerResult beer_index(const PolygonWithHoles& poly, const BeerOptions& opt) {
  const ValidationReport report = validate_polygon(poly);
  require_simple(report);
  const CornerTable ct(poly);
  const FanTable fans(ct);
  const std::size_t n = ct.size();
  std::vector<EdgeResult> per_edge(n);
  // Collinear corners are tolerated as long as the sweep can order them.
  auto sweep_one = [&](std::size_t e) {
    try {
      return run_edge(fans, e, opt);
    } catch (const GeometryError& err) {
      if (report.general_position) throw;
      for (const auto& issue : report.issues)
        if (issue.kind == IssueKind::Collinear)
          throw GeometryError(std::string(err.what()) + "; the polygon is not in general position: " + issue.message);
      throw;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t e = 0; e < n; ++e) per_edge[e] = sweep_one(e);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t e = w; e < n; e += workers) per_edge[e] = sweep_one(e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  BeerResult result;
  result.area = polygon_area(poly);
  CompensatedSum total;
  for (std::size_t e = 0; e < n; ++e) {
    total.add(per_edge[e].value);
    result.edge_contribution.push_back(per_edge[e].value);
    result.trapezoids += per_edge[e].trapezoids;
    for (auto& entry : per_edge[e].ledger) result.ledger.push_back(std::move(entry));
  }
  result.value = total.value() / (result.area * result.area);
  return result;
}

}  // namespace polyvis
