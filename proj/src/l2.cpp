#include "polyvis/l2.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include "polyvis/numeric.hpp"

namespace polyvis {
namespace {

// Frame with u at the origin and the line through l1 and l2 at y = 1, scaled
// by 1/h. May reflect; every integral here is invariant under isometries.
struct BaseFrame {
  Point2 u;
  Vector2 e;
  double h = 0.0, sign = 1.0;

  BaseFrame(const Point2& origin, const Point2& l1, const Point2& l2) : u(origin) {
    const Vector2 base = l2 - l1;
    const double len = norm(base);
    if (len == 0.0) return;
    e = (1.0 / len) * base;
    const double c = cross(e, l1 - u);
    h = std::abs(c);
    sign = c < 0 ? -1.0 : 1.0;
  }
  bool degenerate() const { return h == 0.0; }
  Point2 map(const Point2& p) const {
    const Vector2 w = p - u;
    return {dot(w, e) / h, sign * cross(e, w) / h};
  }
};

struct WeightedSetup {
  double h = 0.0, x1 = 0.0, x2 = 0.0;
  double k = 0.0;                                      // fg line is n . y = k
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;  // (alpha + beta x) / (gamma x + delta)
};

std::optional<WeightedSetup> weighted_setup(const Point2& u, const Point2& l1, const Point2& l2,
                                            const Point2& f, const Point2& g, const Point2& anchor) {
  if (orient(u, l1, l2) == 0) return std::nullopt;
  const BaseFrame fr(u, l1, l2);
  if (fr.degenerate()) return std::nullopt;
  WeightedSetup s;
  s.h = fr.h;
  s.x1 = fr.map(l1).x;
  s.x2 = fr.map(l2).x;
  const Point2 F = fr.map(f), G = fr.map(g), C = fr.map(anchor);
  const Vector2 t = G - F;
  s.gamma = -t.dy;
  s.delta = t.dx;
  s.k = s.gamma * F.x + s.delta * F.y;
  s.alpha = C.x;
  s.beta = -C.y;
  return s;
}

double weighted_integrand(const WeightedSetup& s, double x) {
  return std::sqrt(x * x + 1.0) * (s.alpha + s.beta * x) / (s.gamma * x + s.delta);
}

double weighted_scale(const WeightedSetup& s) {
  const double h2 = s.h * s.h;
  return h2 * h2 * s.h * std::abs(s.k) / 6.0;
}

// Antiderivative value and the sum of the magnitudes of its terms, which
// bounds the cancellation when two values are subtracted.
struct Terms {
  double value = 0.0, magnitude = 0.0;
};

// Antiderivative of sqrt(x^2 + 1).
Terms root_terms(double x) {
  const double a = x * std::sqrt(x * x + 1.0), b = std::asinh(x);
  return {0.5 * (a + b), 0.5 * (std::abs(a) + std::abs(b))};
}

double root_integral(double x0, double x1) {
  const Terms t0 = root_terms(x0), t1 = root_terms(x1);
  const double value = t1.value - t0.value;
  if (t0.magnitude + t1.magnitude <= 1e4 * std::abs(value)) return value;
  return integrate([](double x) { return std::sqrt(x * x + 1.0); }, x0, x1, 1e-13).value;
}

// Antiderivative of sqrt(x^2 + 1) / (x + r).
Terms shifted_root_terms(double x, double r) {
  const double q = std::sqrt(1.0 + r * r);
  const double root = std::sqrt(1.0 + x * x);
  const double lin = 1.0 - r * x;
  // log |(lin + q root) / (x + r)|, rewritten when lin + q root cancels.
  const double ratio = lin >= 0 ? (lin + q * root) / (x + r) : (x + r) / (q * root - lin);
  const double k = -(r * r + 1.0) * std::log(std::abs(ratio)) / q;
  const double a = r * std::asinh(x);
  return {root - a + k, root + std::abs(a) + std::abs(k)};
}

}  // namespace

double xi_triangle(const Point2& a, const Point2& b, const Point2& c) {
  if (orient(a, b, c) == 0) return 0.0;
  const BaseFrame fr(a, b, c);
  if (fr.degenerate()) return 0.0;
  return fr.h * fr.h * fr.h / 3.0 * std::abs(root_integral(fr.map(b).x, fr.map(c).x));
}

double weighted_triangle_integral_quadrature(const Point2& u, const Point2& l1, const Point2& l2,
                                             const Point2& f, const Point2& g, const Point2& anchor) {
  const auto s = weighted_setup(u, l1, l2, f, g, anchor);
  if (!s) return 0.0;
  const double v =
      integrate([&](double x) { return weighted_integrand(*s, x); }, s->x1, s->x2, 1e-12, 1e-300).value;
  return weighted_scale(*s) * std::abs(v);
}

double weighted_triangle_integral(const Point2& u, const Point2& l1, const Point2& l2, const Point2& f,
                                  const Point2& g, const Point2& anchor) {
  const auto s = weighted_setup(u, l1, l2, f, g, anchor);
  if (!s) return 0.0;
  const Terms r1 = root_terms(s->x1), r2 = root_terms(s->x2);
  double value, magnitude;
  if (s->gamma == 0.0) {
    auto cube = [](double x) { return std::pow(x * x + 1.0, 1.5) / 3.0; };
    const double a = s->alpha / s->delta, b = s->beta / s->delta;
    value = a * (r2.value - r1.value) + b * (cube(s->x2) - cube(s->x1));
    magnitude = std::abs(a) * (r1.magnitude + r2.magnitude) + std::abs(b) * (cube(s->x1) + cube(s->x2));
  } else {
    const double r = s->delta / s->gamma;
    const double a = s->beta / s->gamma;
    const double b = (s->alpha * s->gamma - s->beta * s->delta) / (s->gamma * s->gamma);
    const Terms j1 = shifted_root_terms(s->x1, r), j2 = shifted_root_terms(s->x2, r);
    value = a * (r2.value - r1.value) + b * (j2.value - j1.value);
    magnitude = std::abs(a) * (r1.magnitude + r2.magnitude) + std::abs(b) * (j1.magnitude + j2.magnitude);
  }
  if (!std::isfinite(value) || !(magnitude <= 1e4 * std::abs(value)))
    return weighted_triangle_integral_quadrature(u, l1, l2, f, g, anchor);
  return weighted_scale(*s) * std::abs(value);
}

std::array<double, 6> WeightedTrapezoidIntegral::params() const {
  return {geom.left.y, geom.right.y, geom.f.y, geom.g.y, geom.v0.dx, geom.v1.dx};
}

double WeightedTrapezoidIntegral::value(double rel_tol) const {
  const double s2 = scale * scale;
  return frame_integral_quadrature(geom, 1, rel_tol) / (s2 * s2 * scale);
}

std::vector<WeightedTrapezoidIntegral> weighted_pieces(const CornerTable& ct, const RotatingTrapezoid& t) {
  const double edge_length = distance(ct.pts[t.edge], ct.pts[ct.next[t.edge]]);
  std::vector<WeightedTrapezoidIntegral> out;
  for (const TrapezoidFrame& piece : split_span(edge_frame(ct, t))) {
    WeightedTrapezoidIntegral w;
    TrapezoidFrame& g = w.geom;
    g = piece;
    w.scale = 1.0 / edge_length;
    const double x0 = g.left.x;
    for (Point2* p : {&g.left, &g.right, &g.f, &g.g}) p->x -= x0;
    const double width = g.right.x;
    if (width > 0.0) {
      for (Point2* p : {&g.left, &g.right, &g.f, &g.g}) *p = {p->x / width, p->y / width};
      g.right.x = 1.0;
      w.scale /= width;
    } else {
      w.normalized = false;
    }
    const Vector2 top = g.g - g.f;
    if (top.dx != 0.0) {
      const Point2 f = g.f;
      g.f = f + ((1.0 - f.x) / top.dx) * top;
      g.g = f + ((0.0 - f.x) / top.dx) * top;
      g.f.x = 1.0;
      g.g.x = 0.0;
    } else {
      w.normalized = false;
    }
    for (Vector2* v : {&g.v0, &g.v1}) {
      if (v->dy > 0.0) *v = {v->dx / v->dy, 1.0};
      else w.normalized = false;
    }
    out.push_back(w);
  }
  return out;
}

double visible_pair_distance_integral(const PolygonWithHoles& poly, std::vector<L2Constant>* ledger,
                                      unsigned threads) {
  require_simple(validate_polygon(poly));
  if (!poly.holes.empty()) throw GeometryError("the geodesic L2 expectation needs a polygon without holes");
  const CornerTable ct(poly);
  const FanTable fans(ct);
  const std::size_t n = ct.size();
  std::vector<double> per_edge(n);
  std::vector<std::vector<L2Constant>> entries(n);

  auto run = [&](std::size_t e) {
    const EdgeSweep sweep = sweep_edge(fans, e);
    CompensatedSum sum;
    for (std::size_t k = 0; k < sweep.trapezoids.size(); ++k) {
      const auto pieces = weighted_pieces(ct, sweep.trapezoids[k]);
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        const double value = pieces[j].value();
        sum.add(value);
        if (ledger) {
          const auto p = pieces[j].params();
          entries[e].push_back({"tau_" + std::to_string(e) + "_" + std::to_string(k) + "_" + std::to_string(j),
                                L2ConstantKind::Trapezoid,
                                {p.begin(), p.end()},
                                pieces[j].scale,
                                value,
                                {}});
        }
      }
    }
    per_edge[e] = sum.value();
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t e = 0; e < n; ++e) run(e);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t e = w; e < n; e += workers) run(e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  CompensatedSum total;
  for (std::size_t e = 0; e < n; ++e) {
    total.add(per_edge[e]);
    if (ledger)
      for (auto& c : entries[e]) ledger->push_back(std::move(c));
  }
  return total.value();
}

const char* to_string(L2ConstantKind k) {
  switch (k) {
    case L2ConstantKind::Trapezoid: return "trapezoid";
    case L2ConstantKind::RegionArea: return "region-area";
    case L2ConstantKind::LValue: return "l-value";
    case L2ConstantKind::Xi: return "xi";
    case L2ConstantKind::WeightedXi: return "weighted-xi";
    case L2ConstantKind::Corner: return "corner";
  }
  return "?";
}

namespace {

double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * std::abs(cross(b - a, c - a));
}

// Point where the ray from p in direction d meets the line of edge e.
Point2 base_hit(const CornerTable& ct, std::size_t e, const Point2& p, const Vector2& d) {
  const auto t = ray_line_parameter(p, d, ct.pts[e], ct.pts[ct.next[e]]);
  if (!t || *t <= 0.0) throw GeometryError("ray misses the base of its sector");
  return p + *t * d;
}

std::string id(std::size_t a, std::size_t b) { return std::to_string(a) + "_" + std::to_string(b); }

// Ray from the corner u through corner c (sign 1) or pointing away from c (sign -1).
struct Ray {
  std::size_t c;
  int sign;
};

}  // namespace

RegionTables::RegionTables(const PolygonWithHoles& poly, bool ledger) : fans_(CornerTable(poly)), record_(ledger) {
  const CornerTable& ct = fans_.corners();
  const std::size_t n = ct.size();
  sectors_.resize(n);
  pockets_.resize(n);
  state_.resize(n);
  for (std::size_t u = 0; u < n; ++u) build_sectors(u);
  for (std::size_t u = 0; u < n; ++u) {
    pockets_[u].resize(fans_.fan(u).to.size());
    state_[u].assign(fans_.fan(u).to.size(), 0);
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t k = 0; k < pockets_[u].size(); ++k) solve_pocket(u, k);
  if (record_) {
    for (const auto& d : diagonal_entries()) {
      const std::string name = id(d.u, d.v);
      ledger_.push_back({"area_minus_" + name, L2ConstantKind::RegionArea, {}, 1.0, d.area_minus, {}});
      ledger_.push_back({"area_plus_" + name, L2ConstantKind::RegionArea, {}, 1.0, d.area_plus, {}});
      ledger_.push_back({"L_minus_" + name, L2ConstantKind::LValue, {}, 1.0, d.l_minus, {}});
      ledger_.push_back({"L_plus_" + name, L2ConstantKind::LValue, {}, 1.0, d.l_plus, {}});
    }
  }
}

void RegionTables::build_sectors(std::size_t u) {
  const CornerTable& ct = fans_.corners();
  const auto& to = fans_.fan(u).to;
  const Point2& pu = ct.pts[u];
  for (std::size_t k = 0; k + 1 < to.size(); ++k) {
    const Point2 &pa = ct.pts[to[k]], &pb = ct.pts[to[k + 1]];
    const Vector2 da = pa - pu, db = pb - pu;
    const Vector2 bisector = (1.0 / norm(da)) * da + (1.0 / norm(db)) * db;
    Sector s;
    s.base = ray_shoot(ct, pu, bisector).second;
    auto hit = [&](std::size_t c, const Vector2& d) {
      return c == s.base || c == ct.next[s.base] ? ct.pts[c] : base_hit(ct, s.base, pu, d);
    };
    s.a = hit(to[k], da);
    s.b = hit(to[k + 1], db);
    s.area = triangle_area(pu, s.a, s.b);
    s.xi = xi_triangle(pu, s.a, s.b);
    sectors_[u].push_back(s);
    if (record_) {
      ledger_.push_back({"xi_" + id(u, k), L2ConstantKind::Xi, {pu.x, pu.y, s.a.x, s.a.y, s.b.x, s.b.y}, 1.0,
                         s.xi, {}});
      ledger_.push_back({"area_" + id(u, k), L2ConstantKind::RegionArea, {pu.x, pu.y, s.a.x, s.a.y, s.b.x, s.b.y},
                         1.0, s.area, {}});
    }
  }
}

double RegionTables::pocket_l(std::size_t u, std::size_t k) const {
  const Pocket& p = pockets_[u][k];
  if (!p.exists) return 0.0;
  const CornerTable& ct = fans_.corners();
  return p.l_from_v + p.area * distance(ct.pts[u], ct.pts[fans_.fan(u).to[k]]);
}

const Pocket& RegionTables::solve_pocket(std::size_t u, std::size_t k) {
  Pocket& out = pockets_[u][k];
  if (state_[u][k] == 2) return out;
  if (state_[u][k] == 1) throw GeometryError("cyclic pocket recursion");
  state_[u][k] = 1;
  const CornerTable& ct = fans_.corners();
  const std::size_t v = fans_.fan(u).to[k];
  const Point2 &pu = ct.pts[u], &pv = ct.pts[v];

  int side = 0;
  bool same = ct.is_reflex(v);
  for (std::size_t w : {ct.prev[v], ct.next[v]}) {
    if (w == u) continue;
    const int o = orient(pu, pv, ct.pts[w]);
    if (o == 0 || (side != 0 && o != side)) same = false;
    side = o;
  }
  if (same) {
    out.exists = true;
    out.ccw = side > 0;
    const auto& to = fans_.fan(v).to;
    const auto& sec = sectors_[v];
    // Sector of v holding the continuation of u -> v.
    std::size_t j = sec.size();
    for (std::size_t i = 0; i < sec.size(); ++i)
      if (orient(pu, pv, ct.pts[to[i]]) < 0 && orient(pu, pv, ct.pts[to[i + 1]]) > 0) j = i;
    if (j == sec.size()) throw GeometryError("corners must be in general position");
    const Point2 d = base_hit(ct, sec[j].base, pv, pv - pu);
    CompensatedSum area, l;
    std::vector<std::string> refs;
    const Point2 far = out.ccw ? sec[j].b : sec[j].a;
    area.add(triangle_area(pv, d, far));
    l.add(xi_triangle(pv, d, far));
    for (std::size_t i = 0; i < to.size(); ++i) {
      const bool sector_in = i < sec.size() && (out.ccw ? i > j : i < j);
      const bool pocket_in = out.ccw ? i > j : i <= j;
      if (sector_in) {
        area.add(sec[i].area);
        l.add(sec[i].xi);
        if (record_) refs.push_back("area_" + id(v, i));
      }
      if (pocket_in && solve_pocket(v, i).exists) {
        area.add(pockets_[v][i].area);
        l.add(pocket_l(v, i));
        if (record_) refs.push_back("pocket_area_" + id(v, to[i]));
      }
    }
    out.area = area.value();
    out.l_from_v = l.value();
    if (record_) {
      ledger_.push_back({"pocket_area_" + id(u, v), L2ConstantKind::RegionArea, {pv.x, pv.y, d.x, d.y, far.x, far.y},
                         1.0, out.area, refs});
      ledger_.push_back({"pocket_L_" + id(u, v), L2ConstantKind::LValue, {pv.x, pv.y, d.x, d.y, far.x, far.y}, 1.0,
                         out.l_from_v, refs});
    }
  }
  state_[u][k] = 2;
  return out;
}

double RegionTables::view_area(std::size_t u) const {
  CompensatedSum s;
  for (const auto& sec : sectors_[u]) s.add(sec.area);
  for (const auto& p : pockets_[u])
    if (p.exists) s.add(p.area);
  return s.value();
}

DiagonalRegionEntry RegionTables::entry(std::size_t u, std::size_t v) const {
  const auto i = fans_.find(u, v);
  if (!i) throw GeometryError("not a diagonal");
  DiagonalRegionEntry e{u, v};
  CompensatedSum am, ap, lm, lp;
  const auto& sec = sectors_[u];
  for (std::size_t k = 0; k < pockets_[u].size(); ++k) {
    if (k < sec.size()) {
      (k >= *i ? am : ap).add(sec[k].area);
      (k >= *i ? lm : lp).add(sec[k].xi);
    }
    const Pocket& p = pockets_[u][k];
    if (!p.exists) continue;
    const bool minus = k == *i ? p.ccw : k > *i;
    (minus ? am : ap).add(p.area);
    (minus ? lm : lp).add(pocket_l(u, k));
  }
  e.area_minus = am.value();
  e.area_plus = ap.value();
  e.l_minus = lm.value();
  e.l_plus = lp.value();
  return e;
}

std::vector<DiagonalRegionEntry> RegionTables::diagonal_entries() const {
  std::vector<DiagonalRegionEntry> out;
  for (std::size_t u = 0; u < sectors_.size(); ++u)
    for (std::size_t v : fans_.fan(u).to) out.push_back(entry(u, v));
  return out;
}

double RegionTables::corner_contribution(std::size_t u, std::vector<L2Constant>* ledger) const {
  if (!fans_.corners().is_reflex(u)) return 0.0;
  return corner_side(u, true, ledger) + corner_side(u, false, ledger);
}

// Pairs with p on one side of u (the part of its view swept from the outgoing
// edge to the backward extension of the incoming edge when `plus`, the mirror
// part otherwise) and q beyond u. The view of p is cut into triangles by the
// fan rays and the backward rays of the opposite part.
double RegionTables::corner_side(std::size_t u, bool plus, std::vector<L2Constant>* out) const {
  const CornerTable& ct = fans_.corners();
  const auto& to = fans_.fan(u).to;
  const auto& sec = sectors_[u];
  const std::size_t nx = ct.next[u], pv = ct.prev[u];
  const Point2 &pu = ct.pts[u], &pn = ct.pts[nx], &pp = ct.pts[pv];
  auto pt = [&](std::size_t c) -> const Point2& { return ct.pts[c]; };
  auto dir = [&](const Ray& r) { return r.sign * (pt(r.c) - pu); };

  // Counterclockwise order around u starting at the outgoing edge.
  auto half = [&](const Ray& r) {
    const int o = r.sign * orient(pu, pn, pt(r.c));
    if (o != 0) return o > 0 ? 0 : 1;
    return dot(pn - pu, dir(r)) > 0 ? 0 : 1;
  };
  auto less = [&](const Ray& a, const Ray& b) {
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return a.sign * b.sign * orient(pu, pt(a.c), pt(b.c)) > 0;
  };
  auto in_plus = [&](std::size_t c) { return orient(pu, pn, pt(c)) > 0 && orient(pp, pu, pt(c)) < 0; };
  auto in_minus = [&](std::size_t c) { return orient(pn, pu, pt(c)) > 0 && orient(pu, pt(c), pp) > 0; };

  std::vector<Ray> rays;
  rays.push_back({nx, plus ? 1 : -1});
  rays.push_back({pv, plus ? -1 : 1});
  for (std::size_t c : to) {
    if (c == nx || c == pv) continue;
    if (in_plus(c)) rays.push_back({c, plus ? 1 : -1});
    if (in_minus(c)) rays.push_back({c, plus ? -1 : 1});
  }
  std::sort(rays.begin(), rays.end(), less);

  auto sector_of = [&](const Ray& r) {
    std::size_t m = 0;
    for (std::size_t k = 0; k < sec.size(); ++k)
      if (!less(r, Ray{to[k], 1})) m = k;
    return m;
  };
  auto hit = [&](std::size_t m, const Ray& r) {
    if (r.sign == 1 && r.c == to[m]) return sec[m].a;
    if (r.sign == 1 && r.c == to[m + 1]) return sec[m].b;
    return base_hit(ct, sec[m].base, pu, dir(r));
  };
  auto base_ends = [&](std::size_t m) { return std::pair{pt(sec[m].base), pt(ct.next[sec[m].base])}; };

  CompensatedSum total;
  for (std::size_t i = 0; i + 1 < rays.size(); ++i) {
    const Ray ra = rays[i], rb = rays[i + 1];
    if (!less(ra, rb)) continue;
    const std::size_t m = sector_of(ra);
    const Point2 l1 = hit(m, ra), l2 = hit(m, rb);
    const Ray oa{ra.c, -ra.sign}, ob{rb.c, -rb.sign};
    const std::size_t j = sector_of(oa);
    const Point2 o1 = hit(j, oa), o2 = hit(j, ob);

    CompensatedSum area, l;
    for (std::size_t k = 0; k < to.size(); ++k) {
      if (k < sec.size() && (plus ? k > j : k < j)) {
        area.add(sec[k].area);
        l.add(sec[k].xi);
      }
      if (pockets_[u][k].exists && (plus ? k > j : k <= j)) {
        area.add(pockets_[u][k].area);
        l.add(pocket_l(u, k));
      }
    }
    const Point2 far = plus ? sec[j].b : sec[j].a;
    const Point2 near = plus ? o2 : o1;
    const double xi_lambda = xi_triangle(pu, l1, l2);
    const double area_lambda = triangle_area(pu, l1, l2);
    const auto [ba, bb] = base_ends(j);
    const double w1 = weighted_triangle_integral(pu, l1, l2, ba, bb, near);
    const double w2 = weighted_triangle_integral(pu, o1, o2, l1, l2, plus ? l1 : l2);
    const double value = xi_lambda * (area.value() + triangle_area(pu, near, far)) +
                         area_lambda * (l.value() + xi_triangle(pu, near, far)) + w1 + w2;
    total.add(value);
    if (out) {
      const std::string name = id(u, i) + (plus ? "_plus" : "_minus");
      out->push_back({"W_near_" + name, L2ConstantKind::WeightedXi, {pu.x, pu.y, l1.x, l1.y, l2.x, l2.y}, 1.0, w1, {}});
      out->push_back({"W_far_" + name, L2ConstantKind::WeightedXi, {pu.x, pu.y, o1.x, o1.y, o2.x, o2.y}, 1.0, w2, {}});
      out->push_back({"M_" + name, L2ConstantKind::Corner, {}, 1.0, value,
                      {"W_near_" + name, "W_far_" + name, "area_" + id(u, j), "xi_" + id(u, m)}});
    }
  }
  return total.value();
}

ExpectedL2 expected_l2(const PolygonWithHoles& poly, const L2Options& opt) {
  require_valid(validate_polygon(poly));
  if (!poly.holes.empty()) throw GeometryError("the geodesic L2 expectation needs a polygon without holes");

  ExpectedL2 res;
  res.area = polygon_area(poly);
  res.visible_part = visible_pair_distance_integral(poly, opt.ledger ? &res.ledger : nullptr, opt.threads);
  const RegionTables tables(poly, opt.ledger);
  if (opt.ledger) res.ledger.insert(res.ledger.end(), tables.ledger().begin(), tables.ledger().end());

  const std::size_t n = tables.corners().size();
  res.corner.assign(n, 0.0);
  std::vector<std::vector<L2Constant>> entries(n);
  auto run = [&](std::size_t u) { res.corner[u] = tables.corner_contribution(u, opt.ledger ? &entries[u] : nullptr); };
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t u = 0; u < n; ++u) run(u);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t u = w; u < n; u += workers) run(u);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }
  CompensatedSum corners;
  for (std::size_t u = 0; u < n; ++u) {
    corners.add(res.corner[u]);
    for (auto& c : entries[u]) res.ledger.push_back(std::move(c));
  }
  res.corner_part = corners.value();
  res.value = (res.visible_part + res.corner_part) / (res.area * res.area);
  return res;
}

}  // namespace polyvis
