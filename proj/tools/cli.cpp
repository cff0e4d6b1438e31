#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "checks.hpp"
#include "json_io.hpp"
#include "polyvis/beer.hpp"
#include "polyvis/l1.hpp"
#include "polyvis/l2.hpp"
#include "polyvis/oracle.hpp"
#include "polyvis/triangulation.hpp"
#include "polyvis/vispairs.hpp"
#include "polyvis/visibility.hpp"

namespace polyvis::app {
namespace {

struct Options {
  unsigned threads = 1;
  double perturb_eps = 0.0;
  std::uint64_t perturb_seed = 1;
  std::string polygon, points, ledger, order = "fifo", quantity;
  bool quadrature_only = false, distinct_axes = false, quick = false;
  std::uint64_t samples = 1000000, seed = 1;
};

// Collects what every report carries besides the result itself.
struct Session {
  const Options& opt;
  Json inputs = Json::array();
  Json warnings = Json::array();

  const InputFile& remember(const InputFile& f) {
    inputs.push_back(Json{{"path", f.path}, {"digest", "fnv1a64:" + f.digest}});
    return f;
  }

  PolygonWithHoles polygon(const std::string& path) {
    PolygonWithHoles poly = polygon_from_json(remember(read_input(path)).doc);
    if (normalize_orientation(poly))
      warnings.push_back("orientation corrected: outer ring made counterclockwise, holes clockwise");
    if (opt.perturb_eps > 0) {
      poly = perturb(poly, opt.perturb_eps, opt.perturb_seed);
      warnings.push_back("corners perturbed by up to " + Json(opt.perturb_eps).dump() +
                         " per coordinate; results describe the perturbed polygon and differ by O(eps)");
    }
    return poly;
  }
};

Json beer_ledger(const std::vector<LedgerEntry>& ledger) {
  Json out = Json::array();
  for (const auto& e : ledger) {
    const auto& p = e.params;
    out.push_back(Json{{"name", e.name},
                       {"edge", e.edge},
                       {"kind", to_string(e.kind)},
                       {"params",
                        {{"y_pl", p[0]}, {"y_pr", p[1]}, {"y_f", p[2]}, {"y_g", p[3]}, {"x_v0", p[4]}, {"x_v1", p[5]}}},
                       {"scale", e.scale},
                       {"value", e.value}});
  }
  return out;
}

Json l2_ledger(const std::vector<L2Constant>& ledger) {
  Json out = Json::array();
  for (const auto& c : ledger) {
    Json params = Json::array();
    for (double v : c.params) params.push_back(v);
    out.push_back(Json{{"name", c.name},
                       {"kind", to_string(c.kind)},
                       {"params", params},
                       {"scale", c.scale},
                       {"value", c.value},
                       {"refs", c.refs}});
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

Json validation_json(const ValidationReport& r, std::size_t corners) {
  Json issues = Json::array();
  for (const auto& i : r.issues) issues.push_back(Json{{"kind", to_string(i.kind)}, {"message", i.message}});
  return Json{{"valid", r.ok()},
              {"corners", corners},
              {"simple", r.simple},
              {"oriented", r.oriented},
              {"holes_ok", r.holes_ok},
              {"general_position", r.general_position},
              {"distinct_axes", r.distinct_axes},
              {"issues", issues}};
}

Json dump_json(const PolygonWithHoles& poly) {
  const Triangulation tri = triangulate(poly);
  const CornerTable& ct = tri.corners;
  Json corners = Json::array(), triangles = Json::array(), diagonals = Json::array(), fans = Json::array();
  for (std::size_t i = 0; i < ct.size(); ++i)
    corners.push_back(Json{{"id", i}, {"point", {ct.pts[i].x, ct.pts[i].y}}, {"next", ct.next[i]},
                           {"prev", ct.prev[i]}, {"reflex", ct.is_reflex(i)}});
  for (const auto& t : tri.triangles) triangles.push_back({t[0], t[1], t[2]});
  for (const auto& [a, b] : tri.diagonals) diagonals.push_back({a, b});
  const FanTable table(ct);
  for (std::size_t c = 0; c < table.size(); ++c) fans.push_back(Json{{"corner", c}, {"to", table.fan(c).to}});
  return Json{{"corners", corners},
              {"triangles", triangles},
              {"triangulation_diagonals", diagonals},
              {"fans", fans},
              {"diagonal_count", table.diagonal_count()}};
}

// Returns the result object and the exit code for one subcommand.
std::pair<Json, int> dispatch(const std::string& command, const Options& opt, Session& s, std::ostream& err) {
  if (command == "validate") {
    const PolygonWithHoles poly = s.polygon(opt.polygon);
    const ValidationReport r = validate_polygon(poly, opt.distinct_axes);
    return {validation_json(r, poly.corner_count()), r.ok() ? 0 : 2};
  }
  if (command == "beer") {
    const PolygonWithHoles poly = s.polygon(opt.polygon);
    BeerOptions bo;
    bo.method = opt.quadrature_only ? VolumeMethod::Quadrature : VolumeMethod::Auto;
    bo.order = opt.order == "angle" ? QueueOrder::ByAngle : QueueOrder::Fifo;
    bo.threads = opt.threads;
    bo.ledger = !opt.ledger.empty();
    const BeerResult r = beer_index(poly, bo);
    if (bo.ledger)
      write_file(opt.ledger, dump(Json{{"command", "beer"}, {"inputs", s.inputs}, {"constants", beer_ledger(r.ledger)}}));
    return {Json{{"value", r.value}, {"area", r.area}, {"trapezoids", r.trapezoids},
                 {"edge_contribution", r.edge_contribution}},
            0};
  }
  if (command == "vispairs") {
    const PolygonWithHoles poly = s.polygon(opt.polygon);
    const std::vector<Point2> pts = points2_from_json(s.remember(read_input(opt.points)).doc);
    for (const auto& p : pts)
      if (!contains_point(poly, p))
        throw InputError("point (" + Json(p.x).dump() + ", " + Json(p.y).dump() + ") is outside the polygon");
    const VisPairsResult r = count_visible_pairs(poly, pts);
    Json nodes = Json::array();
    for (const auto& n : r.nodes) {
      Json node{{"node", n.node}, {"leaf", n.leaf}};
      if (!n.leaf) {
        node["diagonal"] = {n.u, n.v};
        node["m1"] = n.m1;
        node["m2"] = n.m2;
      } else {
        node["m"] = n.m1;
      }
      node["pairs"] = n.pairs;
      nodes.push_back(node);
    }
    return {Json{{"count", r.count}, {"m", pts.size()}, {"per_node_breakdown", nodes}}, 0};
  }
  if (command == "visgraph") {
    const PolygonWithHoles poly = s.polygon(opt.polygon);
    return {Json{{"k", visibility_graph_edge_count(poly)}}, 0};
  }
  if (command == "total-l1") {
    const auto pts = points_from_json(s.remember(read_input(opt.points)).doc);
    return {Json{{"value", total_l1_pairwise(pts)}, {"m", pts.size()}, {"d", pts.empty() ? 0 : pts[0].size()}}, 0};
  }
  if (command == "expected-l1") {
    const ExpectedL1 r = expected_l1(s.polygon(opt.polygon));
    return {Json{{"value", r.value}, {"d1", r.d1}, {"d2", r.d2}, {"area", r.area}}, 0};
  }
  if (command == "expected-l2") {
    L2Options lo;
    lo.threads = opt.threads;
    lo.ledger = !opt.ledger.empty();
    const ExpectedL2 r = expected_l2(s.polygon(opt.polygon), lo);
    if (lo.ledger)
      write_file(opt.ledger,
                 dump(Json{{"command", "expected-l2"}, {"inputs", s.inputs}, {"constants", l2_ledger(r.ledger)}}));
    return {Json{{"value", r.value}, {"area", r.area}, {"visible_part", r.visible_part},
                 {"corner_part", r.corner_part}, {"corner", r.corner}},
            0};
  }
  if (command == "mc") {
    const PolygonWithHoles poly = s.polygon(opt.polygon);
    McEstimate e;
    if (opt.quantity == "beer")
      e = mc_beer(poly, opt.samples, opt.seed, opt.threads);
    else
      e = mc_expected_distance(poly, opt.quantity == "l1" ? Metric::L1 : Metric::L2, opt.samples, opt.seed,
                               opt.threads);
    return {Json{{"quantity", opt.quantity}, {"value", e.value}, {"stderr", e.std_error}, {"n", e.n},
                 {"seed", opt.seed}},
            0};
  }
  if (command == "dump") return {dump_json(s.polygon(opt.polygon)), 0};
  if (command == "selfcheck") {
    CheckConfig cfg;
    cfg.quick = opt.quick;
    cfg.threads = opt.threads;
    cfg.cli = [](const std::vector<std::string>& args) {
      std::ostringstream out, diag;
      const int code = run_cli(args, out, diag);
      return std::make_pair(code, out.str());
    };
    cfg.on_result = [&err](const CheckOutcome& c) {
      err << (c.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << c.detail << "\n";
    };
    Json checks = Json::array();
    int failed = 0;
    for (const auto& c : run_checks(cfg)) {
      failed += !c.pass;
      checks.push_back(Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return {Json{{"quick", opt.quick}, {"checks", checks}, {"failed", failed}}, failed ? 1 : 0};
  }
  throw std::logic_error("unknown command " + command);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Visibility and geodesic distance statistics of polygons", "polyvis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", opt.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1u, 1024u));
  app.add_option("--perturb", opt.perturb_eps, "Move every corner by a uniform offset in [-eps, eps]^2")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--perturb-seed", opt.perturb_seed, "Seed of the perturbation");

  auto polygon_arg = [&](CLI::App* sub) {
    sub->add_option("polygon", opt.polygon, "Polygon JSON file")->required();
  };
  auto* validate = app.add_subcommand("validate", "Check simplicity, orientation, holes and general position");
  polygon_arg(validate);
  validate->add_flag("--distinct-axes", opt.distinct_axes, "Also require distinct x and distinct y coordinates");

  auto* beer = app.add_subcommand("beer", "Probability that two uniform points see each other");
  polygon_arg(beer);
  beer->add_option("--ledger", opt.ledger, "Write every trapezoid constant to this JSON file");
  beer->add_flag("--quadrature-only", opt.quadrature_only, "Evaluate every trapezoid by quadrature");
  beer->add_option("--order", opt.order, "Sweep queue order")->check(CLI::IsMember({"fifo", "angle"}));

  auto* vispairs = app.add_subcommand("vispairs", "Number of mutually visible pairs of a point set");
  polygon_arg(vispairs);
  vispairs->add_option("points", opt.points, "Point set JSON file")->required();

  auto* visgraph = app.add_subcommand("visgraph", "Number of edges of the visibility graph");
  polygon_arg(visgraph);

  auto* total = app.add_subcommand("total-l1", "Sum of L1 distances over all pairs of a point set");
  total->add_option("points", opt.points, "Point set JSON file")->required();

  auto* el1 = app.add_subcommand("expected-l1", "Expected geodesic L1 distance of two uniform points");
  polygon_arg(el1);

  auto* el2 = app.add_subcommand("expected-l2", "Expected geodesic distance of two uniform points");
  polygon_arg(el2);
  el2->add_option("--ledger", opt.ledger, "Write every constant to this JSON file");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of beer, l1 or l2");
  mc->add_option("quantity", opt.quantity, "beer, l1 or l2")->required()->check(CLI::IsMember({"beer", "l1", "l2"}));
  polygon_arg(mc);
  mc->add_option("--samples", opt.samples, "Number of sampled pairs");
  mc->add_option("--seed", opt.seed, "Sampling seed");

  auto* dump_cmd = app.add_subcommand("dump", "Triangulation and diagonal fans as JSON");
  polygon_arg(dump_cmd);

  auto* self = app.add_subcommand("selfcheck", "Run the acceptance checks against the oracles");
  self->add_flag("--quick", opt.quick, "Smaller instances, skipping the timing and event-count checks");

  std::vector<const char*> argv{"polyvis"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Session session{opt};
  const auto start = std::chrono::steady_clock::now();
  std::pair<Json, int> result;
  try {
    result = dispatch(command, opt, session, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    err << "rejected: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json report{{"command", command}, {"inputs", session.inputs}, {"threads", opt.threads}};
  report["perturbation"] =
      opt.perturb_eps > 0 ? Json{{"eps", opt.perturb_eps}, {"seed", opt.perturb_seed}} : Json(nullptr);
  report["warnings"] = session.warnings;
  report["result"] = result.first;
  report["ledger"] = opt.ledger.empty() ? Json(nullptr) : Json(opt.ledger);
  report["timing_seconds"] = seconds;
  out << dump(report);
  return result.second;
}

}  // namespace polyvis::app
