#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "checks.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json_io.hpp"

using namespace polyvis;
using namespace polyvis::app;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("polyvis-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
};

Json result_of(const Run& r) { return Json::parse(r.out)["result"]; }

}  // namespace

TEST_CASE("exact decimals") {
  CHECK(decimal_is_exact("0.5", 0.5));
  CHECK(decimal_is_exact("-1.25e3", -1250.0));
  CHECK(decimal_is_exact("00012.500", 12.5));
  CHECK(decimal_is_exact("0", 0.0));
  CHECK(decimal_is_exact("-0.0", 0.0));
  CHECK(decimal_is_exact("1E+2", 100.0));
  CHECK_FALSE(decimal_is_exact("0.1", 0.1));
  CHECK_FALSE(decimal_is_exact("9007199254740993", 9007199254740992.0));
  CHECK_FALSE(decimal_is_exact("1.5x", 1.5));
  CHECK_FALSE(decimal_is_exact("", 0.0));
  CHECK(parse_exact_decimal("0.375") == 0.375);
  CHECK_THROWS_AS(parse_exact_decimal("0.3"), InputError);
  CHECK_THROWS_AS(parse_exact_decimal("abc"), InputError);
  CHECK_THROWS_AS(parse_exact_decimal("1e999"), InputError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double x = i % 7 ? u(rng) : std::ldexp(u(rng), -60);
    const std::string s = exact_decimal(x);
    CHECK(decimal_is_exact(s, x));
    CHECK(parse_exact_decimal(s) == x);
  }
  CHECK(exact_decimal(2.0) == "2");
  CHECK(exact_decimal(0.0) == "0");
  CHECK(exact_decimal(0.375) == "3.75e-01");
}

TEST_CASE("JSON output") {
  CHECK(dump(Json{{"a", 0.1}, {"b", {1, 2}}, {"c", nullptr}}) == "{\n  \"a\": 0.10000000000000001,\n  \"b\": [1, 2],\n  \"c\": null\n}\n");
  CHECK(dump(Json{{"x", std::nan("")}}) == "{\n  \"x\": null\n}\n");
  CHECK(dump(Json::array()) == "[]\n");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");

  const auto hex = fixtures::l_hexagon_distinct();
  const Json j = polygon_to_json(hex);
  CHECK(j["outer"].is_array());
  CHECK(j["outer"][1].is_array());
  CHECK(polygon_from_json(Json::parse(dump(j))).outer == hex.outer);
  const std::vector<Point2> pts{{0.1, 0.2}, {3, -4}};
  CHECK(points2_from_json(Json::parse(dump(points_to_json(pts)))) == pts);
}

TEST_CASE("input files") {
  TempDir dir;
  const auto sq = dir.write("sq.json", R"({"outer": [["0", "0"], [1, 0], ["1", "1.0"], [0, 1]]})");
  const auto poly = polygon_from_json(read_input(sq).doc);
  CHECK(poly.outer.size() == 4);
  CHECK(poly.outer[2] == Point2{1, 1});

  CHECK_THROWS_AS(read_input((dir.path / "missing.json").string()), InputError);
  CHECK_THROWS_AS(read_input(dir.write("a.json", "{\"outer\": [")), InputError);
  CHECK_THROWS_AS(read_input(dir.write("b.json", R"({"outer": [[0.1, 0]]})")), InputError);
  CHECK_THROWS_AS(polygon_from_json(read_input(dir.write("c.json", R"({"outer": [[0, 0, 1]]})")).doc), InputError);
  CHECK_THROWS_AS(polygon_from_json(read_input(dir.write("d.json", R"({"inner": []})")).doc), InputError);

  const auto pts = points_from_json(read_input(dir.write("p.json", R"({"d": 3, "points": [[1, 2, 3], ["4", 5, 6]]})")).doc);
  CHECK(pts.size() == 2);
  CHECK(pts[1][0] == 4.0);
  CHECK_THROWS_AS(points_from_json(read_input(dir.write("q.json", R"({"d": 3, "points": [[1, 2]]})")).doc), InputError);
  CHECK_THROWS_AS(points2_from_json(read_input(dir.write("r.json", R"({"d": 3, "points": []})")).doc), InputError);
}

TEST_CASE("command line") {
  TempDir dir;
  const auto sq = dir.write("sq.json", dump(polygon_to_json(fixtures::square())));
  const auto cw = dir.write("cw.json", R"({"outer": [[0, 0], [0, 1], [1, 1], [1, 0]]})");
  const auto hex = dir.write("hex.json", dump(polygon_to_json(fixtures::l_hexagon_distinct())));
  const auto collinear = dir.write("col.json", R"({"outer": [[0, 0], [1, 0], [2, 0], [2, 1], [0, 1]]})");
  const auto pts = dir.write("pts.json", R"({"points": [[0.25, 0.25], [1.75, 0.75], [0.25, 1.75]]})");

  auto v = cli({"validate", sq});
  CHECK(v.code == 0);
  CHECK(result_of(v)["valid"] == true);
  CHECK(Json::parse(v.out)["inputs"][0]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);

  auto c = cli({"validate", cw});
  CHECK(c.code == 0);
  CHECK(Json::parse(c.out)["warnings"].size() == 1);

  auto h = cli({"validate", hex, "--distinct-axes"});
  INFO(h.err);
  CHECK(h.code == 0);

  auto bad = cli({"validate", collinear});
  CHECK(bad.code == 2);
  CHECK(result_of(bad)["valid"] == false);
  CHECK(result_of(bad)["issues"][0]["kind"].is_string());

  CHECK(cli({"beer", collinear}).code == 2);
  CHECK(cli({"beer", (dir.path / "none.json").string()}).code == 2);
  CHECK(cli({"beer"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"--help"}).code == 0);

  auto b = cli({"beer", sq});
  CHECK(b.code == 0);
  CHECK(result_of(b)["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  const auto ledger = (dir.path / "ledger.json").string();
  auto bl = cli({"beer", hex, "--ledger", ledger, "--order", "angle"});
  CHECK(bl.code == 0);
  const Json led = Json::parse(std::ifstream(ledger));
  CHECK(led["constants"].size() > 0);
  CHECK(led["constants"][0]["params"].contains("y_pl"));

  auto vp = cli({"vispairs", hex, pts});
  CHECK(vp.code == 0);
  CHECK(result_of(vp)["count"] == 2);  // (0.25,0.25) sees both; the other two are hidden from each other
  CHECK(cli({"vispairs", sq, pts}).code == 2);  // points outside

  CHECK(result_of(cli({"visgraph", sq}))["k"] == 6);
  CHECK(result_of(cli({"total-l1", pts}))["value"].get<double>() == doctest::Approx(2.0 + 1.5 + 2.5));
  CHECK(cli({"expected-l1", sq}).code == 2);  // shared x coordinates
  CHECK(result_of(cli({"expected-l1", sq, "--perturb", "1e-9"}))["value"].get<double>() ==
        doctest::Approx(2.0 / 3).epsilon(1e-6));

  auto l2 = cli({"expected-l2", sq, "--ledger", ledger});
  CHECK(result_of(l2)["value"].get<double>() == doctest::Approx(0.52140543).epsilon(1e-7));
  const Json l2led = Json::parse(std::ifstream(ledger));
  std::set<std::string> kinds;
  for (const auto& k : l2led["constants"]) kinds.insert(k["kind"].get<std::string>());
  CHECK(kinds.count("trapezoid") == 1);

  auto mc = cli({"mc", "beer", hex, "--samples", "5000", "--seed", "9"});
  CHECK(mc.code == 0);
  CHECK(result_of(mc)["n"] == 5000);
  CHECK(result_of(mc).contains("stderr"));
  CHECK(cli({"mc", "l3", hex}).code == 2);

  auto p = cli({"beer", hex, "--perturb", "1e-6", "--perturb-seed", "4"});
  CHECK(Json::parse(p.out)["perturbation"]["seed"] == 4);
  CHECK(Json::parse(p.out)["warnings"].size() == 1);

  auto d = cli({"dump", sq});
  CHECK(result_of(d)["triangles"].size() == 2);
  CHECK(result_of(d)["fans"].size() == 4);
}

TEST_CASE("quick self check runs its checks") {
  CheckConfig cfg;
  cfg.quick = true;
  cfg.only = {1, 7, 11};
  const auto r = run_checks(cfg);
  REQUIRE(r.size() == 3);
  for (const auto& c : r) CHECK_MESSAGE(c.pass, c.detail);
  CHECK(strip_timing("a\n  \"timing_seconds\": 1\nb\n") == "a\nb\n");
}
