#include "json_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace polyvis::app {
namespace {

// Sign, significant digits without leading or trailing zeros, and exponent e
// with value = 0.digits * 10^e. Zero has no digits.
struct Decimal {
  bool negative = false;
  std::string digits;
  long exponent = 0;
  bool operator==(const Decimal&) const = default;
};

std::optional<Decimal> canonical_decimal(const std::string& s) {
  Decimal d;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') {
    d.negative = true;
    ++i;
  }
  std::string mantissa;
  long point = -1;
  bool any = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (point >= 0) return std::nullopt;
      point = static_cast<long>(mantissa.size());
    } else {
      mantissa += s[i];
      any = true;
    }
  }
  if (!any) return std::nullopt;
  if (point < 0) point = static_cast<long>(mantissa.size());
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    const char* first = s.data() + i;
    if (i < s.size() && s[i] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), exp10);
    if (ec != std::errc() || ptr == first) return std::nullopt;
    i = static_cast<std::size_t>(ptr - s.data());
  }
  if (i != s.size()) return std::nullopt;
  const std::size_t lead = mantissa.find_first_not_of('0');
  if (lead == std::string::npos) return Decimal{};
  const std::size_t trail = mantissa.find_last_not_of('0');
  d.digits = mantissa.substr(lead, trail - lead + 1);
  d.exponent = point - static_cast<long>(lead) + exp10;
  return d;
}

class NumberCheck : public nlohmann::json_sax<nlohmann::json> {
 public:
  std::string bad;

  bool null() override { return true; }
  bool boolean(bool) override { return true; }
  bool number_integer(number_integer_t v) override { return check(std::to_string(v), static_cast<double>(v)); }
  bool number_unsigned(number_unsigned_t v) override { return check(std::to_string(v), static_cast<double>(v)); }
  bool number_float(number_float_t v, const string_t& raw) override { return check(raw, v); }
  bool string(string_t&) override { return true; }
  bool binary(binary_t&) override { return true; }
  bool start_object(std::size_t) override { return true; }
  bool key(string_t&) override { return true; }
  bool end_object() override { return true; }
  bool start_array(std::size_t) override { return true; }
  bool end_array() override { return true; }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  bool check(const std::string& raw, double v) {
    if (std::isfinite(v) && decimal_is_exact(raw, v)) return true;
    bad = raw;
    return false;
  }
};

double coordinate(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_exact_decimal(v.get<std::string>());
  throw InputError("coordinate must be a number or a decimal string, got " + v.dump());
}

Point2 point_from_json(const Json& v) {
  if (!v.is_array() || v.size() != 2) throw InputError("point must be [x, y], got " + v.dump());
  return {coordinate(v[0]), coordinate(v[1])};
}

Ring ring_from_json(const Json& v, const char* what) {
  if (!v.is_array()) throw InputError(std::string(what) + " must be an array of points");
  Ring r;
  for (const auto& p : v) r.push_back(point_from_json(p));
  return r;
}

void put_double(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

bool is_flat(const Json& j) {
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(2 * (indent + 1), ' '), close(2 * indent, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(k).dump() + ": ";
      emit(v, out, indent + 1);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool flat = is_flat(j);
    out += flat ? "[" : "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += flat ? ", " : ",\n";
      if (!flat) out += pad;
      emit(j[i], out, indent + 1);
    }
    out += flat ? "]" : "\n" + close + "]";
  } else if (j.is_number_float()) {
    put_double(out, j.get<double>());
  } else {
    out += j.dump();
  }
}

}  // namespace

bool decimal_is_exact(const std::string& text, double x) {
  const auto want = canonical_decimal(text);
  if (!want || !std::isfinite(x)) return false;
  // 767 significant digits cover every double exactly.
  char buf[1100];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 800);
  if (res.ec != std::errc()) return false;
  const auto have = canonical_decimal(std::string(buf, res.ptr));
  if (!have) return false;
  if (want->digits.empty() && have->digits.empty()) return true;
  return *want == *have;
}

std::string exact_decimal(double x) {
  char buf[1100];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 800);
  std::string s(buf, res.ptr);
  const std::size_t e = s.find('e');
  std::string mantissa = s.substr(0, e);
  mantissa.erase(mantissa.find_last_not_of('0') + 1);
  if (mantissa.back() == '.') mantissa.pop_back();
  return s.compare(e, std::string::npos, "e+00") == 0 ? mantissa : mantissa + s.substr(e);
}

double parse_exact_decimal(const std::string& text) {
  double x = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, x, std::chars_format::general);
  if (ec != std::errc() || ptr != last) throw InputError("not a decimal number: \"" + text + "\"");
  if (!decimal_is_exact(text, x)) throw InputError("decimal \"" + text + "\" is not exactly representable as a double");
  return x;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

InputFile read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  InputFile f{path, ss.str(), "", {}};
  f.digest = fnv1a_hex(f.bytes);
  NumberCheck check;
  const bool ok = nlohmann::json::sax_parse(f.bytes, &check);
  if (!check.bad.empty()) throw InputError(path + ": number " + check.bad + " is not exactly representable as a double");
  if (!ok) throw InputError(path + ": malformed JSON");
  try {
    f.doc = Json::parse(f.bytes);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return f;
}

PolygonWithHoles polygon_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("outer")) throw InputError("polygon file needs an \"outer\" ring");
  PolygonWithHoles poly;
  poly.outer = ring_from_json(doc["outer"], "outer");
  if (doc.contains("holes")) {
    if (!doc["holes"].is_array()) throw InputError("\"holes\" must be an array of rings");
    for (const auto& h : doc["holes"]) poly.holes.push_back(ring_from_json(h, "hole"));
  }
  return poly;
}

std::vector<std::vector<double>> points_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
    throw InputError("point file needs a \"points\" array");
  std::optional<std::size_t> d;
  if (doc.contains("d")) {
    if (!doc["d"].is_number_unsigned() || doc["d"].get<std::size_t>() == 0)
      throw InputError("\"d\" must be a positive integer");
    d = doc["d"].get<std::size_t>();
  }
  std::vector<std::vector<double>> pts;
  for (const auto& p : doc["points"]) {
    if (!p.is_array()) throw InputError("point must be an array of coordinates, got " + p.dump());
    if (!d) d = p.size();
    if (p.size() != *d || *d == 0) throw InputError("point " + p.dump() + " does not have dimension " + std::to_string(*d));
    std::vector<double> q;
    for (const auto& c : p) q.push_back(coordinate(c));
    pts.push_back(std::move(q));
  }
  return pts;
}

std::vector<Point2> points2_from_json(const Json& doc) {
  if (doc.is_object() && doc.contains("d") && doc["d"] != 2) throw InputError("planar points need \"d\": 2");
  std::vector<Point2> pts;
  for (const auto& p : points_from_json(doc)) {
    if (p.size() != 2) throw InputError("planar points need two coordinates");
    pts.push_back({p[0], p[1]});
  }
  return pts;
}

Json polygon_to_json(const PolygonWithHoles& poly) {
  auto ring = [](const Ring& r) {
    Json a = Json::array();
    for (const auto& p : r) a.push_back(Json::array({exact_decimal(p.x), exact_decimal(p.y)}));
    return a;
  };
  Json holes = Json::array();
  for (const auto& h : poly.holes) holes.push_back(ring(h));
  return Json{{"outer", ring(poly.outer)}, {"holes", holes}};
}

Json points_to_json(const std::vector<Point2>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(Json::array({exact_decimal(p.x), exact_decimal(p.y)}));
  return Json{{"points", a}};
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

}  // namespace polyvis::app
