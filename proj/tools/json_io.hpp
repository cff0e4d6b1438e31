#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyvis/geom.hpp"

namespace polyvis::app {

using Json = nlohmann::ordered_json;

/// Malformed input: unreadable file, bad JSON, wrong shape, or a coordinate
/// that is not exactly a double.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True when the decimal text denotes exactly the value of `x`.
bool decimal_is_exact(const std::string& text, double x);

/// Exact decimal expansion of x in scientific notation, trailing zeros removed.
std::string exact_decimal(double x);

/// Parses a decimal string and requires it to be exactly representable.
double parse_exact_decimal(const std::string& text);

struct InputFile {
  std::string path;
  std::string bytes;
  std::string digest;  // FNV-1a 64 of the bytes, hex
  Json doc;
};

/// Reads and parses a JSON file. Every JSON number must be exact as a double.
InputFile read_input(const std::string& path);

/// {"outer": [[x, y], ...], "holes": [[[x, y], ...], ...]}.
PolygonWithHoles polygon_from_json(const Json& doc);
/// {"points": [[x, y], ...]}, optionally with "d": 2.
std::vector<Point2> points2_from_json(const Json& doc);
/// {"d": k, "points": [[...], ...]}; without "d" the dimension is taken from
/// the first point.
std::vector<std::vector<double>> points_from_json(const Json& doc);

/// Coordinates are written as exact decimal strings, so the files read back
/// to the same doubles.
Json polygon_to_json(const PolygonWithHoles& poly);
Json points_to_json(const std::vector<Point2>& pts);

std::string fnv1a_hex(const std::string& bytes);

/// Pretty-printed JSON with two-space indent; floating values use 17
/// significant digits and non-finite values print as null.
std::string dump(const Json& j);

}  // namespace polyvis::app
