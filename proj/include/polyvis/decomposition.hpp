#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "polyvis/triangulation.hpp"

namespace polyvis {

/// A sub-polygon given by a connected set of triangles. Internal nodes are
/// split by the diagonal (u, v); the first child lies to the left of u -> v.
struct DecompositionNode {
  std::vector<std::size_t> triangles;
  std::size_t u = 0, v = 0;
  int first = -1, second = -1;
  bool leaf() const { return first < 0; }
};

struct DecompositionTree {
  std::vector<DecompositionNode> nodes;
  std::size_t root = 0;
  std::size_t depth() const;
};

/// Dual-tree edge (a, b) splitting the connected triangle set `tris` most evenly;
/// a is on the smaller side. Requires at least two triangles.
std::pair<std::size_t, std::size_t> balanced_split(const Triangulation& tri,
                                                   const std::vector<std::size_t>& tris);

DecompositionTree build_decomposition_tree(const Triangulation& tri);

}  // namespace polyvis
