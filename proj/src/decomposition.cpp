#include "polyvis/decomposition.hpp"

#include <algorithm>
#include <unordered_map>

namespace polyvis {

std::pair<std::size_t, std::size_t> balanced_split(const Triangulation& tri,
                                                   const std::vector<std::size_t>& tris) {
  if (tris.size() < 2) throw GeometryError("nothing to split");
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < tris.size(); ++i) local[tris[i]] = i;
  const std::size_t m = tris.size();
  std::vector<std::size_t> parent(m, m), order;
  order.reserve(m);
  std::vector<char> seen(m, 0);
  order.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t t = order[head];
    for (const auto& nb : tri.neighbor[tris[t]]) {
      if (!nb) continue;
      auto it = local.find(*nb);
      if (it == local.end() || seen[it->second]) continue;
      seen[it->second] = 1;
      parent[it->second] = t;
      order.push_back(it->second);
    }
  }
  if (order.size() != m) throw GeometryError("triangle set is not connected");
  std::vector<std::size_t> size(m, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent[*it] < m) size[parent[*it]] += size[*it];
  std::size_t best = m, best_cost = m + 1;
  for (std::size_t c = 0; c < m; ++c) {
    if (parent[c] >= m) continue;
    const std::size_t cost = std::max(size[c], m - size[c]);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  const std::size_t a = tris[best], b = tris[parent[best]];
  if (size[best] <= m - size[best]) return {a, b};
  return {b, a};
}

DecompositionTree build_decomposition_tree(const Triangulation& tri) {
  DecompositionTree tree;
  std::vector<std::size_t> all(tri.triangles.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  tree.nodes.push_back(DecompositionNode{all, 0, 0, -1, -1});
  tree.root = 0;
  std::vector<int> label(tri.triangles.size(), 0);
  std::vector<std::size_t> work{0};
  while (!work.empty()) {
    const std::size_t id = work.back();
    work.pop_back();
    if (tree.nodes[id].triangles.size() < 2) continue;
    const auto [a, b] = balanced_split(tri, tree.nodes[id].triangles);
    // Shared side of a and b, oriented so that a lies to its left.
    std::size_t u = 0, v = 0;
    for (int k = 0; k < 3; ++k)
      if (tri.neighbor[a][k] == b) {
        u = tri.triangles[a][k];
        v = tri.triangles[a][(k + 1) % 3];
      }
    // Flood the side containing a without crossing into b.
    const int mark = static_cast<int>(tree.nodes.size());
    for (std::size_t t : tree.nodes[id].triangles) label[t] = static_cast<int>(id);
    std::vector<std::size_t> side_a, stack{a};
    label[a] = mark;
    while (!stack.empty()) {
      const std::size_t t = stack.back();
      stack.pop_back();
      side_a.push_back(t);
      for (const auto& nb : tri.neighbor[t]) {
        if (!nb || *nb == b || label[*nb] != static_cast<int>(id)) continue;
        label[*nb] = mark;
        stack.push_back(*nb);
      }
    }
    std::vector<std::size_t> side_b;
    for (std::size_t t : tree.nodes[id].triangles)
      if (label[t] != mark) side_b.push_back(t);
    std::sort(side_a.begin(), side_a.end());
    const int first = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(DecompositionNode{std::move(side_a), 0, 0, -1, -1});
    tree.nodes.push_back(DecompositionNode{std::move(side_b), 0, 0, -1, -1});
    DecompositionNode& node = tree.nodes[id];
    node.u = u;
    node.v = v;
    node.first = first;
    node.second = first + 1;
    work.push_back(first);
    work.push_back(first + 1);
  }
  return tree;
}

std::size_t DecompositionTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 1}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes[id].leaf()) {
      stack.emplace_back(nodes[id].first, d + 1);
      stack.emplace_back(nodes[id].second, d + 1);
    }
  }
  return best;
}

}  // namespace polyvis
