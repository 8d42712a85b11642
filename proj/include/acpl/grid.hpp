#pragma once

#include <array>
#include <cstdint>
#include <cassert>
#include <vector>

#include "acpl/geom.hpp"

namespace acpl {

using NodeId = int64_t;

// Uniform node-centered grid on an axis-aligned box. Nodes are indexed
// axis-major with x fastest: id = i + dims[0]*(j + dims[1]*k). Unused axes
// (a >= n) have dims[a] = 1. Edges are enumerated per axis in the same
// order; the axis-a block holds every edge from a node with coord_a <
// dims[a]-1 to its +a neighbor.
struct GridSpec {
  int n = 3;
  std::array<int64_t, 3> dims{1, 1, 1};
  double h = 1.0;
  Vec3 origin;

  int64_t nodes() const { return dims[0] * dims[1] * dims[2]; }

  NodeId idx(int64_t i, int64_t j, int64_t k) const {
    return i + dims[0] * (j + dims[1] * k);
  }
  std::array<int64_t, 3> coords(NodeId id) const {
    int64_t i = id % dims[0];
    int64_t r = id / dims[0];
    return {i, r % dims[1], r / dims[1]};
  }
  Vec3 pos(NodeId id) const {
    auto c = coords(id);
    return {origin.x + h * double(c[0]), origin.y + h * double(c[1]), origin.z + h * double(c[2])};
  }
  int64_t stride(int axis) const {
    return axis == 0 ? 1 : (axis == 1 ? dims[0] : dims[0] * dims[1]);
  }
  bool on_boundary(NodeId id) const {
    auto c = coords(id);
    for (int a = 0; a < n; ++a)
      if (c[a] == 0 || c[a] == dims[a] - 1) return true;
    return false;
  }
  // extent of the box along each axis (node span)
  double side(int axis) const { return h * double(dims[axis] - 1); }
  Vec3 box_min() const { return origin; }
  Vec3 box_max() const {
    return {origin.x + side(0), origin.y + (n > 1 ? side(1) : 0), origin.z + (n > 2 ? side(2) : 0)};
  }

  int64_t edge_count(int axis) const {
    int64_t c = 1;
    for (int a = 0; a < 3; ++a) c *= (a == axis) ? dims[a] - 1 : dims[a];
    return c;
  }
  int64_t edge_base(int axis) const {
    int64_t b = 0;
    for (int a = 0; a < axis; ++a) b += edge_count(a);
    return b;
  }
  int64_t total_edges() const { return edge_base(n - 1) + edge_count(n - 1); }
  // packed edge id of (node -> node + e_axis) in the axis-major enumeration
  int64_t edge_id(int axis, NodeId lower) const {
    auto c = coords(lower);
    assert(c[axis] < dims[axis] - 1);
    std::array<int64_t, 3> d = dims;
    d[axis] -= 1;
    return edge_base(axis) + c[0] + d[0] * (c[1] + d[1] * c[2]);
  }
};

// centered box: node (0,..) at -h*(dims-1)/2 per used axis
inline GridSpec centered_grid(int n, std::array<int64_t, 3> dims, double h) {
  GridSpec g;
  g.n = n;
  g.dims = dims;
  for (int a = n; a < 3; ++a) g.dims[a] = 1;
  g.h = h;
  for (int a = 0; a < n; ++a) g.origin[a] = -0.5 * h * double(g.dims[a] - 1);
  return g;
}

// closed node path; consecutive entries (cyclically) differ by one grid step
struct GridLoop {
  std::vector<NodeId> nodes;

  bool valid(const GridSpec& g) const {
    if (nodes.size() < 4) return false;
    for (size_t i = 0; i < nodes.size(); ++i) {
      NodeId a = nodes[i], b = nodes[(i + 1) % nodes.size()];
      auto ca = g.coords(a), cb = g.coords(b);
      int moved = 0;
      for (int ax = 0; ax < 3; ++ax) {
        int64_t d = cb[ax] - ca[ax];
        if (d == 1 || d == -1) ++moved;
        else if (d != 0) return false;
      }
      if (moved != 1) return false;
    }
    return true;
  }
};

// axis-aligned rectangle loop in the (a0,a1) plane starting at base node,
// with side lengths s0, s1 (in steps)
inline GridLoop rectangle_loop(const GridSpec& g, NodeId base, int a0, int a1,
                               int64_t s0, int64_t s1) {
  GridLoop loop;
  auto c = g.coords(base);
  assert(c[a0] + s0 < g.dims[a0] && c[a1] + s1 < g.dims[a1]);
  NodeId cur = base;
  for (int64_t i = 0; i < s0; ++i) { loop.nodes.push_back(cur); cur += g.stride(a0); }
  for (int64_t i = 0; i < s1; ++i) { loop.nodes.push_back(cur); cur += g.stride(a1); }
  for (int64_t i = 0; i < s0; ++i) { loop.nodes.push_back(cur); cur -= g.stride(a0); }
  for (int64_t i = 0; i < s1; ++i) { loop.nodes.push_back(cur); cur -= g.stride(a1); }
  return loop;
}

}  // namespace acpl
