#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "acpl/geometry.hpp"
#include "acpl/grid.hpp"
#include "acpl/rng.hpp"

namespace acpl {

// Discrete realization of the spanning surface used to fix the gauge: the
// cone panels over each boundary component plus the set of grid edges that
// cross them an odd number of times. Crossing one of those edges flips sign.
struct SeamSurface {
  SeamPanels panels;
  std::vector<uint8_t> flip;  // 3*N, indexed axis*N + lower node, 1 = odd crossings
  Vec3 bbox_lo, bbox_hi;      // bounding box of the panels

  int64_t flip_count() const {
    int64_t c = 0;
    for (uint8_t f : flip) c += f;
    return c;
  }
};

SeamSurface build_seam(const GridSpec& grid, const BoundaryManifold& gamma);

// Edge signs sigma in {-1,+1}. sig[axis*N + v] is the sign of the edge from
// node v to v + e_axis (entries past the axis extent are +1 and unused).
struct GaugeField {
  GridSpec grid;
  std::vector<int8_t> sig;

  int8_t edge_sign(int axis, NodeId lower) const {
    return sig[size_t(axis) * size_t(grid.nodes()) + size_t(lower)];
  }
  // product of the four edge signs of the plaquette at `base` in axes (a,b)
  int holonomy(NodeId base, int a, int b) const {
    int64_t N = grid.nodes();
    int64_t sa = grid.stride(a), sb = grid.stride(b);
    int h = sig[size_t(a) * size_t(N) + size_t(base)];
    h *= sig[size_t(b) * size_t(N) + size_t(base + sa)];
    h *= sig[size_t(a) * size_t(N) + size_t(base + sb)];
    h *= sig[size_t(b) * size_t(N) + size_t(base)];
    return h;
  }
};

GaugeField trivial_gauge(const GridSpec& grid);
GaugeField gauge_field_from_seam(const GridSpec& grid, const SeamSurface& seam);

// Section of the line bundle in a fixed gauge: one value per node.
struct GaugeSection {
  std::shared_ptr<const GaugeField> gauge;
  std::vector<double> u;
  double eps = 0.1;

  const GridSpec& grid() const { return gauge->grid; }
};

// tau is a node-wise sign field; u' = tau u, sigma'_xy = tau_x sigma_xy tau_y
GaugeSection gauge_transform(const GaugeSection& s, const std::vector<int8_t>& tau);
std::vector<int8_t> random_sign_field(const GridSpec& grid, Rng& rng);

// gauge-covariant zero-crossing count along a closed loop (u = 0 counts as
// positive); parity equals the linking parity for converged sections
struct ParityResult {
  int64_t crossings;
  int parity;
};
ParityResult zero_parity(const GaugeSection& s, const GridLoop& loop);

// product of edge signs around a loop mapped to {0,1}: 1 means the loop is
// orientation-reversing (odd linking with the boundary)
int loop_sign_parity(const GaugeField& gf, const GridLoop& loop);

// random axis-aligned rectangle loop avoiding the boundary curve: every loop
// vertex keeps distance > 2h from gamma. Retries until the linking predicate
// is well posed.
GridLoop random_loop(const GridSpec& grid, const BoundaryManifold& gamma, Rng& rng);

}  // namespace acpl
