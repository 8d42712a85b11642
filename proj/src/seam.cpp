#include <algorithm>
#include <cmath>
#include <limits>

#include "acpl/bundle.hpp"
#include "acpl/error.hpp"

namespace acpl {

namespace {

struct IndexBox {
  int64_t lo[3], hi[3];
};

// node-index ranges covering [lo,hi] inflated by one cell
IndexBox node_range(const GridSpec& g, Vec3 lo, Vec3 hi) {
  IndexBox b;
  for (int a = 0; a < 3; ++a) {
    if (a >= g.n) { b.lo[a] = 0; b.hi[a] = 0; continue; }
    double flo = (lo[a] - g.origin[a]) / g.h - 1.0;
    double fhi = (hi[a] - g.origin[a]) / g.h + 1.0;
    b.lo[a] = std::max<int64_t>(0, int64_t(std::floor(flo)));
    b.hi[a] = std::min<int64_t>(g.dims[a] - 1, int64_t(std::ceil(fhi)));
  }
  return b;
}

}  // namespace

SeamSurface build_seam(const GridSpec& grid, const BoundaryManifold& gamma) {
  SeamSurface seam;
  seam.panels = make_seam_panels(gamma, grid);
  int64_t N = grid.nodes();
  seam.flip.assign(size_t(3 * N), 0);

  const double inf = std::numeric_limits<double>::infinity();
  seam.bbox_lo = {inf, inf, inf};
  seam.bbox_hi = {-inf, -inf, -inf};
  auto grow = [&](const Vec3& p) {
    for (int a = 0; a < 3; ++a) {
      seam.bbox_lo[a] = std::min(seam.bbox_lo[a], p[a]);
      seam.bbox_hi[a] = std::max(seam.bbox_hi[a], p[a]);
    }
  };

  auto toggle = [&](int axis, NodeId lower) {
    seam.flip[size_t(axis) * size_t(N) + size_t(lower)] ^= 1;
  };

  if (gamma.n == 2) {
    for (const auto& sg : seam.panels.segs) {
      grow(sg[0]);
      grow(sg[1]);
      Vec3 lo{std::min(sg[0].x, sg[1].x), std::min(sg[0].y, sg[1].y)};
      Vec3 hi{std::max(sg[0].x, sg[1].x), std::max(sg[0].y, sg[1].y)};
      IndexBox b = node_range(grid, lo, hi);
      for (int axis = 0; axis < 2; ++axis) {
        for (int64_t j = b.lo[1]; j <= b.hi[1]; ++j)
          for (int64_t i = b.lo[0]; i <= b.hi[0]; ++i) {
            auto c = grid.coords(grid.idx(i, j, 0));
            if (c[axis] >= grid.dims[axis] - 1) continue;
            NodeId v = grid.idx(i, j, 0);
            Vec3 p = grid.pos(v);
            Vec3 q = p;
            q[axis] += grid.h;
            int sign = 0;
            Cross cr = segment_segment_cross_2d(p, q, sg[0], sg[1], sign);
            if (cr == Cross::Degenerate)
              fail(Err::DegenerateGamma,
                   "grid edge grazes the seam; boundary must be offset from grid planes");
            if (cr == Cross::Hit) toggle(axis, v);
          }
      }
    }
    return seam;
  }

  for (const auto& tr : seam.panels.tris) {
    grow(tr[0]);
    grow(tr[1]);
    grow(tr[2]);
    Vec3 lo = tr[0], hi = tr[0];
    for (int t = 1; t < 3; ++t)
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], tr[t][a]);
        hi[a] = std::max(hi[a], tr[t][a]);
      }
    IndexBox b = node_range(grid, lo, hi);
    for (int axis = 0; axis < 3; ++axis) {
      for (int64_t k = b.lo[2]; k <= b.hi[2]; ++k)
        for (int64_t j = b.lo[1]; j <= b.hi[1]; ++j)
          for (int64_t i = b.lo[0]; i <= b.hi[0]; ++i) {
            int64_t c[3] = {i, j, k};
            if (c[axis] >= grid.dims[axis] - 1) continue;
            NodeId v = grid.idx(i, j, k);
            Vec3 p = grid.pos(v);
            Vec3 q = p;
            q[axis] += grid.h;
            int sign = 0;
            Cross cr = segment_triangle_cross(p, q, tr[0], tr[1], tr[2], sign);
            if (cr == Cross::Degenerate)
              fail(Err::DegenerateGamma,
                   "grid edge grazes the seam; boundary must be offset from grid planes");
            if (cr == Cross::Hit) toggle(axis, v);
          }
    }
  }
  return seam;
}

}  // namespace acpl
