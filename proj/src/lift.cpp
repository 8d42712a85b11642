#include "acpl/lift.hpp"

#include <algorithm>
#include <cmath>

#include "acpl/error.hpp"

namespace acpl {

namespace {

// bilinear interpolation of the scalar representative at w, with corner
// values flipped when the straight path from w to the corner crosses the
// seam ray {y = py, x >= px}
double interp_local_gauge(const GridSpec& g, const std::vector<double>& u, Vec3 w, double px,
                          double py) {
  double fx = (w.x - g.origin.x) / g.h;
  double fy = (w.y - g.origin.y) / g.h;
  if (fx < 0 || fy < 0 || fx > double(g.dims[0] - 1) || fy > double(g.dims[1] - 1))
    fail(Err::InvalidConfig, "double-cover image falls outside the base grid");
  int64_t i = std::min<int64_t>(g.dims[0] - 2, std::max<int64_t>(0, int64_t(fx)));
  int64_t j = std::min<int64_t>(g.dims[1] - 2, std::max<int64_t>(0, int64_t(fy)));
  double tx = fx - double(i), ty = fy - double(j);
  double val = 0;
  const double wts[2] = {1.0 - ty, ty};
  const double wxs[2] = {1.0 - tx, tx};
  for (int dj = 0; dj < 2; ++dj)
    for (int di = 0; di < 2; ++di) {
      NodeId c = g.idx(i + di, j + dj, 0);
      Vec3 cp = g.pos(c);
      double cv = u[size_t(c)];
      // sign flip when w -> corner crosses the ray
      if ((w.y - py) * (cp.y - py) < 0) {
        double t = (py - w.y) / (cp.y - w.y);
        double xc = w.x + t * (cp.x - w.x);
        if (xc > px) cv = -cv;
      }
      val += wxs[di] * wts[dj] * cv;
    }
  return val;
}

}  // namespace

std::vector<double> lift_to_double_cover_2d(const GaugeSection& s, const Vec3& p,
                                            const GridSpec& vgrid,
                                            const BoundaryManifold* gamma) {
  const GridSpec& g = s.grid();
  if (g.n != 2 || vgrid.n != 2) fail(Err::InvalidConfig, "double cover is a 2d operation");
  if (gamma && gamma->components.size() > 1) {
    // image disk radius: max |z|^2 over the v-grid box corners
    Vec3 lo = vgrid.box_min(), hi = vgrid.box_max();
    double zmax2 = 0;
    for (int c = 0; c < 4; ++c) {
      Vec3 corner{c & 1 ? hi.x : lo.x, c & 2 ? hi.y : lo.y, 0};
      zmax2 = std::max(zmax2, corner.norm2());
    }
    int own = nearest_component(*gamma, p);
    for (int ci = 0; ci < int(gamma->components.size()); ++ci) {
      if (ci == own) continue;
      if (distance_to_component(*gamma, ci, p) <= zmax2)
        fail(Err::RegionTouchesOtherComponent,
             "double-cover image disk reaches another boundary component");
    }
  }
  int64_t M = vgrid.nodes();
  std::vector<double> v(size_t(M), 0.0);
  const double nudge = 1e-9 * g.h;
  for (NodeId z = 0; z < M; ++z) {
    Vec3 zp = vgrid.pos(z);
    double z1 = zp.x, z2 = zp.y;
    if (z1 == 0 && z2 == 0) { v[size_t(z)] = 0; continue; }
    // w = z^2 + p
    Vec3 w{z1 * z1 - z2 * z2 + p.x, 2 * z1 * z2 + p.y};
    double sgn;
    if (z2 != 0) {
      sgn = z2 > 0 ? 1.0 : -1.0;
    } else {
      // on the real axis the image sits on the cut; approach from above
      sgn = z1 > 0 ? 1.0 : -1.0;
      w.y += nudge;
    }
    v[size_t(z)] = sgn * interp_local_gauge(g, s.u, w, p.x, p.y);
  }
  return v;
}

}  // namespace acpl
