#include <cmath>

#include "acpl/bundle.hpp"
#include "acpl/error.hpp"

namespace acpl {

GaugeField trivial_gauge(const GridSpec& grid) {
  GaugeField gf;
  gf.grid = grid;
  gf.sig.assign(size_t(3 * grid.nodes()), int8_t(+1));
  return gf;
}

GaugeField gauge_field_from_seam(const GridSpec& grid, const SeamSurface& seam) {
  GaugeField gf = trivial_gauge(grid);
  for (size_t i = 0; i < seam.flip.size(); ++i)
    if (seam.flip[i]) gf.sig[i] = -1;
  return gf;
}

GaugeSection gauge_transform(const GaugeSection& s, const std::vector<int8_t>& tau) {
  const GridSpec& g = s.grid();
  int64_t N = g.nodes();
  GaugeField gf = *s.gauge;
  for (int axis = 0; axis < g.n; ++axis) {
    int64_t st = g.stride(axis);
    for (NodeId v = 0; v < N; ++v) {
      auto c = g.coords(v);
      if (c[axis] >= g.dims[axis] - 1) continue;
      size_t e = size_t(axis) * size_t(N) + size_t(v);
      gf.sig[e] = int8_t(tau[size_t(v)] * gf.sig[e] * tau[size_t(v + st)]);
    }
  }
  GaugeSection out;
  out.gauge = std::make_shared<GaugeField>(std::move(gf));
  out.eps = s.eps;
  out.u.resize(size_t(N));
  for (NodeId v = 0; v < N; ++v) out.u[size_t(v)] = double(tau[size_t(v)]) * s.u[size_t(v)];
  return out;
}

std::vector<int8_t> random_sign_field(const GridSpec& grid, Rng& rng) {
  std::vector<int8_t> tau(size_t(grid.nodes()));
  for (auto& t : tau) t = (rng.next() & 1) ? int8_t(+1) : int8_t(-1);
  return tau;
}

ParityResult zero_parity(const GaugeSection& s, const GridLoop& loop) {
  const GridSpec& g = s.grid();
  int64_t N = g.nodes();
  ParityResult r{0, 0};
  size_t m = loop.nodes.size();
  for (size_t i = 0; i < m; ++i) {
    NodeId a = loop.nodes[i], b = loop.nodes[(i + 1) % m];
    if (b < a) std::swap(a, b);
    auto ca = g.coords(a), cb = g.coords(b);
    int axis = 0;
    for (int ax = 0; ax < 3; ++ax)
      if (cb[ax] != ca[ax]) axis = ax;
    int8_t sig = s.gauge->sig[size_t(axis) * size_t(N) + size_t(a)];
    // u = 0 counts as positive
    double ua = s.u[size_t(a)], ub = s.u[size_t(b)];
    int sa = ua < 0 ? -1 : +1;
    int sb = ub < 0 ? -1 : +1;
    if (sa * int(sig) * sb < 0) ++r.crossings;
  }
  r.parity = int(r.crossings % 2);
  return r;
}

int loop_sign_parity(const GaugeField& gf, const GridLoop& loop) {
  const GridSpec& g = gf.grid;
  int64_t N = g.nodes();
  int prod = 1;
  size_t m = loop.nodes.size();
  for (size_t i = 0; i < m; ++i) {
    NodeId a = loop.nodes[i], b = loop.nodes[(i + 1) % m];
    if (b < a) std::swap(a, b);
    auto ca = g.coords(a), cb = g.coords(b);
    int axis = 0;
    for (int ax = 0; ax < 3; ++ax)
      if (cb[ax] != ca[ax]) axis = ax;
    prod *= int(gf.sig[size_t(axis) * size_t(N) + size_t(a)]);
  }
  return prod < 0 ? 1 : 0;
}

GridLoop random_loop(const GridSpec& grid, const BoundaryManifold& gamma, Rng& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    int a0 = 0, a1 = 1;
    if (grid.n == 3) {
      a0 = int(rng.below(3));
      a1 = (a0 + 1 + int(rng.below(2))) % 3;
      if (a1 < a0) std::swap(a0, a1);
    }
    int64_t s0 = 1 + rng.below(std::max<int64_t>(1, grid.dims[a0] / 2));
    int64_t s1 = 1 + rng.below(std::max<int64_t>(1, grid.dims[a1] / 2));
    std::array<int64_t, 3> c;
    for (int a = 0; a < 3; ++a) c[a] = grid.dims[a] == 1 ? 0 : rng.below(grid.dims[a]);
    if (c[a0] + s0 >= grid.dims[a0] || c[a1] + s1 >= grid.dims[a1]) continue;
    GridLoop loop = rectangle_loop(grid, grid.idx(c[0], c[1], c[2]), a0, a1, s0, s1);
    bool clear = true;
    for (NodeId v : loop.nodes)
      if (distance_to_gamma(gamma, grid.pos(v)) <= 2.0 * grid.h) { clear = false; break; }
    if (!clear) continue;
    try {
      (void)linking(grid, loop, gamma);
    } catch (const Error& e) {
      if (e.code == Err::LoopTouchesSeamEdgeCase) continue;
      throw;
    }
    return loop;
  }
  fail(Err::LoopTouchesSeamEdgeCase, "could not sample a loop clear of the boundary");
}

}  // namespace acpl
