#include "acpl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acpl/error.hpp"

namespace acpl {

namespace {

constexpr int kBlock = 4096;

// fixed-shape reduction: per-block partials summed in index order
struct BlockAcc {
  double cur = 0;
  int fill = 0;
  std::vector<double> parts;

  void add(double t) {
    cur += t;
    if (++fill == kBlock) {
      parts.push_back(cur);
      cur = 0;
      fill = 0;
    }
  }
  double total() const {
    double s = 0;
    for (double p : parts) s += p;
    return s + cur;
  }
};

double hn(const GridSpec& g) {
  double v = 1;
  for (int a = 0; a < g.n; ++a) v *= g.h;
  return v;
}

}  // namespace

std::vector<double> gamma_distance_field(const GridSpec& grid, const BoundaryManifold& gamma) {
  std::vector<double> rho(size_t(grid.nodes()));
  const int64_t d0 = grid.dims[0], d1 = grid.dims[1], d2 = grid.dims[2];
  NodeId v = 0;
  for (int64_t k = 0; k < d2; ++k)
    for (int64_t j = 0; j < d1; ++j)
      for (int64_t i = 0; i < d0; ++i, ++v) {
        Vec3 p{grid.origin.x + grid.h * double(i), grid.origin.y + grid.h * double(j),
               grid.origin.z + grid.h * double(k)};
        rho[size_t(v)] = distance_to_gamma(gamma, p);
      }
  return rho;
}

DiscrepancyField discrepancy(const GaugeSection& s) {
  const GridSpec& g = s.grid();
  const int64_t N = g.nodes();
  const double* u = s.u.data();
  const int8_t* sig = s.gauge->sig.data();
  const double inv_h = 1.0 / g.h;
  const double eps = s.eps;
  const double cellw = hn(g);

  DiscrepancyField f;
  f.xi.resize(size_t(N));
  f.grad2.resize(size_t(N));

  BlockAcc pos, neg;
  double sup_pos = 0;

  const int64_t d0 = g.dims[0], d1 = g.dims[1], d2 = g.dims[2];
  NodeId v = 0;
  for (int64_t k = 0; k < d2; ++k)
    for (int64_t j = 0; j < d1; ++j)
      for (int64_t i = 0; i < d0; ++i, ++v) {
        double g2 = 0;
        const int64_t c[3] = {i, j, k};
        for (int a = 0; a < g.n; ++a) {
          const int64_t st = g.stride(a);
          const int8_t* sa = sig + size_t(a) * size_t(N);
          double acc = 0;
          int cnt = 0;
          if (c[a] > 0) {
            double d = (double(sa[v - st]) * u[v - st] - u[v]) * inv_h;
            acc += d * d;
            ++cnt;
          }
          if (c[a] < g.dims[a] - 1) {
            double d = (double(sa[v]) * u[v + st] - u[v]) * inv_h;
            acc += d * d;
            ++cnt;
          }
          if (cnt) g2 += acc / double(cnt);
        }
        f.grad2[size_t(v)] = g2;
        double xi = 0.5 * eps * g2 - well(u[v]) / eps;
        f.xi[size_t(v)] = xi;
        if (xi > 0) {
          pos.add(xi * cellw);
          if (xi > sup_pos) sup_pos = xi;
        } else {
          neg.add(-xi * cellw);
        }
      }
  f.whole.sup_pos = sup_pos;
  f.whole.l1_pos = pos.total();
  f.whole.l1_neg = neg.total();
  f.whole.l1_abs = f.whole.l1_pos + f.whole.l1_neg;
  f.whole.count = N;
  return f;
}

XiNorms xi_norms(const GridSpec& grid, const std::vector<double>& xi,
                 const std::vector<double>* rho, double delta) {
  XiNorms n;
  BlockAcc pos, neg;
  const double cellw = hn(grid);
  const int64_t N = grid.nodes();
  for (int64_t v = 0; v < N; ++v) {
    if (rho && (*rho)[size_t(v)] <= delta) continue;
    double x = xi[size_t(v)];
    ++n.count;
    if (x > 0) {
      pos.add(x * cellw);
      if (x > n.sup_pos) n.sup_pos = x;
    } else {
      neg.add(-x * cellw);
    }
  }
  n.l1_pos = pos.total();
  n.l1_neg = neg.total();
  n.l1_abs = n.l1_pos + n.l1_neg;
  return n;
}

InteriorBoundReport interior_bound_checks(const GaugeSection& s, const std::vector<double>& rho,
                                          double delta) {
  if (delta < 4.0 * s.eps)
    fail(Err::InvalidConfig, "interior window requires delta >= 4 eps");
  InteriorBoundReport rep;
  rep.delta = delta;
  rep.sup_abs_u = 0;
  const int64_t N = s.grid().nodes();
  for (int64_t v = 0; v < N; ++v)
    if (rho[size_t(v)] > delta) rep.sup_abs_u = std::max(rep.sup_abs_u, std::fabs(s.u[size_t(v)]));
  DiscrepancyField f = discrepancy(s);
  rep.norms = xi_norms(s.grid(), f.xi, &rho, delta);
  return rep;
}

DiffuseVarifold varifold(const GaugeSection& s) {
  const GridSpec& g = s.grid();
  const int64_t N = g.nodes();
  const double* u = s.u.data();
  const int8_t* sgx = s.gauge->sig.data();
  const int8_t* sgy = sgx + N;
  const int8_t* sgz = sgy + N;
  const int64_t sy = g.stride(1), sz = g.stride(2);
  const double inv_sigma = 1.0 / sigma_constant();
  const double cellw = hn(g);

  DiffuseVarifold V;
  V.n = g.n;
  for (int a = 0; a < 3; ++a) V.cells[a] = a < g.n ? g.dims[a] - 1 : 1;
  int64_t ncells = V.cells[0] * V.cells[1] * V.cells[2];
  V.weight.assign(size_t(ncells), 0.0);
  V.normal.assign(size_t(ncells), Vec3{});
  V.has_tangent.assign(size_t(ncells), 0);

  BlockAcc mass;
  int64_t cell = 0;

  if (g.n == 2) {
    for (int64_t j = 0; j + 1 < g.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < g.dims[0]; ++i, ++cell) {
        NodeId c0 = g.idx(i, j, 0);
        NodeId cn[4] = {c0, c0 + 1, c0 + sy, c0 + sy + 1};
        int sg1 = sgx[c0], sg2 = sgy[c0], sg3 = sg1 * sgy[c0 + 1];
        if (sg3 != sg2 * sgx[c0 + sy]) {
          ++V.skipped_cells;
          mass.add(0.0);
          continue;
        }
        double u0 = u[cn[0]], u1 = double(sg1) * u[cn[1]];
        double u2 = double(sg2) * u[cn[2]], u3 = double(sg3) * u[cn[3]];
        double dx = 0.5 * ((u1 - u0) + (u3 - u2)) / g.h;
        double dy = 0.5 * ((u2 - u0) + (u3 - u1)) / g.h;
        double wavg = 0.25 * (well(u[cn[0]]) + well(u[cn[1]]) + well(u[cn[2]]) + well(u[cn[3]]));
        double gn = std::sqrt(dx * dx + dy * dy);
        double wgt = inv_sigma * std::sqrt(0.5 * wavg) * gn * cellw;
        V.weight[size_t(cell)] = wgt;
        if (gn >= 1e-12) {
          V.normal[size_t(cell)] = Vec3{dx / gn, dy / gn, 0};
          V.has_tangent[size_t(cell)] = 1;
        }
        mass.add(wgt);
      }
    V.total_mass = mass.total();
    return V;
  }

  for (int64_t k = 0; k + 1 < g.dims[2]; ++k)
    for (int64_t j = 0; j + 1 < g.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < g.dims[0]; ++i, ++cell) {
        NodeId c0 = g.idx(i, j, k);
        NodeId cn[8];
        for (int b = 0; b < 8; ++b)
          cn[b] = c0 + (b & 1 ? 1 : 0) + (b & 2 ? sy : 0) + (b & 4 ? sz : 0);
        int sg[8];
        sg[0] = 1;
        sg[1] = sgx[cn[0]];
        sg[2] = sgy[cn[0]];
        sg[3] = sg[1] * sgy[cn[1]];
        sg[4] = sgz[cn[0]];
        sg[5] = sg[1] * sgz[cn[1]];
        sg[6] = sg[2] * sgz[cn[2]];
        sg[7] = sg[3] * sgz[cn[3]];
        bool ok = sg[3] == sg[2] * sgx[cn[2]] && sg[5] == sg[4] * sgx[cn[4]] &&
                  sg[7] == sg[6] * sgx[cn[6]] && sg[6] == sg[4] * sgy[cn[4]] &&
                  sg[7] == sg[5] * sgy[cn[5]];
        if (!ok) {
          ++V.skipped_cells;
          mass.add(0.0);
          continue;
        }
        double uv[8];
        double wavg = 0;
        for (int t = 0; t < 8; ++t) {
          uv[t] = double(sg[t]) * u[cn[t]];
          wavg += well(u[cn[t]]);
        }
        wavg *= 0.125;
        double dx = 0.25 * ((uv[1] - uv[0]) + (uv[3] - uv[2]) + (uv[5] - uv[4]) + (uv[7] - uv[6])) / g.h;
        double dy = 0.25 * ((uv[2] - uv[0]) + (uv[3] - uv[1]) + (uv[6] - uv[4]) + (uv[7] - uv[5])) / g.h;
        double dz = 0.25 * ((uv[4] - uv[0]) + (uv[5] - uv[1]) + (uv[6] - uv[2]) + (uv[7] - uv[3])) / g.h;
        double gn = std::sqrt(dx * dx + dy * dy + dz * dz);
        double wgt = inv_sigma * std::sqrt(0.5 * wavg) * gn * cellw;
        V.weight[size_t(cell)] = wgt;
        if (gn >= 1e-12) {
          V.normal[size_t(cell)] = Vec3{dx / gn, dy / gn, dz / gn};
          V.has_tangent[size_t(cell)] = 1;
        }
        mass.add(wgt);
      }
  V.total_mass = mass.total();
  return V;
}

double varifold_mass_ball(const DiffuseVarifold& V, const GridSpec& grid, const Vec3& p,
                          double r) {
  BlockAcc acc;
  const double r2 = r * r;
  int64_t cell = 0;
  for (int64_t k = 0; k < V.cells[2]; ++k)
    for (int64_t j = 0; j < V.cells[1]; ++j)
      for (int64_t i = 0; i < V.cells[0]; ++i, ++cell) {
        Vec3 c{grid.origin.x + grid.h * (double(i) + 0.5),
               grid.origin.y + grid.h * (double(j) + 0.5),
               grid.n > 2 ? grid.origin.z + grid.h * (double(k) + 0.5) : 0.0};
        if (norm2(c - p) <= r2) acc.add(V.weight[size_t(cell)]);
      }
  return acc.total();
}

namespace {

// nearest-strand tangent direction; zero length in 2d (point components)
Vec3 gamma_tangent_at(const BoundaryManifold& gamma, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  Vec3 tan{};
  for (const auto& comp : gamma.components) {
    if (gamma.n == 2 || comp.size() == 1) {
      for (const auto& q : comp) {
        double d = dist(p, q);
        if (d < best) {
          best = d;
          tan = Vec3{};
        }
      }
      continue;
    }
    for (size_t a = 0; a < comp.size(); ++a) {
      const Vec3& s0 = comp[a];
      const Vec3& s1 = comp[(a + 1) % comp.size()];
      double d = point_segment_distance(p, s0, s1);
      if (d < best) {
        best = d;
        Vec3 t = s1 - s0;
        double tn = norm(t);
        tan = tn > 0 ? t * (1.0 / tn) : Vec3{};
      }
    }
  }
  return tan;
}

}  // namespace

double first_variation(const DiffuseVarifold& V, const GaugeSection& s,
                       const std::vector<Vec3>& g, const BoundaryManifold* gamma,
                       const std::vector<double>* rho, double tube_radius, double C_tangent) {
  const GridSpec& grid = s.grid();
  const int64_t N = grid.nodes();
  if (int64_t(g.size()) != N) fail(Err::InvalidConfig, "vector field size mismatch");

  for (int64_t v = 0; v < N; ++v)
    if (grid.on_boundary(v) && norm(g[size_t(v)]) > 1e-12)
      fail(Err::InvalidConfig, "vector field must vanish on the box boundary");

  if (gamma && rho && tube_radius > 0) {
    for (int64_t v = 0; v < N; ++v) {
      double d = (*rho)[size_t(v)];
      if (d >= tube_radius) continue;
      Vec3 t = gamma_tangent_at(*gamma, grid.pos(v));
      const Vec3& gv = g[size_t(v)];
      Vec3 perp = norm2(t) > 0 ? gv - t * dot(gv, t) : gv;
      if (norm(perp) > C_tangent * (d + grid.h))
        fail(Err::GNotTangent, "vector field is not tangent to the boundary tube");
    }
  }

  const int64_t sy = grid.stride(1), sz = grid.stride(2);
  const double inv_h = 1.0 / grid.h;
  BlockAcc acc;
  int64_t cell = 0;

  if (grid.n == 2) {
    for (int64_t j = 0; j + 1 < grid.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < grid.dims[0]; ++i, ++cell) {
        double w = V.weight[size_t(cell)];
        if (w == 0) {
          acc.add(0.0);
          continue;
        }
        NodeId c0 = grid.idx(i, j, 0);
        const Vec3 &g0 = g[size_t(c0)], &g1 = g[size_t(c0 + 1)];
        const Vec3 &g2 = g[size_t(c0 + sy)], &g3 = g[size_t(c0 + sy + 1)];
        Vec3 dxg = ((g1 - g0) + (g3 - g2)) * (0.5 * inv_h);
        Vec3 dyg = ((g2 - g0) + (g3 - g1)) * (0.5 * inv_h);
        double divg = dxg.x + dyg.y;
        double term = divg;
        if (V.has_tangent[size_t(cell)]) {
          const Vec3& nrm = V.normal[size_t(cell)];
          term -= nrm.x * (nrm.x * dxg.x + nrm.y * dxg.y) +
                  nrm.y * (nrm.x * dyg.x + nrm.y * dyg.y);
        }
        acc.add(w * term);
      }
    return acc.total();
  }

  for (int64_t k = 0; k + 1 < grid.dims[2]; ++k)
    for (int64_t j = 0; j + 1 < grid.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < grid.dims[0]; ++i, ++cell) {
        double w = V.weight[size_t(cell)];
        if (w == 0) {
          acc.add(0.0);
          continue;
        }
        NodeId c0 = grid.idx(i, j, k);
        const Vec3* gc[8];
        for (int b = 0; b < 8; ++b)
          gc[b] = &g[size_t(c0 + (b & 1 ? 1 : 0) + (b & 2 ? sy : 0) + (b & 4 ? sz : 0))];
        Vec3 dxg = ((*gc[1] - *gc[0]) + (*gc[3] - *gc[2]) + (*gc[5] - *gc[4]) + (*gc[7] - *gc[6])) *
                   (0.25 * inv_h);
        Vec3 dyg = ((*gc[2] - *gc[0]) + (*gc[3] - *gc[1]) + (*gc[6] - *gc[4]) + (*gc[7] - *gc[5])) *
                   (0.25 * inv_h);
        Vec3 dzg = ((*gc[4] - *gc[0]) + (*gc[5] - *gc[1]) + (*gc[6] - *gc[2]) + (*gc[7] - *gc[3])) *
                   (0.25 * inv_h);
        double divg = dxg.x + dyg.y + dzg.z;
        double term = divg;
        if (V.has_tangent[size_t(cell)]) {
          const Vec3& nrm = V.normal[size_t(cell)];
          // n^T Dg n with (Dg)_{ab} = partial_a g_b
          Vec3 ndg = dxg * nrm.x + dyg * nrm.y + dzg * nrm.z;
          term -= dot(nrm, ndg);
        }
        acc.add(w * term);
      }
  return acc.total();
}

double sup_grad_matrix(const GridSpec& grid, const std::vector<Vec3>& g) {
  const int64_t sy = grid.stride(1), sz = grid.stride(2);
  const double inv_h = 1.0 / grid.h;
  double sup = 0;
  auto upd = [&](const Vec3& d) {
    sup = std::max({sup, std::fabs(d.x), std::fabs(d.y), std::fabs(d.z)});
  };
  if (grid.n == 2) {
    for (int64_t j = 0; j + 1 < grid.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < grid.dims[0]; ++i) {
        NodeId c0 = grid.idx(i, j, 0);
        const Vec3 &g0 = g[size_t(c0)], &g1 = g[size_t(c0 + 1)];
        const Vec3 &g2 = g[size_t(c0 + sy)], &g3 = g[size_t(c0 + sy + 1)];
        upd(((g1 - g0) + (g3 - g2)) * (0.5 * inv_h));
        upd(((g2 - g0) + (g3 - g1)) * (0.5 * inv_h));
      }
    return sup;
  }
  for (int64_t k = 0; k + 1 < grid.dims[2]; ++k)
    for (int64_t j = 0; j + 1 < grid.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < grid.dims[0]; ++i) {
        NodeId c0 = grid.idx(i, j, k);
        const Vec3* gc[8];
        for (int b = 0; b < 8; ++b)
          gc[b] = &g[size_t(c0 + (b & 1 ? 1 : 0) + (b & 2 ? sy : 0) + (b & 4 ? sz : 0))];
        upd(((*gc[1] - *gc[0]) + (*gc[3] - *gc[2]) + (*gc[5] - *gc[4]) + (*gc[7] - *gc[6])) *
            (0.25 * inv_h));
        upd(((*gc[2] - *gc[0]) + (*gc[3] - *gc[1]) + (*gc[6] - *gc[4]) + (*gc[7] - *gc[5])) *
            (0.25 * inv_h));
        upd(((*gc[4] - *gc[0]) + (*gc[5] - *gc[1]) + (*gc[6] - *gc[2]) + (*gc[7] - *gc[3])) *
            (0.25 * inv_h));
      }
  return sup;
}

MonotonicityProfile monotonicity_profile(const GaugeSection& s, const Vec3& p,
                                         double lambda_hat, double r_lo, double r_max, int nr,
                                         const BoundaryManifold* gamma) {
  if (!(r_lo > 0) || !(r_max > r_lo) || nr < 2 || lambda_hat < 0)
    fail(Err::InvalidConfig, "monotonicity profile needs 0 < r_lo < r_max and lambda >= 0");
  const GridSpec& g = s.grid();
  Vec3 lo = g.box_min(), hi = g.box_max();
  double wall = std::numeric_limits<double>::infinity();
  for (int a = 0; a < g.n; ++a) wall = std::min({wall, p[a] - lo[a], hi[a] - p[a]});
  if (r_max > wall) fail(Err::InvalidConfig, "profile ball leaves the box");
  if (gamma && gamma->components.size() > 1) {
    int own = nearest_component(*gamma, p);
    for (int c = 0; c < int(gamma->components.size()); ++c)
      if (c != own && distance_to_component(*gamma, c, p) <= r_max)
        fail(Err::RegionTouchesOtherComponent,
             "profile ball meets a second boundary component; shrink r_max");
  }

  MonotonicityProfile prof;
  prof.center = p;
  prof.lambda_hat = lambda_hat;
  const int nm1 = g.n - 1;
  for (int t = 0; t < nr; ++t) {
    double r = r_lo + (r_max - r_lo) * double(t) / double(nr - 1);
    double E = energy_ball(s, p, r).total;
    prof.radii.push_back(r);
    prof.ball_energy.push_back(E);
    prof.values.push_back(std::exp(lambda_hat * r) * std::pow(r, -nm1) * E);
  }
  prof.monotone = true;
  prof.worst_rel_drop = 0;
  for (size_t t = 0; t + 1 < prof.values.size(); ++t) {
    double a = prof.values[t], b = prof.values[t + 1];
    if (a <= 0) continue;
    double rel = (b - a) / a;
    prof.worst_rel_drop = std::min(prof.worst_rel_drop, rel);
    if (b < a * (1.0 - 0.02)) prof.monotone = false;
  }
  return prof;
}

double fit_lambda_hat(const MonotonicityProfile& prof, double slack) {
  double lam = 0;
  for (size_t t = 0; t + 1 < prof.values.size(); ++t) {
    double a = prof.values[t], b = prof.values[t + 1];
    if (a <= 0 || b <= 0) continue;
    double need = std::log((1.0 - slack) * a / b) / (prof.radii[t + 1] - prof.radii[t]);
    lam = std::max(lam, need);
  }
  return lam;
}

DensityRatio density_ratio(const GaugeSection& s, const DiffuseVarifold& V, const Vec3& p,
                           double r) {
  const int n = s.grid().n;
  const double omega = n == 2 ? 2.0 : M_PI;  // volume of the unit (n-1)-ball
  const double denom = omega * std::pow(r, n - 1);
  DensityRatio d;
  d.r = r;
  d.theta_energy = energy_ball(s, p, r).total / (2.0 * sigma_constant() * denom);
  d.theta_mass = varifold_mass_ball(V, s.grid(), p, r) / denom;
  return d;
}

HausdorffReport hausdorff_sublevel(const GaugeSection& s, double b, const NodalMesh& mesh) {
  if (!(b > 0) || !(b < 1)) fail(Err::InvalidConfig, "sublevel threshold must be in (0,1)");
  const GridSpec& g = s.grid();
  const int64_t N = g.nodes();
  const double cut = 1.0 - b;

  std::vector<uint8_t> mask(size_t(N), 0);
  int64_t cnt = 0;
  for (int64_t v = 0; v < N; ++v)
    if (std::fabs(s.u[size_t(v)]) <= cut) {
      mask[size_t(v)] = 1;
      ++cnt;
    }
  if (cnt == 0) fail(Err::EmptySublevel, "no nodes with |u| <= 1-b; b too small for this eps");
  if (mesh.verts.empty()) fail(Err::EmptySublevel, "extracted nodal mesh is empty");

  HausdorffReport rep;
  rep.sublevel_count = cnt;

  MeshDistance md(mesh);
  double s2m = 0;
  for (int64_t v = 0; v < N; ++v)
    if (mask[size_t(v)]) s2m = std::max(s2m, md(g.pos(v)));
  rep.sub_to_mesh = s2m;

  // nearest masked node by expanding rings in index space
  auto nearest_masked = [&](const Vec3& p) {
    int64_t c[3];
    for (int a = 0; a < 3; ++a) {
      int64_t ci = int64_t(std::llround((p[a] - g.origin[a]) / g.h));
      c[a] = std::clamp(ci, int64_t(0), g.dims[a] - 1);
    }
    double best = std::numeric_limits<double>::infinity();
    int64_t max_ring = std::max({g.dims[0], g.dims[1], g.dims[2]});
    for (int64_t ring = 0; ring <= max_ring; ++ring) {
      if (best < double(ring - 1) * g.h) break;
      int64_t k0 = g.n > 2 ? std::max(int64_t(0), c[2] - ring) : 0;
      int64_t k1 = g.n > 2 ? std::min(g.dims[2] - 1, c[2] + ring) : 0;
      for (int64_t k = k0; k <= k1; ++k)
        for (int64_t j = std::max(int64_t(0), c[1] - ring);
             j <= std::min(g.dims[1] - 1, c[1] + ring); ++j)
          for (int64_t i = std::max(int64_t(0), c[0] - ring);
               i <= std::min(g.dims[0] - 1, c[0] + ring); ++i) {
            int64_t d = std::max({std::llabs(i - c[0]), std::llabs(j - c[1]),
                                  std::llabs(k - c[2])});
            if (d != ring) continue;
            NodeId v = g.idx(i, j, k);
            if (mask[size_t(v)]) best = std::min(best, dist(p, g.pos(v)));
          }
    }
    return best;
  };

  double m2s = 0;
  for (const auto& v : mesh.verts) m2s = std::max(m2s, nearest_masked(v));
  rep.mesh_to_sub = m2s;
  rep.max_two_sided = std::max(s2m, m2s);
  return rep;
}

LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LogLogFit f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int64_t m = 0;
  for (size_t t = 0; t < x.size() && t < y.size(); ++t) {
    if (!(x[t] > 0) || !(y[t] > 0)) continue;
    double lx = std::log(x[t]), ly = std::log(y[t]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  f.count = m;
  if (m < 2) return f;
  double det = double(m) * sxx - sx * sx;
  if (det == 0) return f;
  f.slope = (double(m) * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / double(m);
  double ss = 0;
  for (size_t t = 0; t < x.size() && t < y.size(); ++t) {
    if (!(x[t] > 0) || !(y[t] > 0)) continue;
    double r = std::log(y[t]) - (f.slope * std::log(x[t]) + f.intercept);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / double(m));
  return f;
}

ScalingFit boundary_scaling_fit(const GaugeSection& s, const std::vector<double>& rho,
                                double rho_lo, double rho_hi) {
  const GridSpec& g = s.grid();
  if (s.eps < 8.0 * g.h * (1.0 - 1e-12))
    fail(Err::WindowTooThin, "scaling fit needs eps >= 8h");
  DiscrepancyField f = discrepancy(s);

  std::vector<double> rx, ru, rg;
  const int64_t N = g.nodes();
  for (int64_t v = 0; v < N; ++v) {
    double d = rho[size_t(v)];
    if (d < rho_lo || d > rho_hi) continue;
    rx.push_back(d);
    ru.push_back(std::fabs(s.u[size_t(v)]));
    rg.push_back(std::sqrt(f.grad2[size_t(v)]));
  }
  if (int64_t(rx.size()) < 8)
    fail(Err::WindowTooThin, "scaling fit window holds fewer than 8 nodes");

  LogLogFit fu = log_log_fit(rx, ru);
  LogLogFit fg = log_log_fit(rx, rg);

  ScalingFit out;
  out.a_u = fu.slope;
  out.a_g = fg.slope;
  out.rms_u = fu.rms;
  out.rms_g = fg.rms;
  out.count = int64_t(rx.size());

  int nb = int(std::floor(std::log2(rho_hi / rho_lo))) + 1;
  std::vector<double> slr(size_t(nb), 0), slu(size_t(nb), 0), slg(size_t(nb), 0);
  std::vector<int64_t> cn(size_t(nb), 0);
  for (size_t t = 0; t < rx.size(); ++t) {
    if (!(ru[t] > 0) || !(rg[t] > 0)) continue;
    int bi = std::clamp(int(std::floor(std::log2(rx[t] / rho_lo))), 0, nb - 1);
    slr[size_t(bi)] += std::log(rx[t]);
    slu[size_t(bi)] += std::log(ru[t]);
    slg[size_t(bi)] += std::log(rg[t]);
    ++cn[size_t(bi)];
  }
  for (int bi = 0; bi < nb; ++bi) {
    if (!cn[size_t(bi)]) continue;
    double inv = 1.0 / double(cn[size_t(bi)]);
    out.bin_rho.push_back(std::exp(slr[size_t(bi)] * inv));
    out.bin_u.push_back(std::exp(slu[size_t(bi)] * inv));
    out.bin_g.push_back(std::exp(slg[size_t(bi)] * inv));
  }
  return out;
}

}  // namespace acpl
