#include "acpl/energy.hpp"

#include <cmath>

#include "acpl/error.hpp"

namespace acpl {

namespace {

constexpr int64_t kBlock = 4096;

// One pass over nodes in axis-major order. Edge terms are charged to the
// edge's lower node, which both fixes the summation order and makes region
// restriction additive. Block-local accumulators keep the reduction tree
// fixed regardless of callers or threading.
template <class Pred>
EnergyReport energy_impl(const GaugeSection& s, Pred&& in_region) {
  const GridSpec& g = s.grid();
  const GaugeField& gf = *s.gauge;
  const int64_t N = g.nodes();
  const double h = g.h;
  double hn = 1.0;
  for (int a = 0; a < g.n; ++a) hn *= h;
  const double ce = 0.5 * s.eps * hn / (h * h);
  const double cp = hn / s.eps;
  const int64_t d0 = g.dims[0], d1 = g.dims[1], d2 = g.dims[2];
  const int64_t sy = g.stride(1), sz = g.stride(2);
  const double* u = s.u.data();
  const int8_t* sgx = gf.sig.data();
  const int8_t* sgy = sgx + N;
  const int8_t* sgz = sgy + N;

  EnergyReport rep;
  double blk_d = 0, blk_p = 0;
  int64_t in_blk = 0;
  NodeId v = 0;
  for (int64_t k = 0; k < d2; ++k) {
    bool ez = k < d2 - 1 && g.n > 2;
    for (int64_t j = 0; j < d1; ++j) {
      bool ey = j < d1 - 1 && g.n > 1;
      for (int64_t i = 0; i < d0; ++i, ++v) {
        if (in_region(v)) {
          blk_p += cp * well(u[v]);
          if (i < d0 - 1) {
            double d = u[v] - double(sgx[v]) * u[v + 1];
            blk_d += ce * d * d;
          }
          if (ey) {
            double d = u[v] - double(sgy[v]) * u[v + sy];
            blk_d += ce * d * d;
          }
          if (ez) {
            double d = u[v] - double(sgz[v]) * u[v + sz];
            blk_d += ce * d * d;
          }
        }
        if (++in_blk == kBlock) {
          rep.dirichlet += blk_d;
          rep.potential += blk_p;
          blk_d = blk_p = 0;
          in_blk = 0;
        }
      }
    }
  }
  rep.dirichlet += blk_d;
  rep.potential += blk_p;
  rep.total = rep.dirichlet + rep.potential;
  return rep;
}

}  // namespace

EnergyReport energy(const GaugeSection& s) {
  return energy_impl(s, [](NodeId) { return true; });
}

EnergyReport energy_region(const GaugeSection& s, const std::vector<uint8_t>& node_mask) {
  if (int64_t(node_mask.size()) != s.grid().nodes())
    fail(Err::InvalidConfig, "region mask size mismatch");
  return energy_impl(s, [&](NodeId v) { return node_mask[size_t(v)] != 0; });
}

EnergyReport energy_ball(const GaugeSection& s, const Vec3& p, double r) {
  const GridSpec& g = s.grid();
  double r2 = r * r;
  return energy_impl(s, [&](NodeId v) { return norm2(g.pos(v) - p) <= r2; });
}

void energy_gradient(const GaugeSection& s, std::vector<double>& out) {
  const GridSpec& g = s.grid();
  const GaugeField& gf = *s.gauge;
  const int64_t N = g.nodes();
  const double inv_h2 = 1.0 / (g.h * g.h);
  const double inv_eps = 1.0 / s.eps;
  const int64_t d0 = g.dims[0], d1 = g.dims[1], d2 = g.dims[2];
  const int64_t sy = g.stride(1), sz = g.stride(2);
  out.assign(size_t(N), 0.0);
  const double* u = s.u.data();
  const int8_t* sgx = gf.sig.data();
  const int8_t* sgy = sgx + N;
  const int8_t* sgz = sgy + N;
  NodeId v = 0;
  for (int64_t k = 0; k < d2; ++k) {
    for (int64_t j = 0; j < d1; ++j) {
      for (int64_t i = 0; i < d0; ++i, ++v) {
        double lap = 0;
        if (i < d0 - 1) lap += double(sgx[v]) * u[v + 1] - u[v];
        if (i > 0) lap += double(sgx[v - 1]) * u[v - 1] - u[v];
        if (g.n > 1) {
          if (j < d1 - 1) lap += double(sgy[v]) * u[v + sy] - u[v];
          if (j > 0) lap += double(sgy[v - sy]) * u[v - sy] - u[v];
        }
        if (g.n > 2) {
          if (k < d2 - 1) lap += double(sgz[v]) * u[v + sz] - u[v];
          if (k > 0) lap += double(sgz[v - sz]) * u[v - sz] - u[v];
        }
        out[size_t(v)] = -s.eps * lap * inv_h2 + well_d(u[v]) * inv_eps;
      }
    }
  }
}

ResidualReport el_residual(const GaugeSection& s, const std::vector<double>* rho,
                           double interior_delta) {
  std::vector<double> g;
  energy_gradient(s, g);
  ResidualReport rep;
  const int64_t N = s.grid().nodes();
  for (NodeId v = 0; v < N; ++v) {
    double r = std::abs(-s.eps * g[size_t(v)]);
    if (r > rep.sup) rep.sup = r;
    if (rho && (*rho)[size_t(v)] > interior_delta && r > rep.sup_interior) rep.sup_interior = r;
  }
  if (!rho) rep.sup_interior = rep.sup;
  return rep;
}

double blocked_sum(const std::vector<double>& terms) {
  double total = 0, blk = 0;
  int64_t in_blk = 0;
  for (double t : terms) {
    blk += t;
    if (++in_blk == kBlock) {
      total += blk;
      blk = 0;
      in_blk = 0;
    }
  }
  return total + blk;
}

}  // namespace acpl
