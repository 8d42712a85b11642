#include "acpl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acpl/error.hpp"

namespace acpl {

void SolverConfig::validate() const {
  if (eps_schedule.empty()) fail(Err::InvalidConfig, "empty epsilon schedule");
  for (double e : eps_schedule)
    if (!(e > 0)) fail(Err::InvalidConfig, "epsilon must be positive");
  for (size_t i = 1; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] < eps_schedule[i - 1]))
      fail(Err::InvalidConfig, "epsilon schedule must be strictly decreasing");
  if (!(tau > 0 && tau <= 1)) fail(Err::InvalidConfig, "tau must lie in (0, 1]");
  if (!(tol_r > 0)) fail(Err::InvalidConfig, "tol_r must be positive");
  if (max_iters < 1) fail(Err::InvalidConfig, "max_iters must be at least 1");
}

FixedBc make_bc(const GridSpec& grid, BcMode mode) {
  FixedBc bc;
  int64_t N = grid.nodes();
  bc.fixed.assign(size_t(N), 0);
  bc.value.assign(size_t(N), 0.0);
  if (mode == BcMode::Natural) return bc;
  for (NodeId v = 0; v < N; ++v)
    if (grid.on_boundary(v)) {
      bc.fixed[size_t(v)] = 1;
      bc.value[size_t(v)] = 1.0;
    }
  return bc;
}

std::vector<double> seam_distance_field(const GridSpec& grid, const SeamPanels& panels,
                                        double cap) {
  int64_t N = grid.nodes();
  std::vector<double> d(size_t(N), cap);
  auto visit_box = [&](Vec3 lo, Vec3 hi, auto&& dist_fn) {
    int64_t ilo[3], ihi[3];
    for (int a = 0; a < 3; ++a) {
      if (a >= grid.n) { ilo[a] = 0; ihi[a] = 0; continue; }
      ilo[a] = std::max<int64_t>(0, int64_t(std::floor((lo[a] - cap - grid.origin[a]) / grid.h)));
      ihi[a] = std::min<int64_t>(grid.dims[a] - 1,
                                 int64_t(std::ceil((hi[a] + cap - grid.origin[a]) / grid.h)));
    }
    for (int64_t k = ilo[2]; k <= ihi[2]; ++k)
      for (int64_t j = ilo[1]; j <= ihi[1]; ++j)
        for (int64_t i = ilo[0]; i <= ihi[0]; ++i) {
          NodeId v = grid.idx(i, j, k);
          double dd = dist_fn(grid.pos(v));
          if (dd < d[size_t(v)]) d[size_t(v)] = dd;
        }
  };
  for (const auto& tr : panels.tris) {
    Vec3 lo = tr[0], hi = tr[0];
    for (int t = 1; t < 3; ++t)
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], tr[t][a]);
        hi[a] = std::max(hi[a], tr[t][a]);
      }
    visit_box(lo, hi, [&](const Vec3& p) { return point_triangle_distance(p, tr[0], tr[1], tr[2]); });
  }
  for (const auto& sg : panels.segs) {
    Vec3 lo{std::min(sg[0].x, sg[1].x), std::min(sg[0].y, sg[1].y), std::min(sg[0].z, sg[1].z)};
    Vec3 hi{std::max(sg[0].x, sg[1].x), std::max(sg[0].y, sg[1].y), std::max(sg[0].z, sg[1].z)};
    visit_box(lo, hi, [&](const Vec3& p) { return point_segment_distance(p, sg[0], sg[1]); });
  }
  return d;
}

std::vector<double> seam_profile_init(const GridSpec& grid, const SeamSurface& seam, double eps) {
  double cap = 8.5 * eps;
  std::vector<double> d = seam_distance_field(grid, seam.panels, cap);
  std::vector<double> u(d.size());
  const double w = 1.0 / (eps * M_SQRT2);
  for (size_t i = 0; i < d.size(); ++i) u[i] = std::tanh(d[i] * w);
  return u;
}

std::vector<double> random_init(const GridSpec& grid, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> u(size_t(grid.nodes()));
  for (auto& x : u) x = rng.uniform(-0.5, 0.5);
  return u;
}

namespace {

constexpr int64_t kBlock = 4096;

double dot_blocked(const double* a, const double* b, int64_t N) {
  double total = 0, blk = 0;
  int64_t in_blk = 0;
  for (int64_t i = 0; i < N; ++i) {
    blk += a[i] * b[i];
    if (++in_blk == kBlock) {
      total += blk;
      blk = 0;
      in_blk = 0;
    }
  }
  return total + blk;
}

}  // namespace

bool cg_solve(int64_t N, const std::function<void(const double*, double*)>& apply,
              const double* b, double* x, double rel_tol, int max_iters, int64_t* iters_out) {
  std::vector<double> r(size_t(N)), p(size_t(N)), Ap(size_t(N));
  apply(x, Ap.data());
  for (int64_t i = 0; i < N; ++i) r[size_t(i)] = b[i] - Ap[size_t(i)];
  double bb = dot_blocked(b, b, N);
  double target2 = rel_tol * rel_tol * bb;
  double rr = dot_blocked(r.data(), r.data(), N);
  if (iters_out) *iters_out = 0;
  if (rr <= target2 || bb == 0) return true;
  p = r;
  for (int it = 1; it <= max_iters; ++it) {
    apply(p.data(), Ap.data());
    double pAp = dot_blocked(p.data(), Ap.data(), N);
    if (!(pAp > 0)) return false;  // lost positive definiteness: bad operator
    double alpha = rr / pAp;
    for (int64_t i = 0; i < N; ++i) x[i] += alpha * p[size_t(i)];
    for (int64_t i = 0; i < N; ++i) r[size_t(i)] -= alpha * Ap[size_t(i)];
    double rr_new = dot_blocked(r.data(), r.data(), N);
    if (iters_out) *iters_out = it;
    if (rr_new <= target2) return true;
    double beta = rr_new / rr;
    rr = rr_new;
    for (int64_t i = 0; i < N; ++i) p[size_t(i)] = r[size_t(i)] + beta * p[size_t(i)];
  }
  return false;
}

namespace {

// fused stencil helpers for the semi-implicit step on free nodes
struct Stencil {
  const GridSpec& g;
  const GaugeField& gf;
  const FixedBc& bc;
  int64_t N, d0, d1, d2, sy, sz;
  const int8_t *sgx, *sgy, *sgz;
  const uint8_t* fx;

  Stencil(const GaugeSection& s, const FixedBc& bc_)
      : g(s.grid()), gf(*s.gauge), bc(bc_) {
    N = g.nodes();
    d0 = g.dims[0];
    d1 = g.dims[1];
    d2 = g.dims[2];
    sy = g.stride(1);
    sz = g.stride(2);
    sgx = gf.sig.data();
    sgy = sgx + N;
    sgz = sgy + N;
    fx = bc.fixed.data();
  }

  // y = (I + c (deg - A_sig)) x on free nodes; entries at fixed nodes pass
  // through (they are held at zero in all CG vectors)
  void apply(double c, const double* x, double* y) const {
    int n = g.n;
    NodeId v = 0;
    for (int64_t k = 0; k < d2; ++k)
      for (int64_t j = 0; j < d1; ++j)
        for (int64_t i = 0; i < d0; ++i, ++v) {
          if (fx[v]) { y[v] = x[v]; continue; }
          double acc = 0;
          int deg = 0;
          if (i < d0 - 1) { acc += double(sgx[v]) * x[v + 1]; ++deg; }
          if (i > 0) { acc += double(sgx[v - 1]) * x[v - 1]; ++deg; }
          if (n > 1) {
            if (j < d1 - 1) { acc += double(sgy[v]) * x[v + sy]; ++deg; }
            if (j > 0) { acc += double(sgy[v - sy]) * x[v - sy]; ++deg; }
          }
          if (n > 2) {
            if (k < d2 - 1) { acc += double(sgz[v]) * x[v + sz]; ++deg; }
            if (k > 0) { acc += double(sgz[v - sz]) * x[v - sz]; ++deg; }
          }
          y[v] = x[v] * (1.0 + c * double(deg)) - c * acc;
        }
  }

  // b = u - tau W'(u) + c * (contributions of fixed neighbors); zero at fixed
  void rhs(double c, double tau, const double* u, double* b) const {
    int n = g.n;
    NodeId v = 0;
    for (int64_t k = 0; k < d2; ++k)
      for (int64_t j = 0; j < d1; ++j)
        for (int64_t i = 0; i < d0; ++i, ++v) {
          if (fx[v]) { b[v] = 0; continue; }
          double acc = 0;
          if (i < d0 - 1 && fx[v + 1]) acc += double(sgx[v]) * bc.value[size_t(v + 1)];
          if (i > 0 && fx[v - 1]) acc += double(sgx[v - 1]) * bc.value[size_t(v - 1)];
          if (n > 1) {
            if (j < d1 - 1 && fx[v + sy]) acc += double(sgy[v]) * bc.value[size_t(v + sy)];
            if (j > 0 && fx[v - sy]) acc += double(sgy[v - sy]) * bc.value[size_t(v - sy)];
          }
          if (n > 2) {
            if (k < d2 - 1 && fx[v + sz]) acc += double(sgz[v]) * bc.value[size_t(v + sz)];
            if (k > 0 && fx[v - sz]) acc += double(sgz[v - sz]) * bc.value[size_t(v - sz)];
          }
          b[v] = u[v] - tau * well_d(u[v]) + c * acc;
        }
  }

  // sup over free nodes of |eps^2 lap_sig u - W'(u)|
  double residual_sup(double eps, double h, const double* u) const {
    int n = g.n;
    double e2h2 = eps * eps / (h * h);
    double sup = 0;
    NodeId v = 0;
    for (int64_t k = 0; k < d2; ++k)
      for (int64_t j = 0; j < d1; ++j)
        for (int64_t i = 0; i < d0; ++i, ++v) {
          if (fx[v]) continue;
          double lap = 0;
          if (i < d0 - 1) lap += double(sgx[v]) * u[v + 1] - u[v];
          if (i > 0) lap += double(sgx[v - 1]) * u[v - 1] - u[v];
          if (n > 1) {
            if (j < d1 - 1) lap += double(sgy[v]) * u[v + sy] - u[v];
            if (j > 0) lap += double(sgy[v - sy]) * u[v - sy] - u[v];
          }
          if (n > 2) {
            if (k < d2 - 1) lap += double(sgz[v]) * u[v + sz] - u[v];
            if (k > 0) lap += double(sgz[v - sz]) * u[v - sz] - u[v];
          }
          double r = std::abs(e2h2 * lap - well_d(u[v]));
          if (r > sup) sup = r;
        }
    return sup;
  }
};

}  // namespace

SolveResult minimize(GaugeSection s0, const FixedBc& bc, const SolverConfig& cfg) {
  cfg.validate();
  const GridSpec& g = s0.grid();
  const int64_t N = g.nodes();
  const double h = g.h;
  const double eps = s0.eps;

  SolveResult out;
  out.section = std::move(s0);
  GaugeSection& sec = out.section;

  // impose boundary values and the range bound up front
  for (NodeId v = 0; v < N; ++v) {
    if (bc.fixed[size_t(v)]) sec.u[size_t(v)] = bc.value[size_t(v)];
    sec.u[size_t(v)] = std::clamp(sec.u[size_t(v)], -1.0, 1.0);
  }

  Stencil st(sec, bc);
  std::vector<double> b(size_t(N)), x(size_t(N)), cand(size_t(N));
  double E = energy(sec).total;
  double tau = cfg.tau;
  int successes = 0;

  for (int64_t iter = 1; iter <= cfg.max_iters; ++iter) {
    const double c = tau * eps * eps / (h * h);
    st.rhs(c, tau, sec.u.data(), b.data());
    for (NodeId v = 0; v < N; ++v) x[size_t(v)] = bc.fixed[size_t(v)] ? 0.0 : sec.u[size_t(v)];
    auto apply = [&](const double* in, double* y) { st.apply(c, in, y); };
    if (!cg_solve(N, apply, b.data(), x.data(), cfg.cg_tol, cfg.cg_max, nullptr))
      fail(Err::LinearSolveFailure, "inner conjugate-gradient iteration stalled");
    for (NodeId v = 0; v < N; ++v)
      cand[size_t(v)] = bc.fixed[size_t(v)] ? bc.value[size_t(v)]
                                            : std::clamp(x[size_t(v)], -1.0, 1.0);

    std::swap(sec.u, cand);
    double Ec = energy(sec).total;
    bool accept = Ec <= E + 1e-12 * (std::abs(E) + 1.0);
    if (!accept) {
      std::swap(sec.u, cand);  // roll back
      tau *= 0.5;
      successes = 0;
      if (tau < cfg.tau * 0x1p-40) {
        out.status = SolveStatus::MaxItersExceeded;  // stalled: best iterate kept
        out.iters = iter;
        return out;
      }
      continue;
    }
    E = Ec;
    if (++successes >= 5 && tau < cfg.tau) {
      tau = std::min(2.0 * tau, cfg.tau);
      successes = 0;
    }
    double rsup = st.residual_sup(eps, h, sec.u.data());
    out.trace.push_back({E, rsup, tau});
    out.iters = iter;
    if (rsup <= cfg.tol_r) {
      out.status = SolveStatus::Converged;
      return out;
    }
  }
  out.status = SolveStatus::MaxItersExceeded;
  return out;
}

ContinuationResult continuation(std::shared_ptr<const GaugeField> gauge, const SeamSurface& seam,
                                const FixedBc& bc, const SolverConfig& cfg,
                                const std::vector<double>* u0) {
  cfg.validate();
  ContinuationResult out;
  const GridSpec& g = gauge->grid;

  GaugeSection sec;
  sec.gauge = gauge;
  sec.eps = cfg.eps_schedule.front();
  switch (cfg.init) {
    case InitMode::SeamProfile: sec.u = seam_profile_init(g, seam, sec.eps); break;
    case InitMode::Random: sec.u = random_init(g, cfg.seed); break;
    case InitMode::Checkpoint:
      if (!u0) fail(Err::InvalidConfig, "checkpoint init requested without a field");
      sec.u = *u0;
      break;
  }
  for (NodeId v = 0; v < g.nodes(); ++v)
    if (bc.fixed[size_t(v)]) sec.u[size_t(v)] = bc.value[size_t(v)];
  out.competitor_energy = energy(sec).total;

  out.energy_bound_ok = true;
  for (double eps : cfg.eps_schedule) {
    sec.eps = eps;
    SolveResult r = minimize(sec, bc, cfg);
    sec = r.section;  // warm start for the next stage
    double Ef = r.trace.empty() ? energy(sec).total : r.trace.back().energy;
    if (Ef > out.competitor_energy * (1.0 + 1e-9))
      out.energy_bound_ok = false;
    out.stages.push_back(std::move(r));
  }
  return out;
}

}  // namespace acpl
