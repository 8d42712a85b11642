#include "acpl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>

#include "acpl/energy.hpp"
#include "acpl/error.hpp"
#include "acpl/solver.hpp"

namespace acpl {

namespace {

// symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts,
// the classic tql2 recurrence); d = diagonal in/out, e = subdiagonal,
// z = identity in, eigenvectors out (column i belongs to d[i])
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<std::vector<double>>& z) {
  const int n = int(d.size());
  if (n == 0) return;
  for (int i = 1; i < n; ++i) e[size_t(i - 1)] = e[size_t(i)];
  e[size_t(n - 1)] = 0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::fabs(d[size_t(m)]) + std::fabs(d[size_t(m + 1)]);
        if (std::fabs(e[size_t(m)]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 50) fail(Err::EigSolverStall, "tridiagonal QL failed to converge");
        double g = (d[size_t(l + 1)] - d[size_t(l)]) / (2.0 * e[size_t(l)]);
        double r = std::hypot(g, 1.0);
        g = d[size_t(m)] - d[size_t(l)] + e[size_t(l)] / (g + (g >= 0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[size_t(i)], b = c * e[size_t(i)];
          r = std::hypot(f, g);
          e[size_t(i + 1)] = r;
          if (r == 0.0) {
            d[size_t(i + 1)] -= p;
            e[size_t(m)] = 0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[size_t(i + 1)] - p;
          r = (d[size_t(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[size_t(i + 1)] = g + p;
          g = c * r - b;
          for (auto& row : z) {
            double zi1 = row[size_t(i + 1)];
            row[size_t(i + 1)] = s * row[size_t(i)] + c * zi1;
            row[size_t(i)] = c * row[size_t(i)] - s * zi1;
          }
        }
        if (r == 0.0 && m - 1 >= l) continue;
        d[size_t(l)] -= p;
        e[size_t(l)] = g;
        e[size_t(m)] = 0;
      }
    } while (m != l);
  }
}

struct HessOp {
  const GridSpec* g;
  const int8_t* sig;
  const uint8_t* free_mask;
  std::vector<double> diag;  // c*deg + W''(u)/eps, minus the shift when used
  double c;                  // eps / h^2
  int64_t N;

  // y = (H - shift) x on free nodes, zero elsewhere
  void apply(const double* x, double* y) const {
    const int64_t d0 = g->dims[0], d1 = g->dims[1], d2 = g->dims[2];
    const int64_t sy = g->stride(1), sz = g->stride(2);
    const int8_t* sgx = sig;
    const int8_t* sgy = sig + N;
    const int8_t* sgz = sig + 2 * N;
    NodeId v = 0;
    for (int64_t k = 0; k < d2; ++k)
      for (int64_t j = 0; j < d1; ++j)
        for (int64_t i = 0; i < d0; ++i, ++v) {
          if (!free_mask[v]) {
            y[v] = 0;
            continue;
          }
          double acc = 0;
          if (i > 0 && free_mask[v - 1]) acc += double(sgx[v - 1]) * x[v - 1];
          if (i < d0 - 1 && free_mask[v + 1]) acc += double(sgx[v]) * x[v + 1];
          if (g->n > 1) {
            if (j > 0 && free_mask[v - sy]) acc += double(sgy[v - sy]) * x[v - sy];
            if (j < d1 - 1 && free_mask[v + sy]) acc += double(sgy[v]) * x[v + sy];
          }
          if (g->n > 2) {
            if (k > 0 && free_mask[v - sz]) acc += double(sgz[v - sz]) * x[v - sz];
            if (k < d2 - 1 && free_mask[v + sz]) acc += double(sgz[v]) * x[v + sz];
          }
          y[v] = diag[size_t(v)] * x[v] - c * acc;
        }
  }
};

double dot_full(int64_t N, const double* a, const double* b) {
  // fixed 4096-block reduction, matching the energy sums
  constexpr int64_t B = 4096;
  double total = 0;
  for (int64_t s = 0; s < N; s += B) {
    double part = 0;
    int64_t e = std::min(N, s + B);
    for (int64_t i = s; i < e; ++i) part += a[i] * b[i];
    total += part;
  }
  return total;
}

}  // namespace

std::vector<int8_t> bfs_tree_signs(const GaugeField& gf) {
  const GridSpec& g = gf.grid;
  const int64_t N = g.nodes();
  std::vector<int8_t> tau(size_t(N), 0);
  std::deque<NodeId> queue;
  tau[0] = 1;
  queue.push_back(0);
  const int64_t sy = g.stride(1), sz = g.stride(2);
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    auto c = g.coords(v);
    auto visit = [&](NodeId w, int axis, NodeId lower) {
      if (tau[size_t(w)]) return;
      tau[size_t(w)] = int8_t(tau[size_t(v)] * gf.edge_sign(axis, lower));
      queue.push_back(w);
    };
    if (c[0] > 0) visit(v - 1, 0, v - 1);
    if (c[0] < g.dims[0] - 1) visit(v + 1, 0, v);
    if (g.n > 1) {
      if (c[1] > 0) visit(v - sy, 1, v - sy);
      if (c[1] < g.dims[1] - 1) visit(v + sy, 1, v);
    }
    if (g.n > 2) {
      if (c[2] > 0) visit(v - sz, 2, v - sz);
      if (c[2] < g.dims[2] - 1) visit(v + sz, 2, v);
    }
  }
  return tau;
}

SpectrumReport hessian_spectrum(const GaugeSection& s, const std::vector<uint8_t>* mask, int k) {
  if (k < 1 || k > 20) fail(Err::InvalidConfig, "spectrum asks for 1..20 eigenvalues");
  const GridSpec& g = s.grid();
  const int64_t N = g.nodes();

  std::vector<uint8_t> free_mask(size_t(N));
  int64_t F = 0;
  for (int64_t v = 0; v < N; ++v) {
    uint8_t fr = mask ? (*mask)[size_t(v)] : uint8_t(!g.on_boundary(v));
    free_mask[size_t(v)] = fr;
    if (fr) ++F;
  }
  if (F < k) fail(Err::InvalidConfig, "mask frees fewer nodes than eigenvalues requested");

  const double eps = s.eps;
  const double shift = -1.2 / eps;

  HessOp H;
  H.g = &g;
  H.sig = s.gauge->sig.data();
  H.free_mask = free_mask.data();
  H.c = eps / (g.h * g.h);
  H.N = N;
  H.diag.resize(size_t(N));
  {
    const int64_t d0 = g.dims[0], d1 = g.dims[1], d2 = g.dims[2];
    NodeId v = 0;
    for (int64_t kk = 0; kk < d2; ++kk)
      for (int64_t j = 0; j < d1; ++j)
        for (int64_t i = 0; i < d0; ++i, ++v) {
          int deg = (i > 0) + (i < d0 - 1);
          if (g.n > 1) deg += (j > 0) + (j < d1 - 1);
          if (g.n > 2) deg += (kk > 0) + (kk < d2 - 1);
          H.diag[size_t(v)] = H.c * double(deg) + well_dd(s.u[size_t(v)]) / eps;
        }
  }
  HessOp A = H;  // shifted operator, positive definite
  for (auto& d : A.diag) d -= shift;

  // gauge-covariant start vector: BFS tree signs on free nodes
  std::vector<int8_t> tau = bfs_tree_signs(*s.gauge);
  std::vector<double> start(size_t(N), 0.0);
  for (int64_t v = 0; v < N; ++v)
    if (free_mask[size_t(v)]) start[size_t(v)] = double(tau[size_t(v)]);

  SpectrumReport rep;
  rep.tol_eig = 1e-8 / eps;

  const int m_first = int(std::min<int64_t>(F, std::max(40, 2 * k + 20)));
  auto run = [&](int m_max, SpectrumReport& out) -> bool {
    std::vector<std::vector<double>> Q;
    std::vector<double> alpha, beta;
    std::vector<double> w(size_t(N)), tmp(size_t(N));

    std::vector<double> v0 = start;
    double nrm = std::sqrt(dot_full(N, v0.data(), v0.data()));
    for (auto& x : v0) x /= nrm;
    Q.push_back(std::move(v0));

    for (int j = 0; j < m_max; ++j) {
      std::fill(w.begin(), w.end(), 0.0);
      int64_t it = 0;
      if (!cg_solve(N, [&](const double* x, double* y) { A.apply(x, y); }, Q[size_t(j)].data(),
                    w.data(), 1e-9, 200000, &it))
        fail(Err::LinearSolveFailure, "inner solve for the shifted Hessian stalled");
      if (j > 0)
        for (int64_t v = 0; v < N; ++v) w[size_t(v)] -= beta[size_t(j - 1)] * Q[size_t(j - 1)][size_t(v)];
      double a = dot_full(N, w.data(), Q[size_t(j)].data());
      for (int64_t v = 0; v < N; ++v) w[size_t(v)] -= a * Q[size_t(j)][size_t(v)];
      alpha.push_back(a);
      // two rounds of full reorthogonalization
      for (int round = 0; round < 2; ++round)
        for (const auto& q : Q) {
          double c = dot_full(N, w.data(), q.data());
          for (int64_t v = 0; v < N; ++v) w[size_t(v)] -= c * q[size_t(v)];
        }
      double b = std::sqrt(dot_full(N, w.data(), w.data()));
      if (!(b > 1e-12)) break;  // invariant subspace reached
      if (int(Q.size()) >= m_max) {
        beta.push_back(b);
        break;
      }
      beta.push_back(b);
      std::vector<double> next(size_t(N));
      for (int64_t v = 0; v < N; ++v) next[size_t(v)] = w[size_t(v)] / b;
      Q.push_back(std::move(next));
    }

    const int m = int(Q.size());
    if (m < k) return false;
    std::vector<double> d(alpha.begin(), alpha.begin() + m);
    std::vector<double> e(size_t(m), 0.0);
    for (int i = 1; i < m; ++i) e[size_t(i)] = beta[size_t(i - 1)];
    std::vector<std::vector<double>> z(size_t(m), std::vector<double>(size_t(m), 0.0));
    for (int i = 0; i < m; ++i) z[size_t(i)][size_t(i)] = 1.0;
    tql2(d, e, z);

    // largest theta of the inverse operator <-> lowest eigenvalues of H
    std::vector<int> order(size_t(m));
    for (int i = 0; i < m; ++i) order[size_t(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[size_t(a)] > d[size_t(b)]; });

    out.eigenvalues.clear();
    out.residuals.clear();
    out.lanczos_steps = m;
    bool ok = true;
    for (int t = 0; t < k; ++t) {
      int col = order[size_t(t)];
      double theta = d[size_t(col)];
      if (!(theta > 0)) return false;  // shifted operator is PD; stale Ritz value
      double lam = shift + 1.0 / theta;
      // Ritz vector and true residual
      std::fill(tmp.begin(), tmp.end(), 0.0);
      for (int j = 0; j < m; ++j) {
        double yj = z[size_t(j)][size_t(col)];
        const double* qj = Q[size_t(j)].data();
        for (int64_t v = 0; v < N; ++v) tmp[size_t(v)] += yj * qj[size_t(v)];
      }
      H.apply(tmp.data(), w.data());
      double xn2 = dot_full(N, tmp.data(), tmp.data());
      double rn2 = 0;
      for (int64_t v = 0; v < N; ++v) {
        double r = w[size_t(v)] - lam * tmp[size_t(v)];
        rn2 += r * r;
      }
      double resid = std::sqrt(rn2 / xn2);
      out.eigenvalues.push_back(lam);
      out.residuals.push_back(resid);
      if (resid > 1e-6) ok = false;
    }
    return ok;
  };

  if (!run(m_first, rep)) {
    SpectrumReport second;
    second.tol_eig = rep.tol_eig;
    if (!run(int(std::min<int64_t>(F, int64_t(2) * m_first)), second)) {
      if (!second.eigenvalues.empty()) rep = second;
      double worst = 0;
      for (double r : rep.residuals) worst = std::max(worst, r);
      fail(Err::EigSolverStall,
           "eigenvalue residuals stay above 1e-6 (worst " + std::to_string(worst) + ")");
    }
    rep = second;
  }

  rep.morse_index = 0;
  for (double lam : rep.eigenvalues)
    if (lam < -rep.tol_eig) ++rep.morse_index;
  return rep;
}

std::vector<double> zero_state_box_spectrum(const GridSpec& grid, double eps, int k) {
  for (int a = 0; a < grid.n; ++a)
    if (grid.dims[a] < 3) fail(Err::InvalidConfig, "box too small for interior modes");
  const double c = 4.0 / (grid.h * grid.h);
  std::vector<std::vector<double>> per_axis;
  for (int a = 0; a < grid.n; ++a) {
    int64_t modes = std::min<int64_t>(grid.dims[a] - 2, 40);
    std::vector<double> lam;
    for (int64_t m = 1; m <= modes; ++m) {
      double sn = std::sin(M_PI * double(m) / (2.0 * double(grid.dims[a] - 1)));
      lam.push_back(c * sn * sn);
    }
    per_axis.push_back(std::move(lam));
  }
  std::vector<double> sums{0.0};
  for (const auto& lam : per_axis) {
    std::vector<double> next;
    for (double s : sums)
      for (double l : lam) next.push_back(s + l);
    sums = std::move(next);
  }
  std::sort(sums.begin(), sums.end());
  if (int(sums.size()) < k) fail(Err::InvalidConfig, "fewer modes than eigenvalues requested");
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(eps * sums[size_t(i)] - 1.0 / eps);
  return out;
}

}  // namespace acpl
