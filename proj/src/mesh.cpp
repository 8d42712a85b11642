#include "acpl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "acpl/error.hpp"

namespace acpl {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// crossing vertex on the (possibly diagonal) segment between two grid nodes,
// interpolated from the cell-gauge values. The smaller node id goes first so
// that adjacent cells (whose gauges agree up to a global flip) produce the
// same parameter bit for bit.
struct VertexPool {
  std::map<std::pair<NodeId, NodeId>, int> index;
  std::vector<Vec3>* verts;

  int get(const GridSpec& g, NodeId na, NodeId nb, double ua, double ub) {
    if (nb < na) {
      std::swap(na, nb);
      std::swap(ua, ub);
    }
    auto key = std::make_pair(na, nb);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    double t = ua / (ua - ub);
    Vec3 pa = g.pos(na), pb = g.pos(nb);
    int id = int(verts->size());
    verts->push_back(pa + (pb - pa) * t);
    index.emplace(key, id);
    return id;
  }
};

constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                             {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

}  // namespace

NodalMesh extract_nodal_set(const GaugeSection& s) {
  const GridSpec& g = s.grid();
  const GaugeField& gf = *s.gauge;
  const int64_t N = g.nodes();
  const int8_t* sgx = gf.sig.data();
  const int8_t* sgy = sgx + N;
  const int8_t* sgz = sgy + N;
  const double* u = s.u.data();
  const int64_t sy = g.stride(1), sz = g.stride(2);

  NodalMesh mesh;
  mesh.n = g.n;
  VertexPool pool;
  pool.verts = &mesh.verts;

  if (g.n == 2) {
    for (int64_t j = 0; j + 1 < g.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < g.dims[0]; ++i) {
        NodeId c0 = g.idx(i, j, 0);
        NodeId cn[4] = {c0, c0 + 1, c0 + sy, c0 + sy + 1};
        // spanning tree: x edge at c0, then both y edges
        int sg[4];
        sg[0] = 1;
        sg[1] = sgx[c0];
        sg[2] = sgy[c0];
        sg[3] = sg[1] * sgy[c0 + 1];
        if (sg[3] != sg[2] * sgx[c0 + sy]) {  // top x edge conflicts: pierced cell
          ++mesh.skipped_cells;
          continue;
        }
        double uv[4];
        for (int t = 0; t < 4; ++t) uv[t] = double(sg[t]) * u[cn[t]];
        bool pos[4];
        for (int t = 0; t < 4; ++t) pos[t] = uv[t] >= 0;
        // two triangles (0,1,3) and (0,3,2) on the fixed diagonal 0-3
        const int tris2[2][3] = {{0, 1, 3}, {0, 3, 2}};
        for (const auto& tri : tris2) {
          int np = pos[tri[0]] + pos[tri[1]] + pos[tri[2]];
          if (np == 0 || np == 3) continue;
          int odd = -1;
          bool oddpos = np == 1;
          for (int t = 0; t < 3; ++t)
            if (pos[tri[t]] == oddpos) odd = tri[t];
          int others[2];
          int m = 0;
          for (int t = 0; t < 3; ++t)
            if (tri[t] != odd) others[m++] = tri[t];
          int a = pool.get(g, cn[odd], cn[others[0]], uv[odd], uv[others[0]]);
          int b = pool.get(g, cn[odd], cn[others[1]], uv[odd], uv[others[1]]);
          if (a != b) mesh.segs.push_back({a, b});
        }
      }
    return mesh;
  }

  for (int64_t k = 0; k + 1 < g.dims[2]; ++k)
    for (int64_t j = 0; j + 1 < g.dims[1]; ++j)
      for (int64_t i = 0; i + 1 < g.dims[0]; ++i) {
        NodeId c0 = g.idx(i, j, k);
        NodeId cn[8];
        for (int b = 0; b < 8; ++b)
          cn[b] = c0 + (b & 1 ? 1 : 0) + (b & 2 ? sy : 0) + (b & 4 ? sz : 0);
        // spanning tree rooted at corner 0
        int sg[8];
        sg[0] = 1;
        sg[1] = sgx[cn[0]];
        sg[2] = sgy[cn[0]];
        sg[3] = sg[1] * sgy[cn[1]];
        sg[4] = sgz[cn[0]];
        sg[5] = sg[1] * sgz[cn[1]];
        sg[6] = sg[2] * sgz[cn[2]];
        sg[7] = sg[3] * sgz[cn[3]];
        // remaining edges must agree, else the cell is pierced
        bool ok = sg[3] == sg[2] * sgx[cn[2]] && sg[5] == sg[4] * sgx[cn[4]] &&
                  sg[7] == sg[6] * sgx[cn[6]] && sg[6] == sg[4] * sgy[cn[4]] &&
                  sg[7] == sg[5] * sgy[cn[5]];
        if (!ok) {
          ++mesh.skipped_cells;
          continue;
        }
        double uv[8];
        bool anyp = false, anyn = false;
        for (int t = 0; t < 8; ++t) {
          uv[t] = double(sg[t]) * u[cn[t]];
          (uv[t] >= 0 ? anyp : anyn) = true;
        }
        if (!anyp || !anyn) continue;
        for (const auto& tet : kTets) {
          int ppos[4], pneg[4];
          int np = 0, nn = 0;
          for (int t = 0; t < 4; ++t) {
            if (uv[tet[t]] >= 0) ppos[np++] = tet[t];
            else pneg[nn++] = tet[t];
          }
          if (np == 0 || nn == 0) continue;
          if (np == 1 || nn == 1) {
            int apex = np == 1 ? ppos[0] : pneg[0];
            int* rest = np == 1 ? pneg : ppos;
            int v0 = pool.get(g, cn[apex], cn[rest[0]], uv[apex], uv[rest[0]]);
            int v1 = pool.get(g, cn[apex], cn[rest[1]], uv[apex], uv[rest[1]]);
            int v2 = pool.get(g, cn[apex], cn[rest[2]], uv[apex], uv[rest[2]]);
            if (v0 != v1 && v1 != v2 && v0 != v2) mesh.tris.push_back({v0, v1, v2});
            continue;
          }
          // 2-2 case: quad cycle (a0b0, a0b1, a1b1, a1b0); split on the
          // diagonal at the crossing with the smallest node-pair key, which
          // is independent of the gauge and of which side is positive
          int q[4] = {
              pool.get(g, cn[ppos[0]], cn[pneg[0]], uv[ppos[0]], uv[pneg[0]]),
              pool.get(g, cn[ppos[0]], cn[pneg[1]], uv[ppos[0]], uv[pneg[1]]),
              pool.get(g, cn[ppos[1]], cn[pneg[1]], uv[ppos[1]], uv[pneg[1]]),
              pool.get(g, cn[ppos[1]], cn[pneg[0]], uv[ppos[1]], uv[pneg[0]]),
          };
          auto keyof = [&](int corner_a, int corner_b) {
            NodeId a = cn[corner_a], b = cn[corner_b];
            return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
          };
          std::pair<NodeId, NodeId> keys[4] = {keyof(ppos[0], pneg[0]), keyof(ppos[0], pneg[1]),
                                               keyof(ppos[1], pneg[1]), keyof(ppos[1], pneg[0])};
          int m = 0;
          for (int t = 1; t < 4; ++t)
            if (keys[t] < keys[m]) m = t;
          int d0 = m, d1 = (m + 1) % 4, d2 = (m + 2) % 4, d3 = (m + 3) % 4;
          if (q[d0] != q[d1] && q[d1] != q[d2] && q[d0] != q[d2])
            mesh.tris.push_back({q[d0], q[d1], q[d2]});
          if (q[d0] != q[d2] && q[d2] != q[d3] && q[d0] != q[d3])
            mesh.tris.push_back({q[d0], q[d2], q[d3]});
        }
      }
  return mesh;
}

MeshTopology mesh_topology(const NodalMesh& m) {
  MeshTopology topo;
  int nv = int(m.verts.size());
  if (nv == 0) return topo;
  UnionFind uf(nv);

  if (m.n == 2) {
    std::vector<int> degree(size_t(nv), 0);
    for (const auto& sgm : m.segs) {
      uf.unite(sgm[0], sgm[1]);
      ++degree[size_t(sgm[0])];
      ++degree[size_t(sgm[1])];
      topo.measure += dist(m.verts[size_t(sgm[0])], m.verts[size_t(sgm[1])]);
    }
    std::map<int, ComponentInfo> comps;
    std::map<int, int> endpoints;
    for (const auto& sgm : m.segs) {
      auto& ci = comps[uf.find(sgm[0])];
      ci.edges += 1;
      ci.measure += dist(m.verts[size_t(sgm[0])], m.verts[size_t(sgm[1])]);
    }
    for (int v = 0; v < nv; ++v) {
      if (degree[size_t(v)] == 0) continue;
      auto& ci = comps[uf.find(v)];
      ci.verts += 1;
      if (degree[size_t(v)] == 1) ++endpoints[uf.find(v)];
    }
    for (auto& [root, ci] : comps) {
      ci.euler = ci.verts - ci.edges;
      ci.boundary_loops = endpoints.count(root) ? endpoints[root] : 0;  // endpoint count
      ci.genus = 0;
      topo.per_component.push_back(ci);
      ++topo.components;
      if (ci.boundary_loops > 0) ++topo.open_curves;
      else ++topo.closed_curves;
      topo.euler += ci.euler;
    }
    return topo;
  }

  std::map<std::pair<int, int>, int> edge_count;
  auto ekey = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
  for (const auto& t : m.tris) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
    ++edge_count[ekey(t[0], t[1])];
    ++edge_count[ekey(t[1], t[2])];
    ++edge_count[ekey(t[0], t[2])];
  }

  std::map<int, ComponentInfo> comps;
  std::vector<uint8_t> used(size_t(nv), 0);
  for (const auto& t : m.tris) {
    auto& ci = comps[uf.find(t[0])];
    ci.faces += 1;
    Vec3 a = m.verts[size_t(t[0])], b = m.verts[size_t(t[1])], c = m.verts[size_t(t[2])];
    double ar = 0.5 * norm(cross(b - a, c - a));
    ci.measure += ar;
    topo.measure += ar;
    for (int s = 0; s < 3; ++s) used[size_t(t[s])] = 1;
  }
  for (int v = 0; v < nv; ++v)
    if (used[size_t(v)]) comps[uf.find(v)].verts += 1;
  for (const auto& [e, cnt] : edge_count) comps[uf.find(e.first)].edges += 1;

  // boundary loops: connected components of the graph of edges on exactly
  // one triangle
  UnionFind buf(nv);
  std::vector<uint8_t> on_boundary(size_t(nv), 0);
  for (const auto& [e, cnt] : edge_count)
    if (cnt == 1) {
      buf.unite(e.first, e.second);
      on_boundary[size_t(e.first)] = on_boundary[size_t(e.second)] = 1;
    }
  std::map<int, std::map<int, int>> loops_per_comp;  // surface root -> boundary roots
  for (int v = 0; v < nv; ++v)
    if (on_boundary[size_t(v)]) ++loops_per_comp[uf.find(v)][buf.find(v)];

  for (auto& [root, ci] : comps) {
    ci.euler = ci.verts - ci.edges + ci.faces;
    ci.boundary_loops = loops_per_comp.count(root) ? int(loops_per_comp[root].size()) : 0;
    ci.genus = int((2 - ci.euler - ci.boundary_loops) / 2);
    topo.per_component.push_back(ci);
    ++topo.components;
    topo.euler += ci.euler;
    topo.boundary_loops += ci.boundary_loops;
    topo.genus_total += std::max(0, ci.genus);
  }
  return topo;
}

void write_obj(const NodalMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Err::IoFailure, "cannot write mesh: " + path);
  char buf[160];
  for (const auto& v : m.verts) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& sgm : m.segs) out << "l " << sgm[0] + 1 << " " << sgm[1] + 1 << "\n";
  for (const auto& t : m.tris)
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

MeshDistance::MeshDistance(const NodalMesh& m) : m_(m) {
  elems_ = m.n == 2 ? int64_t(m.segs.size()) : int64_t(m.tris.size());
  if (elems_ == 0) { cell_ = 1; nx_ = ny_ = nz_ = 1; buckets_.resize(1); return; }
  Vec3 hi = m.verts[0];
  lo_ = m.verts[0];
  for (const auto& v : m.verts)
    for (int a = 0; a < 3; ++a) {
      lo_[a] = std::min(lo_[a], v[a]);
      hi[a] = std::max(hi[a], v[a]);
    }
  double diam = std::max({hi.x - lo_.x, hi.y - lo_.y, hi.z - lo_.z, 1e-12});
  // aim for ~64^n buckets
  cell_ = diam / 64.0;
  nx_ = int64_t((hi.x - lo_.x) / cell_) + 1;
  ny_ = int64_t((hi.y - lo_.y) / cell_) + 1;
  nz_ = m.n == 2 ? 1 : int64_t((hi.z - lo_.z) / cell_) + 1;
  buckets_.assign(size_t(nx_ * ny_ * nz_), {});
  for (int e = 0; e < elems_; ++e) {
    Vec3 blo, bhi;
    if (m.n == 2) {
      blo = m.verts[size_t(m.segs[size_t(e)][0])];
      bhi = blo;
      for (int s = 0; s < 2; ++s) {
        const Vec3& v = m.verts[size_t(m.segs[size_t(e)][s])];
        for (int a = 0; a < 3; ++a) {
          blo[a] = std::min(blo[a], v[a]);
          bhi[a] = std::max(bhi[a], v[a]);
        }
      }
    } else {
      blo = m.verts[size_t(m.tris[size_t(e)][0])];
      bhi = blo;
      for (int s = 0; s < 3; ++s) {
        const Vec3& v = m.verts[size_t(m.tris[size_t(e)][s])];
        for (int a = 0; a < 3; ++a) {
          blo[a] = std::min(blo[a], v[a]);
          bhi[a] = std::max(bhi[a], v[a]);
        }
      }
    }
    int64_t i0 = int64_t((blo.x - lo_.x) / cell_), i1 = int64_t((bhi.x - lo_.x) / cell_);
    int64_t j0 = int64_t((blo.y - lo_.y) / cell_), j1 = int64_t((bhi.y - lo_.y) / cell_);
    int64_t k0 = m.n == 2 ? 0 : int64_t((blo.z - lo_.z) / cell_);
    int64_t k1 = m.n == 2 ? 0 : int64_t((bhi.z - lo_.z) / cell_);
    for (int64_t k = k0; k <= k1; ++k)
      for (int64_t j = j0; j <= j1; ++j)
        for (int64_t i = i0; i <= i1; ++i) buckets_[size_t(bucket(i, j, k))].push_back(e);
  }
}

double MeshDistance::elem_dist(const Vec3& p, int e) const {
  if (m_.n == 2) {
    const auto& s = m_.segs[size_t(e)];
    return point_segment_distance(p, m_.verts[size_t(s[0])], m_.verts[size_t(s[1])]);
  }
  const auto& t = m_.tris[size_t(e)];
  return point_triangle_distance(p, m_.verts[size_t(t[0])], m_.verts[size_t(t[1])],
                                 m_.verts[size_t(t[2])]);
}

double MeshDistance::operator()(const Vec3& p) const {
  if (elems_ == 0) return std::numeric_limits<double>::infinity();
  int64_t pi = int64_t(std::floor((p.x - lo_.x) / cell_));
  int64_t pj = int64_t(std::floor((p.y - lo_.y) / cell_));
  int64_t pk = m_.n == 2 ? 0 : int64_t(std::floor((p.z - lo_.z) / cell_));
  double best = std::numeric_limits<double>::infinity();
  int64_t max_ring = std::max({nx_, ny_, nz_});
  for (int64_t ring = 0; ring <= max_ring; ++ring) {
    // once a hit exists, rings beyond best/cell_ + 1 cannot improve it
    if (best < std::numeric_limits<double>::infinity() &&
        double(ring - 1) * cell_ > best)
      break;
    for (int64_t k = pk - ring; k <= pk + ring; ++k) {
      if (k < 0 || k >= nz_) continue;
      for (int64_t j = pj - ring; j <= pj + ring; ++j) {
        if (j < 0 || j >= ny_) continue;
        for (int64_t i = pi - ring; i <= pi + ring; ++i) {
          if (i < 0 || i >= nx_) continue;
          // only the shell of the ring
          int64_t d = std::max({std::llabs(i - pi), std::llabs(j - pj), std::llabs(k - pk)});
          if (d != ring) continue;
          for (int e : buckets_[size_t(bucket(i, j, k))])
            best = std::min(best, elem_dist(p, e));
        }
      }
    }
  }
  return best;
}

}  // namespace acpl
