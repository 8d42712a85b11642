#include "acpl/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "acpl/error.hpp"

namespace acpl {

void BoundaryManifold::validate() const {
  if (n != 2 && n != 3) fail(Err::DegenerateGamma, "boundary dimension must be 2 or 3");
  if (components.empty()) fail(Err::DegenerateGamma, "boundary has no components");
  for (size_t c = 0; c < components.size(); ++c) {
    const auto& v = components[c];
    if (n == 2) {
      if (v.size() != 1)
        fail(Err::DegenerateGamma, "2d component " + std::to_string(c) + " must be a single point");
      continue;
    }
    if (v.size() < 8)
      fail(Err::DegenerateGamma,
           "component " + std::to_string(c) + " has " + std::to_string(v.size()) +
               " vertices, need at least 8");
    double per = 0;
    for (size_t i = 0; i < v.size(); ++i) per += dist(v[i], v[(i + 1) % v.size()]);
    for (size_t i = 0; i < v.size(); ++i) {
      double L = dist(v[i], v[(i + 1) % v.size()]);
      if (L < 1e-12 * (per + 1e-300))
        fail(Err::DegenerateGamma, "component " + std::to_string(c) + " has a zero-length segment");
    }
  }
}

void BoundaryManifold::offset_by(const Vec3& d) {
  for (auto& comp : components)
    for (auto& v : comp) v += d;
}

BoundaryManifold load_boundary(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoFailure, "cannot open boundary file: " + path);
  BoundaryManifold gamma;
  gamma.n = 0;
  std::string line;
  int lineno = 0;
  std::vector<Vec3>* cur = nullptr;
  size_t expect = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line.substr(0, line.find('#'));
    std::istringstream ss(s);
    std::string tok;
    if (!(ss >> tok)) continue;
    if (tok == "component") {
      long nv = -1;
      if (!(ss >> nv) || nv < 1)
        fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": bad component header");
      if (cur && cur->size() != expect)
        fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": previous component short");
      gamma.components.emplace_back();
      cur = &gamma.components.back();
      expect = size_t(nv);
      continue;
    }
    if (!cur) fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": vertex before header");
    std::istringstream vs(s);
    double x, y, z;
    if (!(vs >> x >> y)) fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": bad vertex");
    bool has_z = bool(vs >> z);
    int dim = has_z ? 3 : 2;
    if (gamma.n == 0) gamma.n = dim;
    if (gamma.n != dim)
      fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": mixed vertex dimensions");
    cur->push_back(has_z ? Vec3{x, y, z} : Vec3{x, y});
    if (cur->size() > expect)
      fail(Err::IoFailure, path + ":" + std::to_string(lineno) + ": too many vertices");
  }
  if (cur && cur->size() != expect) fail(Err::IoFailure, path + ": last component short");
  gamma.validate();
  return gamma;
}

void save_boundary(const BoundaryManifold& gamma, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Err::IoFailure, "cannot write boundary file: " + path);
  char buf[128];
  for (const auto& comp : gamma.components) {
    out << "component " << comp.size() << "\n";
    for (const auto& v : comp) {
      if (gamma.n == 2)
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
      else
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
      out << buf;
    }
  }
}

BoundaryManifold make_point_2d(double x, double y) {
  BoundaryManifold g;
  g.n = 2;
  g.components.push_back({Vec3{x, y}});
  return g;
}

BoundaryManifold make_circle_3d(const Vec3& center, double R, const Vec3& axis, int nverts) {
  if (nverts == 0) nverts = std::max(64, int(std::ceil(64.0 * R)));
  Vec3 az = axis / norm(axis);
  // any unit vector orthogonal to az
  Vec3 seed = std::abs(az.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = seed - az * dot(seed, az);
  e1 = e1 / norm(e1);
  Vec3 e2 = cross(az, e1);
  BoundaryManifold g;
  g.n = 3;
  g.components.emplace_back();
  auto& v = g.components.back();
  v.reserve(nverts);
  for (int i = 0; i < nverts; ++i) {
    double th = 2.0 * M_PI * double(i) / double(nverts);
    v.push_back(center + e1 * (R * std::cos(th)) + e2 * (R * std::sin(th)));
  }
  return g;
}

void append_component(BoundaryManifold& gamma, const BoundaryManifold& other) {
  if (gamma.components.empty()) gamma.n = other.n;
  if (gamma.n != other.n) fail(Err::DegenerateGamma, "mixed boundary dimensions");
  for (const auto& c : other.components) gamma.components.push_back(c);
}

double distance_to_component(const BoundaryManifold& gamma, int comp, const Vec3& p) {
  const auto& v = gamma.components[comp];
  if (v.size() == 1) return dist(p, v[0]);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < v.size(); ++i)
    best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

double distance_to_gamma(const BoundaryManifold& gamma, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < gamma.components.size(); ++c)
    best = std::min(best, distance_to_component(gamma, int(c), p));
  return best;
}

int nearest_component(const BoundaryManifold& gamma, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (size_t c = 0; c < gamma.components.size(); ++c) {
    double d = distance_to_component(gamma, int(c), p);
    if (d < best) { best = d; arg = int(c); }
  }
  return arg;
}

namespace {

// circumradius through three consecutive vertices; infinite when collinear
double circumradius(const Vec3& a, const Vec3& b, const Vec3& c) {
  double A = dist(b, c), B = dist(a, c), C = dist(a, b);
  double K2 = norm(cross(b - a, c - a));  // 2 * triangle area
  if (K2 < 1e-14 * A * B * C + 1e-300) return std::numeric_limits<double>::infinity();
  return A * B * C / (2.0 * K2);
}

double box_margin(const BoundaryManifold& gamma, const GridSpec& grid) {
  Vec3 lo = grid.box_min(), hi = grid.box_max();
  double m = std::numeric_limits<double>::infinity();
  for (const auto& comp : gamma.components)
    for (const auto& v : comp)
      for (int a = 0; a < grid.n; ++a) {
        m = std::min(m, v[a] - lo[a]);
        m = std::min(m, hi[a] - v[a]);
      }
  return m;
}

}  // namespace

TubularRadius tubular_radius(const BoundaryManifold& gamma, const GridSpec* grid) {
  gamma.validate();
  const double inf = std::numeric_limits<double>::infinity();
  TubularRadius out{inf, inf, inf};

  for (const auto& v : gamma.components) {
    if (v.size() < 3) continue;
    size_t m = v.size();
    for (size_t i = 0; i < m; ++i)
      out.reach_estimate =
          std::min(out.reach_estimate, circumradius(v[i], v[(i + 1) % m], v[(i + 2) % m]));
  }

  // separation between strands: distinct components always count; within a
  // component only genuine bottlenecks count, where the gap runs nearly
  // normal to both local tangents (otherwise nearby chords of a smooth arc
  // would masquerade as self-contact)
  size_t nc = gamma.components.size();
  auto seg = [&](size_t c, size_t i, Vec3& a, Vec3& b) {
    const auto& v = gamma.components[c];
    a = v[i];
    b = v[(i + 1) % v.size()];
  };
  for (size_t c1 = 0; c1 < nc; ++c1) {
    size_t m1 = gamma.components[c1].size() == 1 ? 1 : gamma.components[c1].size();
    for (size_t c2 = c1; c2 < nc; ++c2) {
      size_t m2 = gamma.components[c2].size() == 1 ? 1 : gamma.components[c2].size();
      for (size_t i = 0; i < m1; ++i) {
        Vec3 a0, a1;
        if (m1 == 1) a0 = a1 = gamma.components[c1][0];
        else seg(c1, i, a0, a1);
        size_t jstart = (c1 == c2) ? i + 2 : 0;
        for (size_t j = jstart; j < m2; ++j) {
          if (c1 == c2 && (j + 1) % m2 == i) continue;  // adjacent segments share a vertex
          Vec3 b0, b1;
          if (m2 == 1) b0 = b1 = gamma.components[c2][0];
          else seg(c2, j, b0, b1);
          Vec3 pa, pb;
          double d = segment_segment_closest(a0, a1, b0, b1, pa, pb);
          if (d >= out.separation) continue;
          if (c1 == c2) {
            Vec3 gap = pb - pa;
            double gn = norm(gap);
            if (gn < 1e-300) { out.separation = 0; continue; }
            Vec3 ta = a1 - a0, tb = b1 - b0;
            double ca = std::abs(dot(gap, ta)) / (gn * norm(ta) + 1e-300);
            double cb = std::abs(dot(gap, tb)) / (gn * norm(tb) + 1e-300);
            if (ca > 0.3 || cb > 0.3) continue;
          }
          out.separation = d;
        }
      }
    }
  }

  out.delta0 = std::min(out.reach_estimate, out.separation / 2.0);
  if (grid) out.delta0 = std::min(out.delta0, box_margin(gamma, *grid));
  if (out.delta0 <= 0)
    fail(Err::DegenerateGamma, "tubular radius collapsed to zero (self-touching boundary?)");
  return out;
}

SeamPanels make_seam_panels(const BoundaryManifold& gamma, const GridSpec& grid) {
  gamma.validate();
  SeamPanels p;
  p.ncomp = int(gamma.components.size());
  if (gamma.n == 2) {
    double x_exit = grid.box_max().x + grid.h;
    for (size_t c = 0; c < gamma.components.size(); ++c) {
      const Vec3& pt = gamma.components[c][0];
      p.segs.push_back({pt, Vec3{x_exit, pt.y}});
      p.seg_comp.push_back(int(c));
    }
    return p;
  }
  for (size_t c = 0; c < gamma.components.size(); ++c) {
    const auto& v = gamma.components[c];
    Vec3 apex{0, 0, 0};
    for (const auto& q : v) apex += q;
    apex = apex / double(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      p.tris.push_back({apex, v[i], v[(i + 1) % v.size()]});
      p.tri_comp.push_back(int(c));
    }
  }
  return p;
}

LinkResult linking(const GridSpec& grid, const GridLoop& loop, const BoundaryManifold& gamma) {
  SeamPanels panels = make_seam_panels(gamma, grid);
  LinkResult r;
  r.per_component.assign(size_t(panels.ncomp), 0);
  size_t m = loop.nodes.size();
  for (size_t i = 0; i < m; ++i) {
    Vec3 a = grid.pos(loop.nodes[i]);
    Vec3 b = grid.pos(loop.nodes[(i + 1) % m]);
    if (gamma.n == 3) {
      for (size_t t = 0; t < panels.tris.size(); ++t) {
        int sign = 0;
        Cross cr = segment_triangle_cross(a, b, panels.tris[t][0], panels.tris[t][1],
                                          panels.tris[t][2], sign);
        if (cr == Cross::Degenerate)
          fail(Err::LoopTouchesSeamEdgeCase, "loop edge grazes a spanning panel");
        if (cr == Cross::Hit) r.per_component[size_t(panels.tri_comp[t])] += sign;
      }
    } else {
      for (size_t t = 0; t < panels.segs.size(); ++t) {
        int sign = 0;
        Cross cr = segment_segment_cross_2d(a, b, panels.segs[t][0], panels.segs[t][1], sign);
        if (cr == Cross::Degenerate)
          fail(Err::LoopTouchesSeamEdgeCase, "loop edge grazes a spanning ray");
        if (cr == Cross::Hit) r.per_component[size_t(panels.seg_comp[t])] += sign;
      }
    }
  }
  int total = 0;
  for (int v : r.per_component) total += v;
  r.mod2 = ((total % 2) + 2) % 2;
  return r;
}

}  // namespace acpl
