#pragma once

#include <array>
#include <string>
#include <vector>

#include "acpl/bundle.hpp"

namespace acpl {

// Zero set of a section, extracted cell by cell in a local spanning-tree
// gauge. Cells whose gauge cannot be made consistent (a face pierced by the
// boundary curve has holonomy -1) are skipped; the mesh therefore ends in a
// small collar around the boundary curve. u = 0 counts as positive.
struct NodalMesh {
  int n = 3;
  std::vector<Vec3> verts;
  std::vector<std::array<int, 2>> segs;  // 2d polyline pieces
  std::vector<std::array<int, 3>> tris;  // 3d triangles
  int64_t skipped_cells = 0;             // frustrated cells (pierced by the curve)
};

NodalMesh extract_nodal_set(const GaugeSection& s);

struct ComponentInfo {
  int64_t verts, edges, faces;
  int64_t euler;         // V - E + F
  int boundary_loops;    // connected components of the boundary-edge graph
  int genus;             // (2 - euler - loops) / 2, orientable closed-up surface
  double measure;        // area (3d) or length (2d)
};

struct MeshTopology {
  int components = 0;
  int64_t euler = 0;
  int boundary_loops = 0;
  int genus_total = 0;
  double measure = 0;
  int open_curves = 0;    // 2d only
  int closed_curves = 0;  // 2d only
  std::vector<ComponentInfo> per_component;
};

MeshTopology mesh_topology(const NodalMesh& m);

void write_obj(const NodalMesh& m, const std::string& path);

// exact point-to-mesh distance with a uniform spatial index
class MeshDistance {
public:
  explicit MeshDistance(const NodalMesh& m);
  double operator()(const Vec3& p) const;
  bool empty() const { return elems_ == 0; }

private:
  const NodalMesh& m_;
  int64_t elems_;
  double cell_;
  Vec3 lo_;
  int64_t nx_, ny_, nz_;
  std::vector<std::vector<int>> buckets_;

  int64_t bucket(int64_t i, int64_t j, int64_t k) const { return i + nx_ * (j + ny_ * k); }
  double elem_dist(const Vec3& p, int e) const;
};

}  // namespace acpl
