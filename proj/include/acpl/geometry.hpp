#pragma once

#include <string>
#include <vector>
#include <array>

#include "acpl/geom.hpp"
#include "acpl/grid.hpp"

namespace acpl {

// The boundary curve (3D: disjoint closed polylines; 2D: isolated points).
// A 3D component lists its vertices once; the segment from the last vertex
// back to the first is implied.
struct BoundaryManifold {
  int n = 3;
  std::vector<std::vector<Vec3>> components;

  void validate() const;  // throws DegenerateGamma
  void offset_by(const Vec3& d);
};

BoundaryManifold load_boundary(const std::string& path);
void save_boundary(const BoundaryManifold& gamma, const std::string& path);

BoundaryManifold make_point_2d(double x, double y);
// circle of radius R about `center` in the plane normal to `axis`; nverts = 0
// picks at least 64 vertices per unit curvature radius
BoundaryManifold make_circle_3d(const Vec3& center, double R, const Vec3& axis, int nverts = 0);
void append_component(BoundaryManifold& gamma, const BoundaryManifold& other);

// exact distance from p to the nearest segment (3D) or point (2D) of gamma
double distance_to_gamma(const BoundaryManifold& gamma, const Vec3& p);
int nearest_component(const BoundaryManifold& gamma, const Vec3& p);
// distance restricted to one component
double distance_to_component(const BoundaryManifold& gamma, int comp, const Vec3& p);

struct TubularRadius {
  double delta0;          // verified injectivity radius for the distance window
  double reach_estimate;  // min discrete curvature radius over components
  double separation;      // min distance between distinct strands
};

// delta0 = min(reach estimate, separation/2, distance from gamma to the box
// boundary when a grid is given). Throws DegenerateGamma for short or
// self-touching input.
TubularRadius tubular_radius(const BoundaryManifold& gamma, const GridSpec* grid = nullptr);

// Cone panels spanning gamma, used for gauge construction and for linking
// counts. 3D: triangles from each component centroid over its segments.
// 2D: a ray from each point to just past the +x box face.
struct SeamPanels {
  std::vector<std::array<Vec3, 3>> tris;
  std::vector<int> tri_comp;
  std::vector<std::array<Vec3, 2>> segs;
  std::vector<int> seg_comp;
  int ncomp = 0;
};
SeamPanels make_seam_panels(const BoundaryManifold& gamma, const GridSpec& grid);

struct LinkResult {
  std::vector<int> per_component;  // signed crossing counts
  int mod2;                        // total linking mod 2
};

// Signed crossings of the loop through each component's spanning panels.
// Throws LoopTouchesSeamEdgeCase when a loop edge grazes a panel.
LinkResult linking(const GridSpec& grid, const GridLoop& loop, const BoundaryManifold& gamma);

}  // namespace acpl
