#pragma once

#include <vector>

#include "acpl/bundle.hpp"
#include "acpl/geometry.hpp"

namespace acpl {

// Odd double-cover representative of a 2D section around the puncture p:
// v(z) = u(z^2 + p) with the sign chosen continuously, so v(-z) = -v(z).
// Requires the section to be in the built seam gauge, whose sign interface
// is the +x ray from p; bilinear interpolation is done in a local gauge
// continuous at the evaluation point. Every image z^2 + p must land inside
// the base grid box. With gamma given, the image disk must stay clear of
// the other components (RegionTouchesOtherComponent).
std::vector<double> lift_to_double_cover_2d(const GaugeSection& s, const Vec3& p,
                                            const GridSpec& vgrid,
                                            const BoundaryManifold* gamma = nullptr);

}  // namespace acpl
