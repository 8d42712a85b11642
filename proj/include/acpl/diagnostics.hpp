#pragma once

#include <vector>

#include "acpl/energy.hpp"
#include "acpl/geometry.hpp"
#include "acpl/mesh.hpp"

namespace acpl {

// exact distance from every node to the boundary curve (infinity when gamma
// is empty)
std::vector<double> gamma_distance_field(const GridSpec& grid, const BoundaryManifold& gamma);

struct XiNorms {
  double sup_pos = 0;  // sup of the positive part
  double l1_pos = 0;   // integrals carry the h^n weight
  double l1_neg = 0;
  double l1_abs = 0;
  int64_t count = 0;
};

// xi = eps |grad u|^2 / 2 - W(u)/eps, the difference of the two energy
// densities; |grad u|^2 at a node averages the squared covariant one-sided
// differences over the edges actually present
struct DiscrepancyField {
  std::vector<double> xi;
  std::vector<double> grad2;
  XiNorms whole;
};

DiscrepancyField discrepancy(const GaugeSection& s);

// norms over { rho > delta }; pass rho = nullptr for the whole grid
XiNorms xi_norms(const GridSpec& grid, const std::vector<double>& xi,
                 const std::vector<double>* rho, double delta);

struct InteriorBoundReport {
  double delta;
  double sup_abs_u;  // over { rho > delta }; clamping keeps this <= 1 exactly
  XiNorms norms;     // xi norms over the same region
};

// requires delta >= 4 eps so the window clears the boundary layer
InteriorBoundReport interior_bound_checks(const GaugeSection& s, const std::vector<double>& rho,
                                          double delta);

// Cell-based diffuse varifold: mass density (1/sigma) sqrt(W/2) |grad u| h^n
// with the gradient taken in a per-cell spanning-tree gauge. The normal is
// the gradient direction; its sign is a gauge choice, so only the projector
// n n^T is meaningful. Cells pierced by the boundary curve are skipped.
struct DiffuseVarifold {
  int n = 3;
  std::array<int64_t, 3> cells{1, 1, 1};
  std::vector<double> weight;
  std::vector<Vec3> normal;
  std::vector<uint8_t> has_tangent;  // 0 where |grad u| < 1e-12
  double total_mass = 0;
  int64_t skipped_cells = 0;
};

DiffuseVarifold varifold(const GaugeSection& s);

// mass of the cells whose centers lie in the closed ball
double varifold_mass_ball(const DiffuseVarifold& V, const GridSpec& grid, const Vec3& p,
                          double r);

// First variation delta V(g) = (1/sigma) sum_cells (div g - n^T Dg n)
// sqrt(W/2) |grad u| h^n with cell-centered derivatives of g from corner
// differences; the projector term is dropped where the tangent is undefined.
// g must vanish on the box boundary. With gamma and rho given, nodes inside
// the tube { rho < tube_radius } must satisfy |g - (g.t)t| <= C_tangent
// (rho + h) against the tangent of the nearest strand (in 2d gamma is a
// point and the whole of g must vanish at that rate); violation raises
// GNotTangent.
double first_variation(const DiffuseVarifold& V, const GaugeSection& s,
                       const std::vector<Vec3>& g, const BoundaryManifold* gamma = nullptr,
                       const std::vector<double>* rho = nullptr, double tube_radius = 0,
                       double C_tangent = 0);

// sup over cells of the largest |partial_i g_j| entry, same stencil as
// first_variation
double sup_grad_matrix(const GridSpec& grid, const std::vector<Vec3>& g);

struct MonotonicityProfile {
  Vec3 center;
  double lambda_hat = 0;
  std::vector<double> radii;
  std::vector<double> ball_energy;  // E(B_r), non-decreasing by node nesting
  std::vector<double> values;       // M(r) = e^{lambda r} r^{1-n} E(B_r)
  bool monotone = false;            // non-decreasing within 2% relative slack
  double worst_rel_drop = 0;        // most negative (M_{i+1} - M_i)/M_i
};

// radii are nr equal steps over [r_lo, r_max]. With gamma given, the ball
// B_{r_max}(p) must stay clear of every strand except the one through p
// (RegionTouchesOtherComponent).
MonotonicityProfile monotonicity_profile(const GaugeSection& s, const Vec3& p,
                                         double lambda_hat, double r_lo, double r_max, int nr,
                                         const BoundaryManifold* gamma = nullptr);

// smallest nonnegative lambda that makes a lambda = 0 profile monotone
// within the slack
double fit_lambda_hat(const MonotonicityProfile& prof, double slack = 0.02);

struct DensityRatio {
  double r;
  double theta_energy;  // E(B_r) / (2 sigma omega_{n-1} r^{n-1})
  double theta_mass;    // varifold mass over the same ball / (omega_{n-1} r^{n-1})
};

DensityRatio density_ratio(const GaugeSection& s, const DiffuseVarifold& V, const Vec3& p,
                           double r);

struct HausdorffReport {
  double sub_to_mesh;
  double mesh_to_sub;
  double max_two_sided;
  int64_t sublevel_count;
};

// two-sided Hausdorff distance between the nodes { |u| <= 1-b } and the
// extracted nodal mesh; EmptySublevel when no node qualifies
HausdorffReport hausdorff_sublevel(const GaugeSection& s, double b, const NodalMesh& mesh);

struct LogLogFit {
  double slope = 0;
  double intercept = 0;
  double rms = 0;
  int64_t count = 0;
};

// least squares of log y against log x over pairs with x, y > 0
LogLogFit log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingFit {
  double a_u, a_g;      // slopes of log|u| and log|grad u| vs log rho
  double rms_u, rms_g;
  int64_t count;
  std::vector<double> bin_rho, bin_u, bin_g;  // dyadic bin geometric means
};

// per-node fit over rho in [rho_lo, rho_hi]; requires eps >= 8h and a
// populated window (WindowTooThin)
ScalingFit boundary_scaling_fit(const GaugeSection& s, const std::vector<double>& rho,
                                double rho_lo, double rho_hi);

}  // namespace acpl
