#pragma once

#include <cmath>
#include <vector>

#include "acpl/bundle.hpp"

namespace acpl {

// double well W(u) = (1-u^2)^2/4, so W' = (u^2-1)u and W'' = 3u^2-1
inline double well(double u) {
  double q = 1.0 - u * u;
  return 0.25 * q * q;
}
inline double well_d(double u) { return (u * u - 1.0) * u; }
inline double well_dd(double u) { return 3.0 * u * u - 1.0; }

// 1d transition profile tanh(z / (eps sqrt 2)); its total energy is 2*sigma
inline double heteroclinic(double eps, double z) { return std::tanh(z / (eps * M_SQRT2)); }

// surface tension sigma = 2 Phi(1) with Phi(t) = int_0^t sqrt(W(s)/2) ds,
// in closed form sqrt(2)/3
inline double sigma_constant() { return M_SQRT2 / 3.0; }

struct EnergyReport {
  double dirichlet = 0;  // sum over edges of (eps/2) ((u_x - sig u_y)/h)^2 h^n
  double potential = 0;  // sum over nodes of W(u_x)/eps h^n
  double total = 0;
};

EnergyReport energy(const GaugeSection& s);
// restricted energy; an edge belongs to the region iff its lower-corner node
// does, so regions partitioning the nodes partition the energy exactly
EnergyReport energy_region(const GaugeSection& s, const std::vector<uint8_t>& node_mask);
// energy of the ball { |x - p| <= r } by exact node membership
EnergyReport energy_ball(const GaugeSection& s, const Vec3& p, double r);

// g_x = -eps lap_sig u + W'(u_x)/eps; at box nodes the covariant Laplacian
// sums only existing edges
void energy_gradient(const GaugeSection& s, std::vector<double>& g);

struct ResidualReport {
  double sup = 0;           // sup |r| over all nodes
  double sup_interior = 0;  // sup over { rho > interior_delta }
};

// r = eps^2 lap_sig u - W'(u) = -eps * gradient
ResidualReport el_residual(const GaugeSection& s, const std::vector<double>* rho = nullptr,
                           double interior_delta = 0);

// deterministic sum: fixed 4096-element blocks combined in index order, so
// the result does not depend on threading or accumulation shortcuts
double blocked_sum(const std::vector<double>& terms);

}  // namespace acpl
