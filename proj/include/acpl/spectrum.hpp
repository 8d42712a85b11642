#pragma once

#include <vector>

#include "acpl/bundle.hpp"

namespace acpl {

// Second variation of the energy at u (per unit h^n volume):
//   H phi = -eps lap_sig phi + (3u^2 - 1)/eps phi
// restricted to free nodes; everything outside the mask is held at zero.
struct SpectrumReport {
  std::vector<double> eigenvalues;  // k lowest, ascending
  std::vector<double> residuals;    // ||H phi - lambda phi|| / ||phi||
  int morse_index = 0;              // #{ lambda < -tol_eig }
  double tol_eig = 0;               // 1e-8 / eps
  int lanczos_steps = 0;
};

// k lowest eigenvalues (k <= 20) by Lanczos on (H - s)^{-1} with the
// universal shift s = -1.2/eps (W'' >= -1 makes H - s positive definite).
// mask = nullptr frees every node off the box boundary. The start vector is
// a BFS tree sign field, so eigenvalues are bitwise gauge-invariant.
// Throws EigSolverStall when residuals stay above 1e-6.
SpectrumReport hessian_spectrum(const GaugeSection& s, const std::vector<uint8_t>* mask, int k);

// analytic spectrum of H at u = 0 with trivial gauge and zero walls: sums of
// discrete sine-mode Laplacian eigenvalues, eps * sum_a (4/h^2)
// sin^2(pi m_a / (2 (dims_a - 1))) - 1/eps, k lowest
std::vector<double> zero_state_box_spectrum(const GridSpec& grid, double eps, int k);

// sign field tau with tau_root = +1 and tau_w = sig * tau_v across each BFS
// tree edge; in a gauge with no frustration this trivializes every edge
std::vector<int8_t> bfs_tree_signs(const GaugeField& gf);

}  // namespace acpl
