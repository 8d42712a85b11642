#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "acpl/bundle.hpp"
#include "acpl/energy.hpp"

namespace acpl {

enum class BcMode { DirichletPlusOne, Natural };
enum class InitMode { SeamProfile, Random, Checkpoint };

struct SolverConfig {
  std::vector<double> eps_schedule{0.1};  // strictly decreasing
  double tau = 0.5;                       // in (0, 1]; step solves (I - tau eps^2 lap) u+ = u - tau W'(u)
  double tol_r = 1e-6;                    // terminate when sup |eps^2 lap u - W'(u)| <= tol_r on free nodes
  int64_t max_iters = 20000;
  BcMode bc = BcMode::DirichletPlusOne;
  InitMode init = InitMode::SeamProfile;
  uint64_t seed = 1;
  double cg_tol = 1e-10;
  int cg_max = 20000;

  void validate() const;  // throws InvalidConfig
};

struct FixedBc {
  std::vector<uint8_t> fixed;  // 1 = value pinned
  std::vector<double> value;   // meaningful where fixed
};
FixedBc make_bc(const GridSpec& grid, BcMode mode);

struct IterRec {
  double energy;
  double res_sup;
  double tau;
};

enum class SolveStatus { Converged, MaxItersExceeded };

struct SolveResult {
  GaugeSection section;
  std::vector<IterRec> trace;
  SolveStatus status = SolveStatus::Converged;
  int64_t iters = 0;
};

// distance from every node to the seam panels, capped at `cap` (nodes beyond
// the inflated panel boxes keep the cap)
std::vector<double> seam_distance_field(const GridSpec& grid, const SeamPanels& panels,
                                        double cap);

// u = tanh(dist(x, seam) / (eps sqrt 2)); the built gauge carries the sign
// flip across the seam, so this is the transition profile over the seam
std::vector<double> seam_profile_init(const GridSpec& grid, const SeamSurface& seam, double eps);
std::vector<double> random_init(const GridSpec& grid, uint64_t seed);  // uniform [-0.5, 0.5]

// Semi-implicit gradient flow with step acceptance: a step is kept only if
// the energy does not increase, otherwise tau is halved (restored after five
// straight successes). Values are clamped to [-1, 1], which never raises the
// energy. Throws LinearSolveFailure if the inner CG stalls.
SolveResult minimize(GaugeSection s0, const FixedBc& bc, const SolverConfig& cfg);

struct ContinuationResult {
  std::vector<SolveResult> stages;   // one per epsilon, warm-started in order
  double competitor_energy = 0;      // energy of the first-stage initial profile
  bool energy_bound_ok = false;      // every stage's final energy <= competitor
};

ContinuationResult continuation(std::shared_ptr<const GaugeField> gauge, const SeamSurface& seam,
                                const FixedBc& bc, const SolverConfig& cfg,
                                const std::vector<double>* u0 = nullptr);

// deterministic CG for an SPD operator given as y = A x; vectors are dense
// over all nodes with fixed entries held at zero. Returns false when the
// relative residual target is not reached within max_iters.
bool cg_solve(int64_t N, const std::function<void(const double*, double*)>& apply,
              const double* b, double* x, double rel_tol, int max_iters, int64_t* iters_out);

}  // namespace acpl
