#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acpl/solver.hpp"

namespace acpl {

struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0;
  std::string detail;
};

// Scenario outcome. `json` is the full report document; it contains no wall
// clock or host detail, so identical inputs reproduce it byte for byte.
struct ExperimentReport {
  std::string scenario;
  std::vector<Verdict> verdicts;
  std::string json;
  std::vector<std::string> artifacts;  // files written under out_dir

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

struct ExperimentOptions {
  uint64_t seed = 1;
  std::string out_dir;          // empty: write no files
  double tol_r = 0;             // 0: scenario default
  int64_t max_iters = 0;        // 0: scenario default
  bool with_refinement = true;  // secondary half-h comparison solves
  bool with_spectrum = true;    // Hessian checks (skipped on very large grids)
};

// 1D transition layer on [-8 eps, 8 eps], Dirichlet -1/+1: energy against
// the closed form 2 sqrt(2)/3 and against direct quadrature, discrepancy
// size, stability, and the order-two refinement ratio.
ExperimentReport run_heteroclinic_1d(double eps, double h,
                                     const ExperimentOptions& opt = {});

// 2D puncture on [-half_side, half_side]^2 with `nodes` per side:
// continuation over the eps schedule, boundary exponents, parity-linking
// duality, monotonicity, the nodal ray, and the double-cover comparison.
ExperimentReport run_puncture_2d(const std::vector<double>& schedule, int64_t nodes,
                                 double half_side, const ExperimentOptions& opt = {});

// 3D spanning disk of a radius-R circle, box side 4R: limiting mass against
// pi R^2, nodal-mesh topology, boundary density ratios, first variation and
// monotonicity.
ExperimentReport run_disk_3d(double R, const std::vector<double>& schedule, int64_t nodes,
                             const ExperimentOptions& opt = {});

// Two radius-R rings at separation d, box side 4R, single eps. Minimizes
// from both the two-disk and the cylinder-pill initialization, keeps the
// lower energy, classifies the result, and compares the mass with
// min(catenoid area, two disks).
ExperimentReport run_catenoid(double R, double d, double eps, int64_t nodes,
                              const ExperimentOptions& opt = {});

// Lateral area of the stable catenoid r = c cosh(z/c) through r(+-d/2) = R
// (composite Simpson over nz intervals); empty when no catenary spans the
// rings (d/R beyond about 1.3255).
std::optional<double> catenary_area_oracle(double R, double d, int nz = 4096);

// separation where the catenoid area equals that of the two flat disks
double goldschmidt_separation(double R);

}  // namespace acpl
